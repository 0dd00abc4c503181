import json

import jsonschema
import pytest

from ordsurv import DataError, Scale, km_estimate, weighted_rank_test
from ordsurv.dataio import (
    ResultReport,
    curve_summary,
    parse_grouped_csv,
    parse_paired_csv,
    read_report_json,
    validate_report,
    write_report_json,
)

from .conftest import two_groups


class TestPairedCsv:
    def test_basic(self):
        s = parse_paired_csv("id,a,b\n1,3,3\n2,2,4\n3,5,1")
        assert len(s) == 3 and s.differences() == [0, 2, 4]

    def test_header_order_case_whitespace(self):
        s = parse_paired_csv(" B , ID,A\n 4 ,x, 2\n")
        assert (s.records[0].id, s.records[0].a, s.records[0].b) == ("x", 2, 4)

    def test_missing_column(self):
        with pytest.raises(DataError, match="missing column b"):
            parse_paired_csv("id,a\n1,3")

    def test_bad_number(self):
        with pytest.raises(DataError, match="bad number at line 2"):
            parse_paired_csv("id,a,b\n1,x,3")

    def test_non_finite(self):
        with pytest.raises(DataError, match="bad number at line 3"):
            parse_paired_csv("id,a,b\n1,1,3\n2,inf,3")

    def test_duplicate_id(self):
        with pytest.raises(DataError, match="duplicate id 7"):
            parse_paired_csv("id,a,b\n7,1,3\n7,2,2")

    def test_scale_check(self):
        with pytest.raises(DataError, match="out of scale"):
            parse_paired_csv("id,a,b\n1,1,19", Scale(0, 18))

    def test_blank_lines_and_bom(self):
        s = parse_paired_csv("\ufeffid,a,b\n\n1,1,3\n\n")
        assert len(s) == 1

    def test_ragged_row(self):
        with pytest.raises(DataError, match="line 2"):
            parse_paired_csv("id,a,b\n1,1")


class TestGroupedCsv:
    def test_basic(self):
        recs = parse_grouped_csv("id,group,score\n1,healthy,16\n2,affected,4")
        assert [r.group for r in recs] == ["healthy", "affected"]
        assert all(r.event for r in recs)

    def test_event_flag(self):
        (r,) = parse_grouped_csv("id,group,score,event\n1,g1,5,0")
        assert r.event is False and r.score == 5

    def test_bad_number(self):
        with pytest.raises(DataError, match="bad number at line 2"):
            parse_grouped_csv("id,group,score\n1,g1,abc")

    def test_bad_flag(self):
        with pytest.raises(DataError, match="bad event flag at line 3"):
            parse_grouped_csv("id,group,score,event\n1,g,1,1\n2,g,1,yes")

    def test_empty_group(self):
        with pytest.raises(DataError, match="empty group at line 2"):
            parse_grouped_csv("id,group,score\n1,,3")

    def test_missing_header(self):
        with pytest.raises(DataError):
            parse_grouped_csv("")


def _report(p_value=None):
    data = two_groups([1, 3], [2, 4])
    res = weighted_rank_test(data)
    test = res.to_dict()
    if p_value is not None:
        test["p_value"] = p_value
    return ResultReport(
        command="compare",
        method={"scheme": "tarone-ware", "construction": "grouped"},
        dataset={"n_per_group": {"A": 2, "B": 2}},
        curves=[curve_summary("A", km_estimate([1, 3])), curve_summary("B", km_estimate([2, 4]))],
        test=test,
        crossings={"curves_cross": False, "crossings": []},
    )


class TestReport:
    def test_integral_numbers(self):
        text = write_report_json(_report(p_value=1.0))
        assert '"p_value": 1\n' in text or '"p_value": 1,' in text

    def test_statistic(self):
        data = json.loads(write_report_json(_report()))
        assert data["test"]["statistic"] == pytest.approx(0.58909, abs=1e-5)
        assert data["schema_version"] == "1"

    def test_twelve_significant_digits(self):
        data = json.loads(write_report_json({"x": 2 / 3, "y": 1e-20 / 3, "z": [0.1 + 0.2]}))
        assert data == {"x": 0.666666666667, "y": 3.33333333333e-21, "z": [0.3]}

    def test_round_trip(self):
        text = write_report_json(_report())
        parsed = read_report_json(text)
        assert write_report_json(parsed) == text
        assert read_report_json(write_report_json(parsed)) == parsed

    def test_schema(self):
        validate_report(_report())
        bad = json.loads(write_report_json(_report()))
        bad["test"]["p_value"] = 1.5
        with pytest.raises(jsonschema.ValidationError):
            validate_report(bad)

    def test_non_finite_become_null(self):
        assert json.loads(write_report_json({"x": float("inf")})) == {"x": None}
