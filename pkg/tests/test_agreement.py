import math
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordsurv import (
    DataError,
    GroupedRecord,
    Observation,
    PairedSample,
    Scale,
    StatisticalError,
    TiePolicy,
    absolute_agreement_curve,
    km_estimate,
    ordinal_to_observations,
    prop_at_least,
    signed_agreement_groups,
    survival_at,
    weighted_rank_test,
)

EXAMPLE = PairedSample.from_pairs([(1, 3), (4, 2), (2, 2), (5, 1)])


def times(group):
    return sorted(o.time for o in group)


class TestAbsoluteCurve:
    def test_worked_example(self):
        c = absolute_agreement_curve(PairedSample.from_pairs([(3, 3), (2, 4), (5, 1)]))
        assert c.jump_times == (0, 2, 4)
        assert [survival_at(c, x) for x in (0, 2, 4)] == pytest.approx([2 / 3, 1 / 3, 0], abs=1e-15)
        assert prop_at_least(c, 2) == pytest.approx(2 / 3)

    def test_perfect_agreement(self):
        c = absolute_agreement_curve(PairedSample.from_pairs([(2, 2), (5, 5), (0, 0)]))
        assert c.jump_times == (0,) and c.survival == (0.0,)
        assert all(prop_at_least(c, x) == 0.0 for x in (0.1, 1, 10))

    def test_single_pair(self):
        c = absolute_agreement_curve(PairedSample.from_pairs([(0, 5)]))
        assert survival_at(c, 4.99) == 1.0 and survival_at(c, 5) == 0.0

    def test_empty(self):
        with pytest.raises(DataError, match="empty sample"):
            absolute_agreement_curve(PairedSample(()))


class TestSignedSplit:
    def test_exclude_ties(self):
        s = signed_agreement_groups(EXAMPLE)
        assert times(s.lower) == [2] and times(s.upper) == [2, 4] and s.ties == 1
        assert {o.group for o in s.lower} == {"A<B"} and {o.group for o in s.upper} == {"A>B"}
        assert all(o.event for o in s.observations)

    def test_zero_in_both(self):
        s = signed_agreement_groups(EXAMPLE, "zero-in-both")
        assert times(s.lower) == [0, 2] and times(s.upper) == [0, 2, 4] and s.ties == 1

    def test_all_ties(self):
        with pytest.raises(StatisticalError, match="degenerate split") as info:
            signed_agreement_groups(PairedSample.from_pairs([(1, 1), (3, 3)]))
        assert info.value.ties == 2
        assert "A<B and A>B" in str(info.value)

    def test_one_sided(self):
        with pytest.raises(StatisticalError, match="group A<B is empty"):
            signed_agreement_groups(PairedSample.from_pairs([(3, 1), (2, 2)]))

    def test_feeds_rank_test(self):
        s = signed_agreement_groups(EXAMPLE)
        r = weighted_rank_test(s.observations, groups=s.groups)
        assert r.groups == ("A<B", "A>B") and 0 <= r.p_value <= 1

    def test_policy_parse(self):
        assert TiePolicy.parse("exclude_ties") is TiePolicy.EXCLUDE_TIES
        with pytest.raises(DataError):
            TiePolicy.parse("drop")


pairs = st.lists(st.tuples(st.integers(0, 18), st.integers(0, 18)), min_size=1, max_size=30)


@settings(max_examples=200, deadline=None)
@given(pairs)
def test_absolute_curve_symmetric(p):
    sample = PairedSample.from_pairs(p)
    assert absolute_agreement_curve(sample) == absolute_agreement_curve(sample.swapped())


@settings(max_examples=200, deadline=None)
@given(pairs, st.sampled_from(list(TiePolicy)))
def test_signed_split_properties(p, policy):
    sample = PairedSample.from_pairs(p)
    try:
        s = signed_agreement_groups(sample, policy)
    except StatisticalError:
        extra = sum(a == b for a, b in p) if policy is TiePolicy.ZERO_IN_BOTH else 0
        lower = sum(a < b for a, b in p) + extra
        upper = sum(a > b for a, b in p) + extra
        assert not lower or not upper
        return
    w = signed_agreement_groups(sample.swapped(), policy)
    assert times(w.lower) == times(s.upper) and times(w.upper) == times(s.lower)
    assert w.ties == s.ties == sum(a == b for a, b in p)

    nonzero = Counter(abs(a - b) for a, b in p if a != b)
    if policy is TiePolicy.EXCLUDE_TIES:
        assert Counter(o.time for o in s.observations) == nonzero
    # Pooled signed times plus one zero per tie reproduce the absolute curve.
    pooled = [o.time for o in s.observations if o.time > 0] + [0.0] * s.ties
    assert Counter(pooled) == Counter(float(abs(a - b)) for a, b in p)
    assert km_estimate(pooled) == absolute_agreement_curve(sample)


class TestOrdinal:
    def test_taste_scale(self):
        recs = [GroupedRecord(str(s), "healthy", s) for s in range(17)]
        obs = ordinal_to_observations(recs, Scale(0, 16))
        assert [o.time for o in obs] == list(range(17)) and all(o.event for o in obs)

    def test_fibrosis_out_of_scale(self):
        with pytest.raises(DataError, match="out of scale: record p7"):
            ordinal_to_observations([GroupedRecord("p7", "g", 7)], Scale(0, 6))

    def test_shift(self):
        (o,) = ordinal_to_observations([GroupedRecord("x", "g", 3)], Scale(3, 5))
        assert o.time == 0

    def test_flags_and_groups(self):
        obs = ordinal_to_observations([GroupedRecord("1", "a", 2, False), GroupedRecord("2", "b", 4)])
        assert obs == [Observation(2, False, "a"), Observation(4, True, "b")]

    def test_negative_codes_without_scale(self):
        obs = ordinal_to_observations([GroupedRecord("1", "a", -2), GroupedRecord("2", "b", 1)])
        assert [o.time for o in obs] == [0, 3]

    def test_empty_group(self):
        with pytest.raises(DataError, match="empty group c"):
            ordinal_to_observations([GroupedRecord("1", "a", 2)], groups=["a", "c"])
        with pytest.raises(DataError, match="empty group"):
            ordinal_to_observations([])

    def test_scale_parse(self):
        assert Scale.parse("0:18") == Scale(0, 18)
        for bad in ("18", "5:1", "a:b"):
            with pytest.raises(DataError):
                Scale.parse(bad)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("hs"), st.integers(0, 16)), min_size=2, max_size=30))
def test_recoding_invariance(rows):
    if len({g for g, _ in rows}) < 2:
        return
    recs = [GroupedRecord(str(i), g, s) for i, (g, s) in enumerate(rows)]
    recoded = [GroupedRecord(r.id, r.group, 100 + math.sqrt(r.score) * 7) for r in recs]
    a = ordinal_to_observations(recs, Scale(0, 16))
    b = ordinal_to_observations(recoded, Scale(100, 100 + 7 * 4))
    for scheme in ("logrank", "gehan", "tarone-ware"):
        ra, rb = weighted_rank_test(a, scheme), weighted_rank_test(b, scheme)
        assert abs(ra.statistic - rb.statistic) <= 1e-12
        assert abs(ra.p_value - rb.p_value) <= 1e-12
