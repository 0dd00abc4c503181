"""Regenerate the synthetic case-study fixtures shipped in src/ordsurv/fixtures.

None of these files are real patient data. They only mimic the shapes of the
two motivating studies: 42 hepatitis C patients scored on Ishak inflammation
grades (0-18) and fibrosis stages (0-6) in two arms, and 45 otitis media
patients with taste scores (0-16) on the healthy and affected side.
"""

import csv
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parents[1] / "src" / "ordsurv" / "fixtures"


def _write(name, header, rows):
    with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def hepatitis(rng):
    # Arms of 21; the treated arm is more spread out so its curve crosses placebo.
    rows_inf, rows_fib = [], []
    for arm, (centre, spread) in (("silymarin", (7.0, 4.0)), ("placebo", (7.5, 2.0))):
        for i in range(21):
            pid = f"{arm[:3]}{i + 1:02d}"
            grade = int(np.clip(np.rint(rng.normal(centre, spread)), 0, 18))
            stage = int(np.clip(np.rint(grade / 3 + rng.normal(0, 0.8)), 0, 6))
            rows_inf.append((pid, arm, grade))
            rows_fib.append((pid, arm, stage))
    _write("synthetic_hepatitis_inflammation.csv", ("id", "group", "score"), rows_inf)
    _write("synthetic_hepatitis_fibrosis.csv", ("id", "group", "score"), rows_fib)


def taste(rng):
    pairs = []
    for i in range(45):
        healthy = int(np.clip(np.rint(rng.normal(12.5, 2.0)), 0, 16))
        # Measurement noise lets the affected side occasionally score higher.
        loss = 0 if rng.random() < 0.3 else int(rng.integers(-2, 7))
        if i < 8:  # unilateral ageusia on the affected side
            loss = healthy
        pairs.append((f"p{i + 1:02d}", healthy, int(np.clip(healthy - loss, 0, 16))))
    _write("synthetic_taste_pairs.csv", ("id", "a", "b"), pairs)
    sides = []
    for pid, h, a in pairs:
        sides.append((f"{pid}-h", "healthy", h))
        sides.append((f"{pid}-a", "affected", a))
    _write("synthetic_taste_sides.csv", ("id", "group", "score"), sides)


def worked_examples():
    _write("two_group_example.csv", ("id", "group", "score"),
           [(1, "A", 1), (2, "A", 3), (3, "B", 2), (4, "B", 4)])
    _write("pairs_example.csv", ("id", "a", "b"), [(1, 3, 3), (2, 2, 4), (3, 5, 1)])
    _write("signed_example.csv", ("id", "a", "b"), [(1, 1, 3), (2, 4, 2), (3, 2, 2), (4, 5, 1)])


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20081011)
    hepatitis(rng)
    taste(rng)
    worked_examples()
