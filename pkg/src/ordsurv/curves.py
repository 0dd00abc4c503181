"""Kaplan-Meier step curves and crossing detection."""

from __future__ import annotations

import bisect
import math
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

from .errors import DataError

# Differences of survival values below this are treated as exact ties.
ZERO_TOL = 1e-12


@dataclass(frozen=True)
class Observation:
    """One subject: observed time, event flag (False = right-censored), group."""

    time: float
    event: bool = True
    group: Hashable = 0

    def __post_init__(self):
        t = float(self.time)
        if not math.isfinite(t) or t < 0:
            raise DataError(f"invalid time {self.time!r}")
        object.__setattr__(self, "time", t)
        object.__setattr__(self, "event", bool(self.event))


@dataclass(frozen=True)
class StepCurve:
    """Right-continuous product-limit survival curve.

    ``survival[k]`` is S immediately after ``jump_times[k]``; S is 1 before the
    first jump. ``at_risk`` and ``events`` hold the risk-set bookkeeping at each
    jump.
    """

    jump_times: tuple[float, ...]
    survival: tuple[float, ...]
    at_risk: tuple[int, ...]
    events: tuple[int, ...]
    n_total: int

    def __len__(self):
        return len(self.jump_times)

    def to_dict(self) -> dict:
        return {
            "jump_times": list(self.jump_times),
            "survival": list(self.survival),
            "at_risk": list(self.at_risk),
            "events": list(self.events),
            "n_total": self.n_total,
        }


def _coerce(observations: Iterable[Observation | float]) -> list[Observation]:
    out = []
    for obs in observations:
        out.append(obs if isinstance(obs, Observation) else Observation(obs))
    return out


def km_estimate(observations: Iterable[Observation | float]) -> StepCurve:
    """Product-limit estimate for a single sample.

    Bare numbers are accepted as uncensored observations. Events at a tied time
    are processed together, and censorings at that time stay in its risk set.
    """
    obs = _coerce(observations)
    if not obs:
        raise DataError("empty sample")

    counts: dict[float, list[int]] = {}
    for o in obs:
        c = counts.setdefault(o.time, [0, 0])
        c[0 if o.event else 1] += 1

    n = len(obs)
    at_risk = n
    s = 1.0
    jumps, surv, risk, deaths = [], [], [], []
    for t in sorted(counts):
        d, c = counts[t]
        if d:
            s *= 1.0 - d / at_risk
            jumps.append(t)
            surv.append(s)
            risk.append(at_risk)
            deaths.append(d)
        at_risk -= d + c
    return StepCurve(tuple(jumps), tuple(surv), tuple(risk), tuple(deaths), n)


def survival_at(curve: StepCurve, x: float) -> float:
    """S(x): survival value of the last jump at or before ``x``."""
    k = bisect.bisect_right(curve.jump_times, x)
    return 1.0 if k == 0 else curve.survival[k - 1]


def prop_at_least(curve: StepCurve, x: float) -> float:
    """Left limit S(x-), i.e. the proportion with a value of at least ``x``."""
    k = bisect.bisect_left(curve.jump_times, x)
    return 1.0 if k == 0 else curve.survival[k - 1]


@dataclass(frozen=True)
class Crossing:
    """A strict sign change of S1 - S2 located somewhere in ``[start, end]``.

    ``direction`` is ``"+-"`` when curve 1 starts above curve 2 and ends below,
    ``"-+"`` otherwise.
    """

    start: float
    end: float
    direction: str


@dataclass(frozen=True)
class CrossingReport:
    crossings: tuple[Crossing, ...]

    @property
    def curves_cross(self) -> bool:
        return bool(self.crossings)

    def to_dict(self) -> dict:
        return {
            "curves_cross": self.curves_cross,
            "crossings": [
                {"start": c.start, "end": c.end, "direction": c.direction}
                for c in self.crossings
            ],
        }


def _sign(v: float) -> int:
    if v > ZERO_TOL:
        return 1
    if v < -ZERO_TOL:
        return -1
    return 0


def detect_crossings(c1: StepCurve, c2: StepCurve) -> CrossingReport:
    """Locate strict sign changes of S1 - S2 over the merged jump grid.

    Segments on which the curves coincide are neutral; a crossing spans from
    the end of the last strictly signed segment to the start of the next one.
    """
    if len(c1) == 0 or len(c2) == 0:
        raise DataError("empty curve")
    grid = sorted(set(c1.jump_times) | set(c2.jump_times))
    crossings = []
    prev_sign = 0
    prev_end = None
    # Segment k is [grid[k], grid[k+1]); the segment before grid[0] has delta 0.
    for k, t in enumerate(grid):
        sign = _sign(survival_at(c1, t) - survival_at(c2, t))
        if sign == 0:
            continue
        if prev_sign and sign != prev_sign:
            crossings.append(
                Crossing(prev_end, t, "+-" if prev_sign > 0 else "-+")
            )
        prev_sign = sign
        prev_end = grid[k + 1] if k + 1 < len(grid) else math.inf
    return CrossingReport(tuple(crossings))


def split_by_group(observations: Sequence[Observation]) -> dict[Hashable, list[Observation]]:
    """Group observations by label, in order of first appearance."""
    groups: dict[Hashable, list[Observation]] = {}
    for o in observations:
        groups.setdefault(o.group, []).append(o)
    return groups
