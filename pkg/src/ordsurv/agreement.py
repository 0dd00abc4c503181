"""Turning paired or grouped ordinal scores into event data.

The absolute construction places a failure at every |a - b| and reads the
resulting curve as the share of pairs disagreeing by at least a tolerance. The
signed construction splits pairs by the direction of disagreement so the two
directions can be compared with a rank test.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass

from .curves import Observation, StepCurve, km_estimate
from .errors import DataError, StatisticalError

LOWER = "A<B"
UPPER = "A>B"


@dataclass(frozen=True)
class Scale:
    """Declared bounds of an ordinal scale, e.g. ``Scale(0, 18)`` for Ishak grades."""

    min: float
    max: float

    def __post_init__(self):
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or self.min > self.max:
            raise DataError(f"invalid scale {self.min}:{self.max}")

    @classmethod
    def parse(cls, text: str) -> Scale:
        try:
            lo, hi = text.split(":")
            return cls(float(lo), float(hi))
        except ValueError:
            raise DataError(f"invalid scale {text!r}, expected MIN:MAX") from None

    def __contains__(self, value) -> bool:
        return self.min <= value <= self.max


@dataclass(frozen=True)
class PairRecord:
    id: str
    a: float
    b: float


@dataclass(frozen=True)
class PairedSample:
    records: tuple[PairRecord, ...]
    scale: Scale | None = None

    def __post_init__(self):
        records = tuple(self.records)
        object.__setattr__(self, "records", records)
        seen = set()
        for r in records:
            if r.id in seen:
                raise DataError(f"duplicate id {r.id}")
            seen.add(r.id)
            for v in (r.a, r.b):
                if not math.isfinite(v):
                    raise DataError(f"invalid score {v} for record {r.id}")
                if self.scale is not None and v not in self.scale:
                    raise DataError(f"out of scale: record {r.id} has score {v:g}")

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]], scale: Scale | None = None):
        return cls(
            tuple(PairRecord(str(i + 1), float(a), float(b)) for i, (a, b) in enumerate(pairs)),
            scale,
        )

    def __len__(self):
        return len(self.records)

    def differences(self) -> list[float]:
        return [abs(r.a - r.b) for r in self.records]

    def swapped(self) -> PairedSample:
        return PairedSample(tuple(PairRecord(r.id, r.b, r.a) for r in self.records), self.scale)


class TiePolicy(enum.Enum):
    EXCLUDE_TIES = "exclude"
    ZERO_IN_BOTH = "zero-in-both"

    @classmethod
    def parse(cls, name: str | TiePolicy) -> TiePolicy:
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("_", "-")
        for p in cls:
            if key in (p.value, p.name.lower().replace("_", "-")):
                return p
        raise DataError(f"unknown tie policy {name!r}")


def absolute_agreement_curve(sample: PairedSample) -> StepCurve:
    """Kaplan-Meier curve of the fully observed absolute differences."""
    if not len(sample):
        raise DataError("empty sample")
    return km_estimate(Observation(d) for d in sample.differences())


@dataclass(frozen=True)
class SignedSplit:
    lower: tuple[Observation, ...]
    upper: tuple[Observation, ...]
    ties: int
    policy: TiePolicy

    @property
    def observations(self) -> list[Observation]:
        return [*self.lower, *self.upper]

    @property
    def groups(self) -> tuple[str, str]:
        return (LOWER, UPPER)


def signed_agreement_groups(
    sample: PairedSample, policy: TiePolicy | str = TiePolicy.EXCLUDE_TIES
) -> SignedSplit:
    """Split pairs into ``A<B`` (time b - a) and ``A>B`` (time a - b) groups.

    Ties are dropped under ``EXCLUDE_TIES`` and become a zero-time event in both
    groups under ``ZERO_IN_BOTH``.
    """
    policy = TiePolicy.parse(policy)
    if not len(sample):
        raise DataError("empty sample")
    lower, upper = [], []
    ties = 0
    for r in sample.records:
        if r.a < r.b:
            lower.append(Observation(r.b - r.a, True, LOWER))
        elif r.a > r.b:
            upper.append(Observation(r.a - r.b, True, UPPER))
        else:
            ties += 1
            if policy is TiePolicy.ZERO_IN_BOTH:
                lower.append(Observation(0.0, True, LOWER))
                upper.append(Observation(0.0, True, UPPER))
    empty = [name for name, g in ((LOWER, lower), (UPPER, upper)) if not g]
    if empty:
        err = StatisticalError(f"degenerate split: group {' and '.join(empty)} is empty")
        err.ties = ties
        raise err
    return SignedSplit(tuple(lower), tuple(upper), ties, policy)


@dataclass(frozen=True)
class GroupedRecord:
    id: str
    group: Hashable
    score: float
    event: bool = True


def ordinal_to_observations(
    records: Sequence[GroupedRecord],
    scale: Scale | None = None,
    groups: Sequence[Hashable] | None = None,
) -> list[Observation]:
    """Observations with time = score - scale minimum.

    Without a declared scale, scores are used as they are unless some are
    negative, in which case the smallest score becomes the origin.
    If ``groups`` is given, every declared group must receive a record.
    """
    if not records:
        raise DataError("empty group: no records")
    if scale is not None:
        for r in records:
            if r.score not in scale:
                raise DataError(f"out of scale: record {r.id} has score {r.score:g}")
        origin = scale.min
    else:
        origin = min(0.0, min(r.score for r in records))
    if groups is not None:
        present = {r.group for r in records}
        for g in groups:
            if g not in present:
                raise DataError(f"empty group {g}")
    return [Observation(r.score - origin, r.event, r.group) for r in records]
