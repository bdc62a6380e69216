"""Belief-function kernel: frames, mass functions, combination, discounting.

Subsets of a frame are plain ``int`` bitmasks: bit ``i`` set means the
``i``-th label is a member.  ``0`` is the empty set and ``frame.theta``
(all bits set) is the whole frame.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import reduce

from .errors import (
    AlphaOutOfRange,
    EmptyList,
    FrameMismatch,
    MassOnEmptySet,
    NegativeMass,
    SubsetOutOfRange,
    SumNotOne,
    TotalConflict,
)

MAX_FRAME_SIZE = 16
SUM_TOLERANCE = 1e-9
CONFLICT_TOLERANCE = 1e-12
PRUNE_BELOW = 1e-12


@dataclass(frozen=True)
class Frame:
    """A finite set of exhaustive, mutually exclusive hypotheses."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_FRAME_SIZE:
            raise ValueError(
                f"frame must have 1..{MAX_FRAME_SIZE} hypotheses, got {len(labels)}"
            )
        if any(not isinstance(lab, str) or not lab for lab in labels):
            raise ValueError("frame labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate frame labels in {labels!r}")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def theta(self) -> int:
        return (1 << len(self.labels)) - 1

    def subset(self, *labels: str) -> int:
        """Bitmask of the subset containing ``labels``."""
        bits = 0
        for label in labels:
            try:
                bits |= 1 << self.labels.index(label)
            except ValueError:
                raise KeyError(f"{label!r} is not in frame {self.labels!r}") from None
        return bits

    def members(self, subset: int) -> tuple[str, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if subset >> i & 1)

    def format_subset(self, subset: int) -> str:
        return "{" + ",".join(self.members(subset)) + "}"


@dataclass(frozen=True)
class MassFunction:
    """A basic belief assignment, stored sparsely as focal elements.

    Build instances through :func:`validate`, :func:`make_vacuous` or the
    operations in this module; the constructor does not check the
    invariants itself.  ``focal`` is sorted by subset id.
    """

    frame: Frame
    focal: tuple[tuple[int, float], ...]

    @property
    def masses(self) -> dict[int, float]:
        return dict(self.focal)

    def mass(self, subset: int) -> float:
        for bits, value in self.focal:
            if bits == subset:
                return value
        return 0.0

    def focal_elements(self) -> tuple[int, ...]:
        return tuple(bits for bits, _ in self.focal)

    @property
    def is_vacuous(self) -> bool:
        return self.focal == ((self.frame.theta, 1.0),)

    def render(self) -> str:
        """Debug rendering, e.g. ``{D}:0.250000 {D,I}:0.750000``."""
        return " ".join(
            f"{self.frame.format_subset(bits)}:{value:.6f}" for bits, value in self.focal
        )

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class PignisticDistribution:
    frame: Frame
    probabilities: tuple[float, ...]

    def __getitem__(self, label: str) -> float:
        return self.probabilities[self.frame.labels.index(label)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.frame.labels, self.probabilities))


def _build(frame: Frame, masses: Mapping[int, float]) -> MassFunction:
    return MassFunction(
        frame, tuple(sorted((k, v) for k, v in masses.items() if v != 0.0))
    )


def make_vacuous(frame: Frame) -> MassFunction:
    """Total ignorance: all mass on the whole frame."""
    return MassFunction(frame, ((frame.theta, 1.0),))


def validate(candidate: Mapping[int, float], frame: Frame) -> MassFunction:
    """Check ``candidate`` is a proper mass function on ``frame`` and wrap it.

    Zero entries are dropped.  Raises SubsetOutOfRange, MassOnEmptySet,
    NegativeMass or SumNotOne.
    """
    total = 0.0
    for subset, value in candidate.items():
        if not isinstance(subset, int) or not 0 <= subset <= frame.theta:
            raise SubsetOutOfRange(f"subset {subset!r} outside frame of size {frame.size}")
        value = float(value)
        if math.isnan(value) or value < 0.0:
            raise NegativeMass(f"mass {value!r} on {frame.format_subset(subset)}")
        if subset == 0 and value > 0.0:
            raise MassOnEmptySet(f"mass {value!r} on the empty set")
        total += value
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise SumNotOne(total)
    return _build(frame, {k: float(v) for k, v in candidate.items()})


def combine_dempster(m1: MassFunction, m2: MassFunction) -> tuple[MassFunction, float]:
    """Dempster's rule.  Returns the combined mass and the conflict K."""
    if m1.frame != m2.frame:
        raise FrameMismatch(f"{m1.frame.labels!r} vs {m2.frame.labels!r}")
    raw: dict[int, float] = {}
    conflict = 0.0
    for b, x in m1.focal:
        for c, y in m2.focal:
            a = b & c
            if a:
                raw[a] = raw.get(a, 0.0) + x * y
            else:
                conflict += x * y
    norm = 1.0 - conflict
    if norm <= CONFLICT_TOLERANCE:
        raise TotalConflict(f"conflict {conflict!r} leaves nothing to normalise")
    combined = {a: v / norm for a, v in raw.items()}
    kept = {a: v for a, v in combined.items() if v >= PRUNE_BELOW}
    if len(kept) < len(combined):
        s = sum(kept.values())
        kept = {a: v / s for a, v in kept.items()}
    return _build(m1.frame, kept), conflict


def combine_dempster_n(ms: Iterable[MassFunction]) -> tuple[MassFunction, float]:
    """Left fold of :func:`combine_dempster`.

    The returned conflict is ``1 - prod(1 - K_i)`` over the fold steps, which
    equals the conflict of the one-shot n-way conjunctive product.
    """
    ms = list(ms)
    if not ms:
        raise EmptyList("nothing to combine")

    def step(acc: tuple[MassFunction, float], m: MassFunction) -> tuple[MassFunction, float]:
        fused, kept = acc
        fused, k = combine_dempster(fused, m)
        return fused, kept * (1.0 - k)

    fused, kept = reduce(step, ms[1:], (ms[0], 1.0))
    return fused, 1.0 - kept


def discount(m: MassFunction, alpha: float) -> MassFunction:
    """Shafer discounting by source reliability ``alpha``."""
    if not 0.0 <= alpha <= 1.0:
        raise AlphaOutOfRange(f"alpha={alpha!r}")
    theta = m.frame.theta
    out = {bits: alpha * value for bits, value in m.focal if bits != theta}
    out[theta] = 1.0 - alpha * (1.0 - m.mass(theta))
    return _build(m.frame, out)


def pignistic(m: MassFunction) -> PignisticDistribution:
    n = m.frame.size
    bet = [0.0] * n
    for bits, value in m.focal:
        share = value / bits.bit_count()
        for i in range(n):
            if bits >> i & 1:
                bet[i] += share
    return PignisticDistribution(m.frame, tuple(bet))
