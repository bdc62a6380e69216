"""Per-edge interaction weights and discount coefficients."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SelfEdge
from .interactions import InteractionCounts


@dataclass(frozen=True)
class WeightVector:
    """Weights and reliabilities for the directed edge ``u -> v``.

    ``w_x`` is the share of u's channel-x interactions aimed at v and
    ``alpha_x`` is the share of u's tweets that are channel-x interactions.
    Both default to 0 when their denominator is 0.
    """

    edge: tuple[str, str]
    w_r: float = 0.0
    w_m: float = 0.0
    w_c: float = 0.0
    alpha_r: float = 0.0
    alpha_m: float = 0.0
    alpha_c: float = 0.0

    def channels(self) -> tuple[tuple[str, float, float], ...]:
        return (
            ("retweet", self.w_r, self.alpha_r),
            ("mention", self.w_m, self.alpha_m),
            ("citation", self.w_c, self.alpha_c),
        )


def _ratio(num: int, den: int) -> float:
    return num / den if den > 0 else 0.0


def compute_weights(counts: InteractionCounts, u: str, v: str) -> WeightVector:
    if u == v:
        raise SelfEdge(f"edge {u!r} -> {v!r}")
    totals = counts.user(u)
    toward = counts.pair(u, v)
    return WeightVector(
        edge=(u, v),
        w_r=_ratio(toward.retweets, totals.retweets),
        w_m=_ratio(toward.mentions, totals.mentions),
        w_c=_ratio(toward.citations, totals.citations),
        alpha_r=_ratio(totals.retweets, totals.tweets),
        alpha_m=_ratio(totals.mentions, totals.tweets),
        alpha_c=_ratio(totals.citations, totals.tweets),
    )
