"""Dependence scoring: evidence masses per channel, fusion, pignistic decision."""

from __future__ import annotations

import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from .belief import (
    Frame,
    MassFunction,
    combine_dempster_n,
    discount,
    make_vacuous,
    pignistic,
    validate,
)
from .errors import TotalConflict
from .interactions import InteractionCounts, pairs_with_interaction
from .weights import WeightVector, compute_weights

log = logging.getLogger(__name__)

INDEPENDENCE_FRAME = Frame(("D", "I"))
DEP = INDEPENDENCE_FRAME.subset("D")
IND = INDEPENDENCE_FRAME.subset("I")
EITHER = INDEPENDENCE_FRAME.theta

DEPENDENT = "dependent"
INDEPENDENT = "independent"
UNDECIDED = "undecided"
TIE_RULES = ("undecided", "inclusive")
TIE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class DependenceScore:
    edge: tuple[str, str]
    dep: float
    ind: float
    decision: str
    conflict: float
    fused_mass: MassFunction
    weights: WeightVector
    error: str | None = None


def bernoulli_mass(w: float) -> MassFunction:
    """Categorical bba: ``w`` on D, ``1 - w`` on I."""
    return validate({DEP: w, IND: 1.0 - w}, INDEPENDENCE_FRAME)


def channel_mass(w: float, alpha: float) -> MassFunction:
    """Evidence from one channel: the weight as a D/I split, discounted by alpha."""
    return discount(bernoulli_mass(w), alpha)


def mass_from_retweets(w: WeightVector) -> MassFunction:
    return channel_mass(w.w_r, w.alpha_r)


def mass_from_mentions(w: WeightVector) -> MassFunction:
    return channel_mass(w.w_m, w.alpha_m)


def mass_from_citations(w: WeightVector) -> MassFunction:
    return channel_mass(w.w_c, w.alpha_c)


def evidence_masses(w: WeightVector) -> tuple[MassFunction, MassFunction, MassFunction]:
    return mass_from_retweets(w), mass_from_mentions(w), mass_from_citations(w)


def decide(dep: float, ind: float, tie_rule: str = "undecided") -> str:
    """Max-pignistic decision.

    ``tie_rule="inclusive"`` resolves ``dep >= ind`` as dependent; the default
    reports near-ties as undecided instead.
    """
    if tie_rule == "inclusive":
        return DEPENDENT if dep >= ind else INDEPENDENT
    if tie_rule != "undecided":
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    if abs(dep - ind) <= TIE_TOLERANCE:
        return UNDECIDED
    return DEPENDENT if dep > ind else INDEPENDENT


@lru_cache(maxsize=1 << 16)
def _fuse(
    w_r: float, a_r: float, w_m: float, a_m: float, w_c: float, a_c: float
) -> tuple[MassFunction, float, float, float]:
    # Edges of one actor often share all six inputs; the result is immutable.
    fused, conflict = combine_dempster_n(
        (channel_mass(w_r, a_r), channel_mass(w_m, a_m), channel_mass(w_c, a_c))
    )
    bet = pignistic(fused)
    return fused, conflict, bet["D"], bet["I"]


def score_weights(w: WeightVector, tie_rule: str = "undecided") -> DependenceScore:
    """Fuse the three channel masses of ``w``.  May raise TotalConflict."""
    fused, conflict, dep, ind = _fuse(w.w_r, w.alpha_r, w.w_m, w.alpha_m, w.w_c, w.alpha_c)
    return DependenceScore(w.edge, dep, ind, decide(dep, ind, tie_rule), conflict, fused, w)


def score_edge(
    counts: InteractionCounts, u: str, v: str, tie_rule: str = "undecided"
) -> DependenceScore:
    return score_weights(compute_weights(counts, u, v), tie_rule)


def _score_or_record(counts: InteractionCounts, u: str, v: str, tie_rule: str) -> DependenceScore:
    w = compute_weights(counts, u, v)
    try:
        return score_weights(w, tie_rule)
    except TotalConflict:
        log.warning("edge %s -> %s: totally conflicting evidence", u, v)
        return DependenceScore(
            (u, v), 0.5, 0.5, UNDECIDED, 1.0, make_vacuous(INDEPENDENCE_FRAME), w, "total_conflict"
        )


_worker_counts: InteractionCounts | None = None


def _init_worker(counts: InteractionCounts) -> None:
    global _worker_counts
    _worker_counts = counts


def _score_chunk(args: tuple[list[tuple[str, str]], str]) -> list[DependenceScore]:
    pairs, tie_rule = args
    return [_score_or_record(_worker_counts, u, v, tie_rule) for u, v in pairs]


def score_all(
    counts: InteractionCounts, tie_rule: str = "undecided", jobs: int = 1
) -> list[DependenceScore]:
    """Score every candidate pair, in lexicographic pair order.

    Totally conflicting edges are kept with ``error="total_conflict"``
    instead of aborting.  ``jobs > 1`` scores chunks in worker processes;
    the result is identical to the serial one.
    """
    if tie_rule not in TIE_RULES:
        raise ValueError(f"unknown tie rule {tie_rule!r}")
    pairs = pairs_with_interaction(counts)
    if jobs <= 1 or len(pairs) < 2 * jobs:
        return [_score_or_record(counts, u, v, tie_rule) for u, v in pairs]

    n_chunks = jobs * 4
    size = -(-len(pairs) // n_chunks)
    chunks = [(pairs[i : i + size], tie_rule) for i in range(0, len(pairs), size)]
    methods = multiprocessing.get_all_start_methods()
    ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
    with ProcessPoolExecutor(jobs, mp_context=ctx, initializer=_init_worker, initargs=(counts,)) as pool:
        return [score for part in pool.map(_score_chunk, chunks) for score in part]
