"""Belief-function estimation of directed dependence between users."""

from .belief import (
    Frame,
    MassFunction,
    PignisticDistribution,
    combine_dempster,
    combine_dempster_n,
    discount,
    make_vacuous,
    pignistic,
    validate,
)
from .dependence import (
    INDEPENDENCE_FRAME,
    DependenceScore,
    mass_from_citations,
    mass_from_mentions,
    mass_from_retweets,
    score_all,
    score_edge,
)
from .interactions import (
    CorpusSnapshot,
    EventRecord,
    InteractionCounts,
    ingest_events,
    load_snapshot,
    pairs_with_interaction,
    save_snapshot,
)
from .weights import WeightVector, compute_weights

__version__ = "0.1.0"
