"""Serialisation of scored dependence graphs."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Sequence

from .dependence import DEPENDENT, INDEPENDENT, DependenceScore
from .interactions import InteractionCounts

CSV_COLUMNS = (
    "u", "v", "w_r", "w_m", "w_c", "alpha_r", "alpha_m", "alpha_c",
    "dep", "ind", "conflict", "decision", "followed",
)
FORMATS = ("csv", "dot", "json")
DOT_STYLE = {DEPENDENT: "solid", INDEPENDENT: "dashed"}


def to_csv(scores: Sequence[DependenceScore], counts: InteractionCounts, precision: int = 6) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    fmt = f"{{:.{precision}f}}".format
    for s in scores:
        w = s.weights
        u, v = s.edge
        writer.writerow(
            [u, v]
            + [fmt(x) for x in (w.w_r, w.w_m, w.w_c, w.alpha_r, w.alpha_m, w.alpha_c)]
            + [fmt(s.dep), fmt(s.ind), fmt(s.conflict), s.decision, int(counts.follows_edge(u, v))]
        )
    return buf.getvalue()


def _mass_dict(score: DependenceScore) -> dict[str, float]:
    frame = score.fused_mass.frame
    return {frame.format_subset(bits): value for bits, value in score.fused_mass.focal}


def to_json(scores: Sequence[DependenceScore], counts: InteractionCounts, tie_rule: str = "undecided") -> str:
    edges = []
    for s in scores:
        w = s.weights
        edges.append(
            {
                "u": s.edge[0],
                "v": s.edge[1],
                "w_r": w.w_r,
                "w_m": w.w_m,
                "w_c": w.w_c,
                "alpha_r": w.alpha_r,
                "alpha_m": w.alpha_m,
                "alpha_c": w.alpha_c,
                "dep": s.dep,
                "ind": s.ind,
                "conflict": s.conflict,
                "decision": s.decision,
                "followed": counts.follows_edge(*s.edge),
                "fused_mass": _mass_dict(s),
                "error": s.error,
            }
        )
    doc = {"format": "evident-dependence", "version": 1, "tie_rule": tie_rule, "edges": edges}
    return json.dumps(doc, indent=1) + "\n"


def _dot_id(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(scores: Sequence[DependenceScore], counts: InteractionCounts) -> str:
    """Directed graph; solid/dashed/dotted edges for dependent/independent/undecided."""
    lines = ["digraph dependence {", "  node [shape=ellipse];"]
    for s in scores:
        u, v = s.edge
        style = DOT_STYLE.get(s.decision, "dotted")
        attrs = f'label="{s.dep:.2f}", style={style}, decision={s.decision}'
        if counts.follows_edge(u, v):
            attrs += ", followed=1"
        lines.append(f"  {_dot_id(u)} -> {_dot_id(v)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render(
    fmt: str,
    scores: Sequence[DependenceScore],
    counts: InteractionCounts,
    tie_rule: str = "undecided",
    precision: int = 6,
) -> str:
    if fmt == "csv":
        return to_csv(scores, counts, precision)
    if fmt == "json":
        return to_json(scores, counts, tie_rule)
    if fmt == "dot":
        return to_dot(scores, counts)
    raise ValueError(f"unknown format {fmt!r}")
