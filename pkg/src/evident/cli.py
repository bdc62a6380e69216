"""``evident`` command line: ingest, compute, query, gen.

Exit status is 0 on success, 1 for bad input (unreadable or corrupt files,
bad arguments, self edges, bad generator specs) and 2 for anything else.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export
from .dependence import TIE_RULES, evidence_masses, score_all, score_weights
from .errors import EvidentError, TotalConflict, WriteFailure
from .interactions import CorpusSnapshot, ingest_files, load_snapshot, save_snapshot
from .synthetic import SyntheticSpec, generate_events, write_events
from .weights import compute_weights

log = logging.getLogger("evident")


class UsageError(EvidentError):
    pass


def _write_text(path: str | Path, text: str) -> None:
    if str(path) == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc


def format_summary(snapshot: CorpusSnapshot) -> str:
    """Corpus totals laid out as Users / Tweets / Retweets / Mentions / Citations."""
    counts = snapshot.counts
    t = counts.totals()
    cols = ("Users", "Tweets", "Retweets", "Mentions", "Citations")
    vals = (len(counts.users), t.tweets, t.retweets, t.mentions, t.citations)
    widths = [max(len(c), len(str(v))) for c, v in zip(cols, vals)]
    row = lambda xs: " | ".join(str(x).rjust(w) for x, w in zip(xs, widths))  # noqa: E731
    return "\n".join(
        [
            row(cols),
            row(vals),
            f"events={snapshot.event_count} follows={len(counts.follows)} "
            f"pairs={len(counts.pairs)} ingest_errors={snapshot.ingest_errors}",
        ]
    ) + "\n"


def cmd_ingest(paths: list[str], snapshot_out: str) -> CorpusSnapshot:
    snapshot = ingest_files(paths)
    save_snapshot(snapshot, snapshot_out)
    return snapshot


def cmd_compute(
    snapshot: str, output: str, fmt: str = "csv", tie_rule: str = "undecided",
    jobs: int = 1, precision: int = 6,
) -> int:
    counts = load_snapshot(snapshot).counts
    scores = score_all(counts, tie_rule=tie_rule, jobs=jobs)
    _write_text(output, export.render(fmt, scores, counts, tie_rule, precision))
    return len(scores)


def cmd_query(snapshot: str, u: str, v: str, tie_rule: str = "undecided") -> str:
    counts = load_snapshot(snapshot).counts
    w = compute_weights(counts, u, v)
    tu, pc = counts.user(u), counts.pair(u, v)
    m_r, m_m, m_c = evidence_masses(w)
    lines = [
        ("edge", f"{u} -> {v}"),
        ("followed", "yes" if counts.follows_edge(u, v) else "no"),
        ("counts", f"T_u={tu.tweets} Rt_u={tu.retweets} Rt_u(v)={pc.retweets} "
                   f"Mt_u={tu.mentions} Mt_u(v)={pc.mentions} Ct_u={tu.citations} Ct_u(v)={pc.citations}"),
        ("weights", f"w_r={w.w_r:.6f} w_m={w.w_m:.6f} w_c={w.w_c:.6f}"),
        ("discounts", f"alpha_r={w.alpha_r:.6f} alpha_m={w.alpha_m:.6f} alpha_c={w.alpha_c:.6f}"),
        ("m_retweet", m_r.render()),
        ("m_mention", m_m.render()),
        ("m_citation", m_c.render()),
    ]
    try:
        s = score_weights(w, tie_rule)
    except TotalConflict:
        lines += [("fused", "undefined (total conflict)"), ("conflict", f"{1.0:.6f}"),
                  ("decision", "undecided")]
    else:
        lines += [
            ("fused", s.fused_mass.render()),
            ("conflict", f"{s.conflict:.6f}"),
            ("Dep(u,v)", f"{s.dep:.6f}"),
            ("Ind(u,v)", f"{s.ind:.6f}"),
            ("decision", s.decision),
        ]
    return "".join(f"{k:<11} {val}\n" for k, val in lines)


def cmd_gen(spec: SyntheticSpec, out: str, seed: int) -> int:
    events = generate_events(spec, seed)
    try:
        write_events(events, out)
    except OSError as exc:
        raise WriteFailure(f"cannot write {out}: {exc}") from exc
    return len(events)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evident", description="Evidential dependence estimation for interaction graphs.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="aggregate event files into a snapshot")
    p.add_argument("-i", "--input", nargs="+", required=True, dest="inputs")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("compute", help="score every candidate edge of a snapshot")
    p.add_argument("-s", "--snapshot", required=True)
    p.add_argument("-o", "--output", required=True, help="output file, '-' for stdout")
    p.add_argument("--format", choices=export.FORMATS, default="csv", dest="fmt")
    p.add_argument("--tie-rule", choices=TIE_RULES, default="undecided")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--precision", type=int, default=6, help="decimals in CSV output")

    p = sub.add_parser("query", help="print the full scoring trace of one edge")
    p.add_argument("-s", "--snapshot", required=True)
    p.add_argument("-u", required=True)
    p.add_argument("-v", required=True)
    p.add_argument("--tie-rule", choices=TIE_RULES, default="undecided")

    p = sub.add_parser("gen", help="generate a synthetic event file")
    p.add_argument("--spec", required=True, help="JSON generator spec")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--seed", type=int, required=True)
    return parser


def _run(args: argparse.Namespace) -> None:
    if args.command == "ingest":
        snapshot = cmd_ingest(args.inputs, args.output)
        sys.stdout.write(format_summary(snapshot))
    elif args.command == "compute":
        if args.jobs < 1 or not 0 <= args.precision <= 17:
            raise UsageError("--jobs must be >= 1 and --precision in 0..17")
        n = cmd_compute(args.snapshot, args.output, args.fmt, args.tie_rule, args.jobs, args.precision)
        log.info("wrote %d edges to %s", n, args.output)
        if args.output != "-":
            sys.stderr.write(f"{n} edges\n")
    elif args.command == "query":
        sys.stdout.write(cmd_query(args.snapshot, args.u, args.v, args.tie_rule))
    elif args.command == "gen":
        n = cmd_gen(SyntheticSpec.load(args.spec), args.output, args.seed)
        sys.stderr.write(f"{n} events\n")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"evident: {exc}\n")
        return 1
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        _run(args)
    except EvidentError as exc:
        sys.stderr.write(f"evident: {exc}\n")
        return 1
    except Exception:
        log.exception("internal error")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
