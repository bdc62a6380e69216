"""Interaction event ingestion, aggregate counts and snapshot persistence."""

from __future__ import annotations

import hashlib
import json
import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .errors import CorruptSnapshot, UnreadableInput, VersionMismatch, WriteFailure

log = logging.getLogger(__name__)

KINDS = ("tweet", "retweet", "mention", "citation", "follow")
SNAPSHOT_MAGIC = "EVIDENT-SNAPSHOT"
SNAPSHOT_VERSION = 1


class MalformedLine(ValueError):
    pass


@dataclass(frozen=True)
class EventRecord:
    kind: str
    actor: str
    target: str | None = None
    timestamp: int | None = None
    primary: bool = True

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        for user in (self.actor, self.target):
            if user is not None and not _valid_user(user):
                raise ValueError(f"invalid user id {user!r}")
        if (self.target is None) != (self.kind == "tweet"):
            raise ValueError(f"{self.kind} event must {'not ' if self.kind == 'tweet' else ''}have a target")
        if self.target == self.actor:
            raise ValueError(f"{self.kind} event from {self.actor!r} to itself")

    def to_line(self) -> str:
        return "\t".join(
            (
                self.kind,
                self.actor,
                self.target or "-",
                "-" if self.timestamp is None else str(self.timestamp),
                "1" if self.primary else "0",
            )
        )


def _valid_user(user: str) -> bool:
    return bool(user) and user != "-" and not any(ch.isspace() for ch in user)


def parse_event_line(line: str) -> EventRecord:
    """Parse one ``kind<TAB>actor<TAB>target<TAB>timestamp<TAB>primary`` line.

    A missing trailing ``primary`` column is read as ``1``.
    """
    parts = line.rstrip("\r\n").split("\t")
    if len(parts) == 4:
        parts.append("1")
    if len(parts) != 5:
        raise MalformedLine(f"expected 5 tab-separated fields, got {len(parts)}")
    kind, actor, target, stamp, primary = parts
    if primary not in ("0", "1"):
        raise MalformedLine(f"bad primary flag {primary!r}")
    try:
        timestamp = None if stamp == "-" else int(stamp)
    except ValueError:
        raise MalformedLine(f"bad timestamp {stamp!r}") from None
    try:
        return EventRecord(kind, actor, None if target == "-" else target, timestamp, primary == "1")
    except ValueError as exc:
        raise MalformedLine(str(exc)) from None


class UserTotals(NamedTuple):
    tweets: int = 0
    retweets: int = 0
    mentions: int = 0
    citations: int = 0


class PairCounts(NamedTuple):
    retweets: int = 0
    mentions: int = 0
    citations: int = 0

    @property
    def total(self) -> int:
        return self.retweets + self.mentions + self.citations


_ZERO_USER = UserTotals()
_ZERO_PAIR = PairCounts()


@dataclass(frozen=True)
class InteractionCounts:
    """Per-user totals, per-ordered-pair counts and the follow relation.

    ``users`` holds every user seen anywhere, including ones with all-zero
    totals.  ``pairs`` holds only non-zero ordered pairs ``(actor, target)``.
    ``follows`` holds ``(u, v)`` meaning u follows v.
    """

    users: dict[str, UserTotals] = field(default_factory=dict)
    pairs: dict[tuple[str, str], PairCounts] = field(default_factory=dict)
    follows: frozenset[tuple[str, str]] = frozenset()

    def user(self, u: str) -> UserTotals:
        return self.users.get(u, _ZERO_USER)

    def pair(self, u: str, v: str) -> PairCounts:
        return self.pairs.get((u, v), _ZERO_PAIR)

    def follows_edge(self, u: str, v: str) -> bool:
        return (u, v) in self.follows

    def totals(self) -> UserTotals:
        return UserTotals(*(sum(col) for col in zip(*self.users.values()))) if self.users else _ZERO_USER

    def check(self) -> None:
        """Raise ValueError if the marginal or range invariants are broken."""
        sums: dict[str, list[int]] = defaultdict(lambda: [0, 0, 0])
        for (u, v), pc in self.pairs.items():
            if u == v:
                raise ValueError(f"self pair {u!r}")
            if min(pc) < 0 or pc.total == 0:
                raise ValueError(f"bad pair counts {pc} for {(u, v)}")
            acc = sums[u]
            for i, x in enumerate(pc):
                acc[i] += x
        for u, totals in self.users.items():
            if min(totals) < 0:
                raise ValueError(f"negative totals for {u!r}")
            if list(totals[1:]) != sums.get(u, [0, 0, 0]):
                raise ValueError(f"marginals of {u!r} disagree with its pair counts")
            if totals.tweets < max(totals[1:]):
                raise ValueError(f"{u!r} has fewer tweets than interactions")
        unknown = {u for pair in self.pairs for u in pair} - self.users.keys()
        unknown |= {u for pair in self.follows for u in pair} - self.users.keys()
        if unknown:
            raise ValueError(f"users missing from totals: {sorted(unknown)[:5]}")


@dataclass(frozen=True)
class CorpusSnapshot:
    counts: InteractionCounts
    event_count: int = 0
    ingest_errors: int = 0
    source_digest: str = hashlib.sha256(b"").hexdigest()


class _Accumulator:
    def __init__(self) -> None:
        self.users: dict[str, list[int]] = {}
        self.pairs: dict[tuple[str, str], list[int]] = {}
        self.follows: set[tuple[str, str]] = set()
        self.events = 0
        self.errors = 0
        self.digest = hashlib.sha256()

    def _user(self, u: str) -> list[int]:
        row = self.users.get(u)
        if row is None:
            row = self.users[u] = [0, 0, 0, 0]
        return row

    def add(self, ev: EventRecord) -> None:
        self.events += 1
        row = self._user(ev.actor)
        if ev.target is not None:
            self._user(ev.target)
        if ev.kind == "follow":
            self.follows.add((ev.actor, ev.target))
            return
        if ev.primary:
            row[0] += 1
        if ev.kind == "tweet":
            return
        slot = ("retweet", "mention", "citation").index(ev.kind)
        row[1 + slot] += 1
        key = (ev.actor, ev.target)
        prow = self.pairs.get(key)
        if prow is None:
            prow = self.pairs[key] = [0, 0, 0]
        prow[slot] += 1

    def finish(self) -> CorpusSnapshot:
        # Secondary records with no primary sibling leave T below the channel
        # totals; lift T so every discount coefficient stays within [0, 1].
        for u, row in self.users.items():
            short = max(row[1:]) - row[0]
            if short > 0:
                log.warning("user %s: %d interaction(s) without a primary tweet", u, short)
                row[0] += short
                self.errors += short
        counts = InteractionCounts(
            users={u: UserTotals(*row) for u, row in sorted(self.users.items())},
            pairs={k: PairCounts(*row) for k, row in sorted(self.pairs.items())},
            follows=frozenset(self.follows),
        )
        return CorpusSnapshot(counts, self.events, self.errors, self.digest.hexdigest())


def ingest_events(lines: Iterable[str | bytes]) -> CorpusSnapshot:
    """Aggregate an event stream.  Malformed lines are skipped and counted.

    Accepts text lines or raw byte lines (decoded as UTF-8).  Blank lines are
    ignored without being counted as errors.
    """
    acc = _Accumulator()
    for lineno, raw in enumerate(lines, 1):
        if isinstance(raw, str):
            data = raw.encode("utf-8")
        else:
            data = raw
        acc.digest.update(data)
        try:
            text = data.decode("utf-8") if isinstance(raw, bytes) else raw
        except UnicodeDecodeError:
            acc.errors += 1
            log.debug("line %d: not UTF-8", lineno)
            continue
        if not text.strip():
            continue
        try:
            ev = parse_event_line(text)
        except MalformedLine as exc:
            acc.errors += 1
            log.debug("line %d: %s", lineno, exc)
            continue
        acc.add(ev)
    return acc.finish()


def _iter_file_lines(paths: Iterable[str | Path]) -> Iterator[bytes]:
    for path in paths:
        try:
            with open(path, "rb") as fh:
                yield from fh
        except OSError as exc:
            raise UnreadableInput(f"cannot read {path}: {exc}") from exc


def ingest_files(paths: Iterable[str | Path]) -> CorpusSnapshot:
    """Ingest several event files as one concatenated stream."""
    return ingest_events(_iter_file_lines(paths))


def merge_snapshots(snapshots: Iterable[CorpusSnapshot]) -> CorpusSnapshot:
    """Combine snapshots of disjoint shards: counts add, follow sets union.

    The merged digest hashes the shard digests in the given order.
    """
    users: dict[str, list[int]] = {}
    pairs: dict[tuple[str, str], list[int]] = {}
    follows: set[tuple[str, str]] = set()
    events = errors = 0
    digest = hashlib.sha256()
    for snap in snapshots:
        for u, t in snap.counts.users.items():
            row = users.setdefault(u, [0, 0, 0, 0])
            for i, x in enumerate(t):
                row[i] += x
        for k, pc in snap.counts.pairs.items():
            row = pairs.setdefault(k, [0, 0, 0])
            for i, x in enumerate(pc):
                row[i] += x
        follows |= snap.counts.follows
        events += snap.event_count
        errors += snap.ingest_errors
        digest.update(snap.source_digest.encode())
    counts = InteractionCounts(
        users={u: UserTotals(*r) for u, r in sorted(users.items())},
        pairs={k: PairCounts(*r) for k, r in sorted(pairs.items())},
        follows=frozenset(follows),
    )
    return CorpusSnapshot(counts, events, errors, digest.hexdigest())


def pairs_with_interaction(counts: InteractionCounts) -> list[tuple[str, str]]:
    """Ordered pairs with any retweet/mention/citation, plus all follow pairs."""
    candidates = {k for k, pc in counts.pairs.items() if pc.total > 0}
    candidates |= counts.follows
    return sorted(candidates)


# -- snapshot files ---------------------------------------------------------
#
# Line 1: "EVIDENT-SNAPSHOT <version>"
# Line 2: JSON header {format_version, users, pairs, follows, event_count,
#         ingest_errors, source_digest, checksum}
# Body:   "U\tuser\tT\tRt\tMt\tCt", "P\tu\tv\trt\tmt\tct", "F\tu\tv" lines,
#         sorted; checksum is the SHA-256 of the body bytes.


def _body_lines(counts: InteractionCounts) -> Iterator[str]:
    for u, t in sorted(counts.users.items()):
        yield "U\t{}\t{}\t{}\t{}\t{}\n".format(u, *t)
    for (u, v), pc in sorted(counts.pairs.items()):
        yield "P\t{}\t{}\t{}\t{}\t{}\n".format(u, v, *pc)
    for u, v in sorted(counts.follows):
        yield f"F\t{u}\t{v}\n"


def dump_snapshot(snapshot: CorpusSnapshot) -> bytes:
    body = "".join(_body_lines(snapshot.counts)).encode("utf-8")
    header = {
        "format_version": SNAPSHOT_VERSION,
        "users": len(snapshot.counts.users),
        "pairs": len(snapshot.counts.pairs),
        "follows": len(snapshot.counts.follows),
        "event_count": snapshot.event_count,
        "ingest_errors": snapshot.ingest_errors,
        "source_digest": snapshot.source_digest,
        "checksum": hashlib.sha256(body).hexdigest(),
    }
    head = f"{SNAPSHOT_MAGIC} {SNAPSHOT_VERSION}\n{json.dumps(header, sort_keys=True)}\n"
    return head.encode("utf-8") + body


def save_snapshot(snapshot: CorpusSnapshot, destination: str | Path) -> None:
    data = dump_snapshot(snapshot)
    dest = Path(destination)
    tmp = dest.with_name(dest.name + ".tmp")
    try:
        tmp.write_bytes(data)
        tmp.replace(dest)
    except OSError as exc:
        raise WriteFailure(f"cannot write snapshot {dest}: {exc}") from exc


def parse_snapshot(data: bytes) -> CorpusSnapshot:
    first, sep, rest = data.partition(b"\n")
    magic, _, version = first.decode("utf-8", "replace").partition(" ")
    if magic != SNAPSHOT_MAGIC or not sep:
        raise CorruptSnapshot("not a snapshot file")
    if version != str(SNAPSHOT_VERSION):
        raise VersionMismatch(f"snapshot version {version!r}, expected {SNAPSHOT_VERSION}")
    head, sep, body = rest.partition(b"\n")
    try:
        header = json.loads(head)
        checksum = header["checksum"]
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptSnapshot(f"unreadable header: {exc}") from None
    if header.get("format_version") != SNAPSHOT_VERSION:
        raise VersionMismatch(f"header version {header.get('format_version')!r}")
    if not sep:
        raise CorruptSnapshot("truncated header")
    if hashlib.sha256(body).hexdigest() != checksum:
        raise CorruptSnapshot("checksum mismatch")

    users: dict[str, UserTotals] = {}
    pairs: dict[tuple[str, str], PairCounts] = {}
    follows: set[tuple[str, str]] = set()
    try:
        for line in body.decode("utf-8").splitlines():
            tag, *f = line.split("\t")
            if tag == "U" and len(f) == 5:
                users[f[0]] = UserTotals(*map(int, f[1:]))
            elif tag == "P" and len(f) == 5:
                pairs[(f[0], f[1])] = PairCounts(*map(int, f[2:]))
            elif tag == "F" and len(f) == 2:
                follows.add((f[0], f[1]))
            else:
                raise ValueError(f"bad record {line[:40]!r}")
        counts = InteractionCounts(users, pairs, frozenset(follows))
        if (len(users), len(pairs), len(follows)) != (
            header["users"], header["pairs"], header["follows"]
        ):
            raise ValueError("record counts disagree with header")
        counts.check()
        return CorpusSnapshot(
            counts, int(header["event_count"]), int(header["ingest_errors"]), str(header["source_digest"])
        )
    except (ValueError, KeyError, TypeError) as exc:
        raise CorruptSnapshot(str(exc)) from None


def load_snapshot(source: str | Path) -> CorpusSnapshot:
    try:
        data = Path(source).read_bytes()
    except OSError as exc:
        raise UnreadableInput(f"cannot read snapshot {source}: {exc}") from exc
    return parse_snapshot(data)


def read_header(source: str | Path) -> dict:
    """Header fields of a snapshot file, without verifying the body."""
    with open(source, "rb") as fh:
        fh.readline()
        return json.loads(fh.readline())
