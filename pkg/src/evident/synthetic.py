"""Seeded synthetic interaction corpora with planted dependent pairs.

Users are named ``S1`` .. ``Sn``.  Every user posts a Poisson number of
tweets; a Poisson number of those carry a retweet / mention / citation of a
uniformly random other user (background noise).  A planted actor instead
posts exactly ``planted_volume`` tweets, ``round(alpha * volume)`` of which
carry each channel, and ``round(weight * that)`` of those target the planted
partner.  One tweet may carry several actions; the first is written as the
primary record and the rest share its timestamp with ``primary=0``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .errors import BadSpec
from .interactions import EventRecord

CHANNELS = ("retweet", "mention", "citation")
WINDOW_START = 1496620800  # 2017-06-05 00:00 UTC


@dataclass(frozen=True)
class PlantedPair:
    u: str
    v: str
    weight: float = 0.9
    alpha: float = 0.4


@dataclass(frozen=True)
class SyntheticSpec:
    users: int = 100
    follow_density: float = 0.0
    tweet_rate: float = 0.0
    retweet_rate: float = 0.0
    mention_rate: float = 0.0
    citation_rate: float = 0.0
    planted: tuple[PlantedPair, ...] = ()
    planted_count: int = 0
    planted_weight: float = 0.9
    planted_alpha: float = 0.4
    planted_volume: int = 100
    window_days: int = 69
    seed: int = 0

    @classmethod
    def from_dict(cls, doc: dict) -> "SyntheticSpec":
        if not isinstance(doc, dict):
            raise BadSpec("spec must be a mapping")
        unknown = set(doc) - set(cls.__dataclass_fields__)
        if unknown:
            raise BadSpec(f"unknown spec fields: {sorted(unknown)}")
        doc = dict(doc)
        try:
            doc["planted"] = tuple(PlantedPair(**p) for p in doc.get("planted", ()))
            spec = cls(**doc)
        except TypeError as exc:
            raise BadSpec(str(exc)) from None
        spec.check()
        return spec

    @classmethod
    def load(cls, path: str | Path) -> "SyntheticSpec":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise BadSpec(f"cannot read spec {path}: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["planted"] = [asdict(p) for p in self.planted]
        return doc

    def user_name(self, i: int) -> str:
        return f"S{i + 1}"

    def check(self) -> None:
        if not isinstance(self.users, int) or self.users < 2:
            raise BadSpec("need at least 2 users")
        if not 0.0 <= self.follow_density <= 1.0:
            raise BadSpec("follow_density must lie in [0, 1]")
        for name in ("tweet_rate", "retweet_rate", "mention_rate", "citation_rate"):
            if not getattr(self, name) >= 0.0:
                raise BadSpec(f"{name} must be non-negative")
        if not 0 <= self.planted_count <= self.users:
            raise BadSpec("planted_count out of range")
        if self.planted_volume < 1 or self.window_days < 1:
            raise BadSpec("planted_volume and window_days must be positive")
        names = {self.user_name(i) for i in range(self.users)}
        load: dict[str, float] = {}
        levels = [(p.weight, p.alpha) for p in self.planted]
        levels.append((self.planted_weight, self.planted_alpha))
        if not all(0.0 <= x <= 1.0 for pair in levels for x in pair):
            raise BadSpec("planted weight/alpha must lie in [0, 1]")
        for p in self.planted:
            if p.u not in names or p.v not in names or p.u == p.v:
                raise BadSpec(f"planted pair {p.u!r} -> {p.v!r} does not reference two existing users")
            load[p.u] = load.get(p.u, 0.0) + p.weight
            if load[p.u] > 1.0 + 1e-9:
                raise BadSpec(f"planted weights of {p.u!r} exceed 1")
        if self.planted_count > self.users - len(load):
            raise BadSpec("not enough free users for planted_count")


@dataclass
class _Plan:
    """Per-actor plan: tweet volume and, per channel, the list of targets."""

    volume: int
    targets: dict[str, list[int]] = field(default_factory=dict)


def resolve_planted(spec: SyntheticSpec, rng: np.random.Generator) -> list[PlantedPair]:
    """Explicit planted pairs plus ``planted_count`` random ones on fresh actors."""
    pairs = list(spec.planted)
    taken = {int(p.u[1:]) - 1 for p in pairs}
    free = np.array([i for i in range(spec.users) if i not in taken])
    if spec.planted_count:
        actors = rng.choice(free, size=spec.planted_count, replace=False)
        for a in actors:
            v = int(rng.integers(spec.users - 1))
            v += v >= a
            pairs.append(
                PlantedPair(spec.user_name(int(a)), spec.user_name(v), spec.planted_weight, spec.planted_alpha)
            )
    return pairs


def _other(rng: np.random.Generator, n: int, me: int, size: int, avoid: set[int] = frozenset()) -> list[int]:
    if n - 1 - len(avoid - {me}) <= 0:
        avoid = frozenset()
    out = []
    while len(out) < size:
        t = int(rng.integers(n - 1))
        t += t >= me
        if t not in avoid:
            out.append(t)
    return out


def generate_events(spec: SyntheticSpec, seed: int | None = None) -> list[EventRecord]:
    """Deterministic event list for ``spec`` (``seed`` overrides ``spec.seed``)."""
    spec.check()
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    n = spec.users
    planted = resolve_planted(spec, rng)
    by_actor: dict[int, list[PlantedPair]] = {}
    for p in planted:
        by_actor.setdefault(int(p.u[1:]) - 1, []).append(p)
    rates = {"retweet": spec.retweet_rate, "mention": spec.mention_rate, "citation": spec.citation_rate}
    window = spec.window_days * 86400
    follows = {(int(p.u[1:]) - 1, int(p.v[1:]) - 1) for p in planted}

    events: list[EventRecord] = []
    for i in range(n):
        me = spec.user_name(i)
        k = int(rng.binomial(n - 1, spec.follow_density)) if spec.follow_density else 0
        targets = set(int(t) for t in rng.choice(n - 1, size=k, replace=False)) if k else set()
        targets = {t + (t >= i) for t in targets} | {v for a, v in follows if a == i}
        for t in sorted(targets):
            events.append(EventRecord("follow", me, spec.user_name(t), WINDOW_START))

        mine = by_actor.get(i)
        if mine:
            plan = _Plan(spec.planted_volume)
            partners = {int(p.v[1:]) - 1 for p in mine}
            for ch in CHANNELS:
                n_ch = max(round(p.alpha * plan.volume) for p in mine)
                tgt: list[int] = []
                for p in mine:
                    tgt += [int(p.v[1:]) - 1] * round(p.weight * round(p.alpha * plan.volume))
                tgt = tgt[:n_ch]
                tgt += _other(rng, n, i, n_ch - len(tgt), partners)
                plan.targets[ch] = tgt
        else:
            plan = _Plan(int(rng.poisson(spec.tweet_rate)) if spec.tweet_rate else 0)
            for ch in CHANNELS:
                n_ch = min(int(rng.poisson(rates[ch])) if rates[ch] else 0, plan.volume)
                plan.targets[ch] = _other(rng, n, i, n_ch)
        if plan.volume == 0:
            continue

        stamps = np.sort(rng.integers(0, window, size=plan.volume)) + WINDOW_START
        actions: list[list[tuple[str, int]]] = [[] for _ in range(plan.volume)]
        for ch in CHANNELS:
            tgt = plan.targets[ch]
            slots = rng.choice(plan.volume, size=len(tgt), replace=False)
            for slot, t in zip(slots, tgt):
                actions[int(slot)].append((ch, t))
        for stamp, acts in zip(stamps, actions):
            ts = int(stamp)
            if not acts:
                events.append(EventRecord("tweet", me, None, ts))
            for j, (ch, t) in enumerate(acts):
                events.append(EventRecord(ch, me, spec.user_name(t), ts, j == 0))
    return events


def planted_pairs(spec: SyntheticSpec, seed: int | None = None) -> list[tuple[str, str]]:
    """The (u, v) pairs :func:`generate_events` plants for this spec and seed."""
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    return [(p.u, p.v) for p in resolve_planted(spec, rng)]


def write_events(events: list[EventRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ev in events:
            fh.write(ev.to_line())
            fh.write("\n")
