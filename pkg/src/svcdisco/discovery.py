"""Two-stage discovery: classification prefilter, then keyword matching.

Every record scanned costs one prefilter comparison (``nf_ops``); only records
that pass the prefilter are keyword-matched (``disc_ops``). The keyword stage
is token overlap and stands in for a real semantic matcher.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import kernels
from .registry import Registry, ServiceRecord
from .taxonomy import (
    BEHAVIORS,
    COST_MODES,
    BehaviorCategory,
    Classification,
    CostMode,
    TaxonomyError,
    decode,
    parse_category,
)
from .wsdl import tokenize


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class Selection:
    """Categories chosen per criterion. An empty set leaves that criterion
    unconstrained; categories combine by union within a criterion and by
    intersection across criteria."""

    behavior_set: frozenset[BehaviorCategory] = frozenset()
    cost_set: frozenset[CostMode] = frozenset()

    @classmethod
    def from_labels(cls, labels: Iterable[str] | str | None) -> Selection:
        if labels is None:
            return cls()
        if isinstance(labels, str):
            labels = labels.split(",")
        behaviors, costs = set(), set()
        for label in labels:
            if not label.strip():
                continue
            cat = parse_category(label)
            (behaviors if isinstance(cat, BehaviorCategory) else costs).add(cat)
        return cls(frozenset(behaviors), frozenset(costs))

    @classmethod
    def everything(cls) -> Selection:
        return cls(frozenset(BEHAVIORS), frozenset(COST_MODES))

    def labels(self) -> list[str]:
        return [b.label for b in BEHAVIORS if b in self.behavior_set] + [
            m.label for m in COST_MODES if m in self.cost_set
        ]

    def matches(self, c: Classification) -> bool:
        return (not self.behavior_set or c.behavior in self.behavior_set) and (
            not self.cost_set or c.mode in self.cost_set
        )

    def matches_id(self, cid: str) -> bool:
        return self.matches(decode(cid))

    def masks(self) -> tuple[int, int]:
        """Bit masks over BEHAVIORS / COST_MODES order, empty sets as all-ones."""
        bmask = sum(1 << i for i, b in enumerate(BEHAVIORS) if b in self.behavior_set)
        cmask = sum(1 << i for i, m in enumerate(COST_MODES) if m in self.cost_set)
        return bmask or (1 << len(BEHAVIORS)) - 1, cmask or (1 << len(COST_MODES)) - 1


@dataclass(frozen=True)
class Query:
    keywords: tuple[str, ...]
    selection: Selection = field(default_factory=Selection)

    def __post_init__(self) -> None:
        kws = tuple(dict.fromkeys(k.lower() for k in self.keywords if k))
        if not kws:
            raise QueryError("query needs at least one keyword")
        object.__setattr__(self, "keywords", kws)

    @classmethod
    def parse(cls, text: str, select: str | Iterable[str] | None = None) -> Query:
        try:
            sel = Selection.from_labels(select)
        except TaxonomyError as exc:
            raise QueryError(str(exc)) from None
        return cls(tuple(tokenize(text)), sel)


@dataclass(frozen=True)
class MatchCounts:
    x: int
    y: int

    @property
    def coverage(self) -> Fraction:
        total = self.x + self.y
        return Fraction(self.x, total) if total else Fraction(0)


@dataclass(frozen=True)
class CostBreakdown:
    nf_ops: int
    disc_ops: int
    wall_ns: int


@dataclass(frozen=True)
class Hit:
    record_id: str
    score: Fraction


@dataclass(frozen=True)
class SearchResult:
    hits: tuple[Hit, ...]
    counts: MatchCounts
    cost: CostBreakdown

    def hit_ids(self) -> list[str]:
        return [h.record_id for h in self.hits]

    def to_json(self) -> dict:
        return {
            "hits": [{"record_id": h.record_id, "score": float(h.score)} for h in self.hits],
            "x": self.counts.x,
            "y": self.counts.y,
            "nf_ops": self.cost.nf_ops,
            "disc_ops": self.cost.disc_ops,
            "wall_ns": self.cost.wall_ns,
        }


@dataclass(frozen=True)
class CostPadding:
    """Busy-work iterations added after each prefilter check and each keyword match."""

    nf_spin: int = 0
    disc_spin: int = 0

    @classmethod
    def calibrate(cls, ratio: float, unit_ns: float = 200.0, backend=None) -> CostPadding:
        """Padding such that one prefilter check costs about ``unit_ns`` and one
        keyword match about ``ratio`` times that, on ``backend``'s spin loop."""
        spin = (backend or kernels).spin
        probe = 1 << 14
        best = float("inf")
        while True:
            t0 = time.perf_counter_ns()
            spin(probe)
            elapsed = time.perf_counter_ns() - t0
            if elapsed > 2_000_000 or probe >= 1 << 26:
                break
            probe <<= 1
        for _ in range(5):
            t0 = time.perf_counter_ns()
            spin(probe)
            best = min(best, time.perf_counter_ns() - t0)
        per_iter = max(best / probe, 1e-3)
        unit = max(1, round(unit_ns / per_iter))
        return cls(unit, max(1, round(unit * ratio)))


NO_PADDING = CostPadding()


def matches_selection(record: ServiceRecord, sel: Selection) -> bool:
    return sel.matches(record.decoded)


def heavy_match(record: ServiceRecord, keywords: Iterable[str]) -> Fraction:
    """Share of distinct keywords found among the record's name/doc tokens."""
    kws = set(keywords)
    if not kws:
        raise QueryError("keywords must be non-empty")
    return Fraction(len(kws & record.match_tokens), len(kws))


def _rank(reg: Registry, scored: list[tuple[int, Fraction]]) -> tuple[Hit, ...]:
    scored.sort(key=lambda item: (-item[1], item[0]))
    return tuple(Hit(reg.records[pos].record_id, score) for pos, score in scored)


def search_scan(reg: Registry, q: Query, pad: CostPadding | None = None, *, backend=None) -> SearchResult:
    """Linear scan in insertion order; each record pays the prefilter, each
    survivor additionally pays the keyword match."""
    pad = pad or NO_PADDING
    impl = backend or kernels
    cols = reg.columns()
    bmask, cmask = q.selection.masks()
    kw = cols.keyword_ids(q.keywords)
    t0 = time.perf_counter_ns()
    rows, overlaps, x, _ = impl.scan(
        cols.behavior, cols.mode, cols.indptr, cols.tokens, bmask, cmask, kw, pad.nf_spin, pad.disc_spin
    )
    wall = time.perf_counter_ns() - t0
    n = len(cols.behavior)
    denom = len(q.keywords)
    # every score shares the denominator, so rank on the integer overlap
    order = sorted(zip((-overlaps).tolist(), rows.tolist()))
    records = reg.records
    hits = tuple(Hit(records[pos].record_id, Fraction(-neg, denom)) for neg, pos in order)
    return SearchResult(hits, MatchCounts(x, n - x), CostBreakdown(n, x, wall))


def search_indexed(reg: Registry, q: Query) -> SearchResult:
    """Prefilter whole index buckets instead of records; one ``nf_op`` per
    bucket whose classification passes the selection."""
    t0 = time.perf_counter_ns()
    sel = q.selection
    touched = [ids for cid, ids in reg.class_index.items() if sel.matches_id(cid)]
    positions = sorted(reg.position(rid) for ids in touched for rid in ids)
    scored = []
    for pos in positions:
        score = heavy_match(reg.records[pos], q.keywords)
        if score > 0:
            scored.append((pos, score))
    wall = time.perf_counter_ns() - t0
    x = len(positions)
    return SearchResult(
        _rank(reg, scored), MatchCounts(x, len(reg) - x), CostBreakdown(len(touched), x, wall)
    )


def search(reg: Registry, q: Query, mode: str = "scan", pad: CostPadding | None = None) -> SearchResult:
    if mode == "scan":
        return search_scan(reg, q, pad)
    if mode == "indexed":
        return search_indexed(reg, q)
    raise QueryError(f"unknown search mode {mode!r} (expected scan or indexed)")


def result_payload(reg: Registry, res: SearchResult) -> dict:
    """JSON form shared by the CLI and the HTTP API."""
    out = res.to_json()
    for hit in out["hits"]:
        rec = reg.get(hit["record_id"])
        hit["name"] = rec.name
        hit["classification"] = rec.classification
    return out
