"""Synthetic WSDL corpora with controlled category distributions.

Each record draws its own generator from ``SeedSequence([seed, index])``, so
corpora of different sizes built from the same seed share a common prefix.
Behavior and cost category are sampled independently of each other, and the
generated operation signatures agree with the sampled behavior.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .taxonomy import BEHAVIORS, COST_MODES, BehaviorCategory, Classification, encode
from .wsdl import WsdlDocument, WsdlOperation, render_wsdl

PRESET_SIZES = (100, 500, 1000, 5000, 10000)

DEFAULT_VOCAB: dict[str, dict[str, list[str]]] = {
    "weather": {
        "verbs": ["Get", "Fetch", "Publish", "Report", "Track"],
        "nouns": ["Forecast", "Weather", "Temperature", "Rainfall", "Storm"],
        "words": ["weather", "forecast", "daily", "hourly", "temperature", "humidity", "wind", "city"],
    },
    "finance": {
        "verbs": ["Convert", "Quote", "Get", "Publish", "Verify"],
        "nouns": ["Currency", "ExchangeRate", "Stock", "CreditCard", "Payment"],
        "words": ["currency", "exchange", "rates", "stock", "market", "credit", "card", "bank"],
    },
    "travel": {
        "verbs": ["Book", "Search", "Reserve", "Cancel", "Get"],
        "nouns": ["Ticket", "Flight", "Hotel", "Train", "Itinerary"],
        "words": ["ticket", "flight", "hotel", "booking", "travel", "airport", "seat", "route"],
    },
    "reports": {
        "verbs": ["Submit", "Log", "Report", "Record", "Archive"],
        "nouns": ["Incident", "Usage", "Audit", "Metrics", "Feedback"],
        "words": ["report", "incident", "audit", "log", "metrics", "usage", "submission", "record"],
    },
    "commerce": {
        "verbs": ["Order", "Buy", "Ship", "Track", "Price"],
        "nouns": ["Flowers", "Software", "Parcel", "Product", "Invoice"],
        "words": ["order", "flowers", "software", "online", "shipping", "product", "invoice", "price"],
    },
}

_DOC_TEMPLATES = (
    "Provides {w0} and {w1} information for {w2} customers.",
    "A {w0} service that handles {w1} requests with {w2} support.",
    "Returns {w0} {w1} data; suitable for {w2} applications.",
    "Offers {w0} access to {w1} and {w2} records.",
)
_OP_DOC_TEMPLATES = (
    "Operation for {w0} {w1}.",
    "Handles {w0} requests.",
    "{W0} {w1} lookup.",
)


class GenerationError(ValueError):
    pass


def preset_sizes() -> list[int]:
    return list(PRESET_SIZES)


def _uniform(k: int) -> tuple[float, ...]:
    return tuple([1.0 / k] * k)


@dataclass(frozen=True)
class GenSpec:
    """Corpus parameters. ``behavior_weights`` follow (Collective, Notifying,
    Interactive); ``cost_weights`` follow (FreeUnlimited, FreeLimited,
    Subscribe, PayPerUse)."""

    size: int
    seed: int = 42
    behavior_weights: tuple[float, ...] = _uniform(3)
    cost_weights: tuple[float, ...] = _uniform(4)
    vocab: dict[str, dict[str, list[str]]] = field(default_factory=lambda: DEFAULT_VOCAB)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise GenerationError("size must be >= 1")
        for name, weights, n in (
            ("behavior_weights", self.behavior_weights, 3),
            ("cost_weights", self.cost_weights, 4),
        ):
            if len(weights) != n:
                raise GenerationError(f"{name} needs {n} entries, got {len(weights)}")
            if any(w < 0 for w in weights):
                raise GenerationError(f"{name} must be non-negative")
            if abs(math.fsum(weights) - 1.0) > 1e-9:
                raise GenerationError(f"{name} must sum to 1, got {math.fsum(weights)}")
        if not self.vocab:
            raise GenerationError("vocab needs at least one theme")

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "seed": self.seed,
            "behavior_weights": {b.label: w for b, w in zip(BEHAVIORS, self.behavior_weights)},
            "cost_weights": {m.label: w for m, w in zip(COST_MODES, self.cost_weights)},
            "vocab": self.vocab,
        }

    @classmethod
    def from_json(cls, obj: dict) -> GenSpec:
        bw = obj.get("behavior_weights")
        cw = obj.get("cost_weights")
        if isinstance(bw, dict):
            bw = [bw[b.label] for b in BEHAVIORS]
        if isinstance(cw, dict):
            cw = [cw[m.label] for m in COST_MODES]
        return cls(
            size=int(obj["size"]),
            seed=int(obj.get("seed", 42)),
            behavior_weights=tuple(bw) if bw else _uniform(3),
            cost_weights=tuple(cw) if cw else _uniform(4),
            vocab=obj.get("vocab") or DEFAULT_VOCAB,
        )


@dataclass(frozen=True)
class ManifestEntry:
    file: str
    service_name: str
    classification: Classification


@dataclass
class CorpusManifest:
    entries: list[ManifestEntry]
    counts: dict[str, int]
    realized_distribution: dict[str, float]

    def to_json(self) -> dict:
        return {
            "entries": [
                {
                    "file": e.file,
                    "service_name": e.service_name,
                    "classification": encode(e.classification),
                    "behavior": e.classification.behavior.label,
                    "cost": e.classification.cost_label,
                }
                for e in self.entries
            ],
            "counts": self.counts,
            "realized_distribution": self.realized_distribution,
        }

    @classmethod
    def from_json(cls, obj: dict) -> CorpusManifest:
        from .taxonomy import decode

        entries = [
            ManifestEntry(e["file"], e["service_name"], decode(e["classification"])) for e in obj["entries"]
        ]
        return cls(entries, dict(obj["counts"]), dict(obj["realized_distribution"]))


def realized_distribution(classifications: list[Classification]) -> tuple[dict[str, int], dict[str, float]]:
    n = len(classifications)
    beh = Counter(c.behavior for c in classifications)
    cost = Counter(c.mode for c in classifications)
    counts = {b.label: beh[b] for b in BEHAVIORS}
    counts.update({m.label: cost[m] for m in COST_MODES})
    return counts, {k: v / n for k, v in counts.items()}


def _pick(rng: np.random.Generator, items):
    return items[int(rng.integers(len(items)))]


def generate_record(spec: GenSpec, index: int) -> tuple[WsdlDocument, Classification]:
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, index]))
    behavior = BEHAVIORS[int(rng.choice(3, p=spec.behavior_weights))]
    mode = COST_MODES[int(rng.choice(4, p=spec.cost_weights))]

    theme = spec.vocab[_pick(rng, sorted(spec.vocab))]
    verb, noun = _pick(rng, theme["verbs"]), _pick(rng, theme["nouns"])
    words = theme["words"]
    name = f"{verb}{noun}Service"

    def fill(template: str) -> str:
        w = [_pick(rng, words) for _ in range(3)]
        return template.format(w0=w[0], w1=w[1], w2=w[2], W0=w[0].capitalize())

    n_ops = 1 + int(rng.integers(3))
    operations = []
    for k in range(n_ops):
        op_verb = verb if k == 0 else _pick(rng, theme["verbs"])
        op_name = f"{op_verb}{_pick(rng, theme['nouns'])}" + ("" if k == 0 else str(k))
        if behavior is BehaviorCategory.COLLECTIVE:
            io = (True, False)
        elif behavior is BehaviorCategory.NOTIFYING:
            io = (False, True)
        elif k == 0:
            io = (True, True)
        else:
            io = _pick(rng, [(True, True), (True, False), (False, True)])
        operations.append(WsdlOperation(op_name, io[0], io[1], fill(_pick(rng, _OP_DOC_TEMPLATES))))

    doc = WsdlDocument(
        service_name=name,
        documentation=fill(_pick(rng, _DOC_TEMPLATES)),
        operations=tuple(operations),
        target_namespace=f"urn:svcdisco:gen:{spec.seed}:{index}",
    )
    return doc, Classification.of(behavior, mode)


def generate(spec: GenSpec, out_dir: str | Path) -> CorpusManifest:
    """Write ``spec.size`` WSDL files plus ``manifest.json`` and ``genspec.json``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise GenerationError(f"cannot create {out}: {exc}") from None
    width = max(5, len(str(spec.size - 1)))
    entries = []
    try:
        for i in range(spec.size):
            doc, c = generate_record(spec, i)
            fname = f"ws_{i:0{width}d}.wsdl"
            (out / fname).write_text(render_wsdl(doc), encoding="utf-8")
            entries.append(ManifestEntry(fname, doc.service_name, c))
        counts, dist = realized_distribution([e.classification for e in entries])
        manifest = CorpusManifest(entries, counts, dist)
        _write_json(out / "manifest.json", manifest.to_json())
        _write_json(out / "genspec.json", spec.to_json())
    except OSError as exc:
        raise GenerationError(f"cannot write corpus to {out}: {exc}") from None
    return manifest


def load_manifest(corpus_dir: str | Path) -> CorpusManifest:
    path = Path(corpus_dir) / "manifest.json"
    try:
        return CorpusManifest.from_json(json.loads(path.read_text()))
    except FileNotFoundError:
        raise GenerationError(f"no manifest.json in {corpus_dir}") from None


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")
