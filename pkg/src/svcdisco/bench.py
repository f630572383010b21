"""Coverage sweep: the same query under several category selections per corpus.

Every cell records operation counts and wall time. The primary metric is the
count-based TSP. Cost is weighted as ``nf_ops * 1 + disc_ops * r`` and the
saving is taken against the all-categories baseline. The saving is then
divided by itself plus the weighted work spent on records that reached the
keyword stage, which matches the closed-form prediction term for term.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

from . import costmodel
from .datagen import GenSpec, generate, load_manifest, preset_sizes
from .discovery import NO_PADDING, CostPadding, Query, Selection, search_scan
from .registry import Registry
from .taxonomy import category_universe
from .wsdl import load_wsdl

REPORT_HEADER = [
    "size",
    "scenario",
    "coverage",
    "x",
    "y",
    "measured_tsp",
    "predicted_tsp",
    "wall_tsp",
    "baseline_ms",
]


class BenchError(RuntimeError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    categories: tuple[str, ...]

    @property
    def selection(self) -> Selection:
        return Selection.from_labels(self.categories)


DEFAULT_SCENARIOS = (
    Scenario("one-category", ("Notifying",)),
    Scenario("two-categories", ("Notifying", "FreeUnlimited")),
    Scenario("six-categories", tuple(c for c in category_universe() if c != "Collective")),
    Scenario("all-categories", tuple(category_universe())),
)


@dataclass
class BenchConfig:
    sizes: list[int] = field(default_factory=preset_sizes)
    keywords: str = "weather forecast"
    scenarios: tuple[Scenario, ...] = DEFAULT_SCENARIOS
    ratio: int | Fraction = 1
    repetitions: int = 5
    seed: int = 42
    # approximate wall cost of one prefilter check; 0 disables padding
    padding_unit_ns: float = 200.0

    def __post_init__(self) -> None:
        if self.repetitions < 1:
            raise BenchError("repetitions must be >= 1")
        if self.ratio < 1:
            raise BenchError("cost ratio r = t_disc/t_nf must be >= 1")
        if not self.sizes:
            raise BenchError("at least one dataset size is required")

    @classmethod
    def from_json(cls, obj: dict) -> BenchConfig:
        kwargs = {}
        for key in ("sizes", "keywords", "repetitions", "seed", "padding_unit_ns"):
            if key in obj:
                kwargs[key] = obj[key]
        if "ratio" in obj:
            kwargs["ratio"] = Fraction(str(obj["ratio"]))
        if "scenarios" in obj:
            raw = obj["scenarios"]
            items = raw.items() if isinstance(raw, dict) else ((s["name"], s["categories"]) for s in raw)
            kwargs["scenarios"] = tuple(
                Scenario(name, tuple(cats.split(",") if isinstance(cats, str) else cats)) for name, cats in items
            )
        return cls(**kwargs)


@dataclass(frozen=True)
class BenchRow:
    size: int
    scenario: str
    categories: tuple[str, ...]
    x: int
    y: int
    coverage: Fraction
    nf_ops: int
    disc_ops: int
    measured_tsp: Fraction
    predicted_tsp: Fraction
    wall_tsp: float
    wall_ms: float
    baseline_ms: float


@dataclass
class BenchReport:
    rows: list[BenchRow]
    ratio: Fraction
    backend: str = ""

    def sorted_rows(self) -> list[BenchRow]:
        return sorted(self.rows, key=lambda r: (r.size, r.coverage, r.scenario))

    def by_scenario(self, size: int, scenario: str) -> BenchRow:
        for row in self.rows:
            if row.size == size and row.scenario == scenario:
                return row
        raise KeyError((size, scenario))


def register_corpus(corpus_dir: str | Path, registry: Registry | None = None) -> Registry:
    """Register every service in a generated corpus under its manifest classification."""
    corpus_dir = Path(corpus_dir)
    if not corpus_dir.is_dir():
        raise BenchError(f"missing corpus directory {corpus_dir}")
    manifest = load_manifest(corpus_dir)
    reg = registry if registry is not None else Registry()
    for entry in manifest.entries:
        doc = load_wsdl(corpus_dir / entry.file)
        reg.register(doc, entry.classification)
    return reg


def weighted_ops(nf_ops: int, disc_ops: int, ratio) -> Fraction:
    return Fraction(nf_ops) + Fraction(disc_ops) * ratio


def measured_tsp(baseline_nf: int, baseline_disc: int, nf_ops: int, disc_ops: int, ratio) -> Fraction:
    """Count-based TSP of a scenario against the all-categories baseline."""
    saving = weighted_ops(baseline_nf, baseline_disc, ratio) - weighted_ops(nf_ops, disc_ops, ratio)
    matched_work = weighted_ops(disc_ops, disc_ops, ratio)
    whole = saving + matched_work
    return saving / whole if whole else Fraction(0)


def _run_cells(reg: Registry, query: Query, selections: list[Selection], reps: int, pad: CostPadding):
    results: list[list] = [[] for _ in selections]
    for _ in range(reps):
        for k, sel in enumerate(selections):
            results[k].append(search_scan(reg, Query(query.keywords, sel), pad))
    return results


def run_bench(cfg: BenchConfig, corpus_dirs: Mapping[int, str | Path]) -> BenchReport:
    from . import kernels

    ratio = Fraction(cfg.ratio)
    pad = CostPadding.calibrate(float(ratio), cfg.padding_unit_ns) if cfg.padding_unit_ns > 0 else NO_PADDING
    query = Query.parse(cfg.keywords)
    rows = []
    for size in cfg.sizes:
        if size not in corpus_dirs:
            raise BenchError(f"no corpus directory given for size {size}")
        reg = register_corpus(corpus_dirs[size])
        if len(reg) != size:
            raise BenchError(f"corpus {corpus_dirs[size]} has {len(reg)} services, expected {size}")

        selections = [Selection.everything(), Selection()] + [s.selection for s in cfg.scenarios]
        runs = _run_cells(reg, query, selections, cfg.repetitions, pad)
        base, unfiltered = runs[0][0], runs[1][0]
        if base.hit_ids() != unfiltered.hit_ids():
            raise BenchError("all-categories hits differ from the unfiltered run")
        base_wall = statistics.median(r.cost.wall_ns for r in runs[0])

        for scenario, reps in zip(cfg.scenarios, runs[2:]):
            if scenario.selection == Selection.everything():
                # the baseline itself, so its wall saving is exactly zero
                reps = runs[0]
            res = reps[0]
            if any(r.counts != res.counts or r.cost.nf_ops != res.cost.nf_ops for r in reps):
                raise BenchError("operation counts changed between repetitions")
            wall = statistics.median(r.cost.wall_ns for r in reps)
            x, y = res.counts.x, res.counts.y
            rows.append(
                BenchRow(
                    size=size,
                    scenario=scenario.name,
                    categories=tuple(scenario.selection.labels()),
                    x=x,
                    y=y,
                    coverage=res.counts.coverage,
                    nf_ops=res.cost.nf_ops,
                    disc_ops=res.cost.disc_ops,
                    measured_tsp=measured_tsp(
                        base.cost.nf_ops, base.cost.disc_ops, res.cost.nf_ops, res.cost.disc_ops, ratio
                    ),
                    predicted_tsp=costmodel.tsp_general(x, y, costmodel.CostModelParams(1, ratio)),
                    wall_tsp=(base_wall - wall) / base_wall if base_wall else 0.0,
                    wall_ms=wall / 1e6,
                    baseline_ms=base_wall / 1e6,
                )
            )
    return BenchReport(rows, ratio, kernels.BACKEND)


def prepare_corpora(cfg: BenchConfig, root: str | Path) -> dict[int, Path]:
    """Generate (or reuse) one corpus per configured size under ``root``."""
    root = Path(root)
    dirs = {}
    for size in cfg.sizes:
        d = root / f"corpus_n{size}_s{cfg.seed}"
        if not (d / "manifest.json").exists():
            generate(GenSpec(size=size, seed=cfg.seed), d)
        dirs[size] = d
    return dirs


def emit_report(rep: BenchReport, path: str | Path) -> None:
    if not rep.rows:
        raise BenchError("empty bench report")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_HEADER)
        for r in rep.sorted_rows():
            w.writerow(
                [
                    r.size,
                    r.scenario,
                    f"{float(r.coverage):.6f}",
                    r.x,
                    r.y,
                    f"{float(r.measured_tsp):.6f}",
                    f"{float(r.predicted_tsp):.6f}",
                    f"{r.wall_tsp:.6f}",
                    f"{r.baseline_ms:.3f}",
                ]
            )


def read_report(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != REPORT_HEADER:
            raise BenchError(f"{path}: unexpected header {reader.fieldnames}")
        out = []
        for row in reader:
            out.append(
                {
                    "size": int(row["size"]),
                    "scenario": row["scenario"],
                    "x": int(row["x"]),
                    "y": int(row["y"]),
                    **{k: float(row[k]) for k in ("coverage", "measured_tsp", "predicted_tsp", "wall_tsp", "baseline_ms")},
                }
            )
        return out


def emit_dat(rep: BenchReport, path: str | Path) -> None:
    """gnuplot data file: one block per dataset size, blank-line separated."""
    lines = [f"# ratio {rep.ratio}", "# size coverage measured_tsp predicted_tsp wall_tsp"]
    for size in sorted({r.size for r in rep.rows}):
        for r in (r for r in rep.sorted_rows() if r.size == size):
            lines.append(
                f"{r.size} {float(r.coverage):.6f} {float(r.measured_tsp):.6f} "
                f"{float(r.predicted_tsp):.6f} {r.wall_tsp:.6f}"
            )
        lines += ["", ""]
    Path(path).write_text("\n".join(lines))


def load_config(path: str | Path) -> tuple[BenchConfig, dict]:
    """Read a JSON bench config; returns the config and the raw object."""
    obj = json.loads(Path(path).read_text())
    return BenchConfig.from_json(obj), obj
