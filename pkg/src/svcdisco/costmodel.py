"""Closed-form cost of a prefiltered scan versus an unfiltered one.

With ``x`` records passing the prefilter and ``y`` failing it, a prefiltered
scan costs ``x*(t_nf + t_disc) + y*t_nf`` while a scan that runs both stages
on every record costs ``(x + y)*(t_nf + t_disc)``. The saving is ``y*t_disc``.

The time saving percentage (TSP) divides the saving by ``2xt + yt`` in the
equal-cost case, i.e. ``y / (2x + y)``. For unequal costs :func:`tsp_general`
uses ``y*t_disc / (x*(t_nf + t_disc) + y*t_disc)``, which reduces to the
equal-cost form and stays in ``[0, 1]``.

All arithmetic is exact: counts and weights are integers or
:class:`fractions.Fraction`, ratios come back as ``Fraction``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from pathlib import Path


class CostModelError(ValueError):
    pass


@dataclass(frozen=True)
class CostModelParams:
    t_nf: Rational = 1
    t_disc: Rational = 1

    def __post_init__(self) -> None:
        for name in ("t_nf", "t_disc"):
            if not isinstance(getattr(self, name), Rational):
                raise CostModelError(f"{name} must be an exact integer or Fraction")
        if self.t_nf <= 0:
            raise CostModelError("t_nf must be positive")
        if self.t_disc < self.t_nf:
            raise CostModelError("t_disc must be at least t_nf")

    @classmethod
    def with_ratio(cls, ratio: Rational | int = 1) -> CostModelParams:
        return cls(1, ratio)


UNIT = CostModelParams()


@dataclass(frozen=True)
class ModelPrediction:
    time_filtered: Rational
    time_unfiltered: Rational
    saving: Rational
    tsp: Fraction
    saving_fraction: Fraction  # saving / time_unfiltered

    def to_json(self) -> dict:
        return {
            "time_filtered": _num(self.time_filtered),
            "time_unfiltered": _num(self.time_unfiltered),
            "saving": _num(self.saving),
            "tsp": round(float(self.tsp), 4),
            "tsp_exact": str(self.tsp),
            "saving_fraction": round(float(self.saving_fraction), 4),
        }


def _num(v):
    return int(v) if Fraction(v).denominator == 1 else float(v)


def _check_counts(x, y) -> None:
    if x < 0 or y < 0:
        raise CostModelError(f"match counts must be non-negative, got x={x}, y={y}")


def time_filtered(x: int, y: int, p: CostModelParams = UNIT):
    _check_counts(x, y)
    return x * (p.t_nf + p.t_disc) + y * p.t_nf


def time_unfiltered(x: int, y: int, p: CostModelParams = UNIT):
    _check_counts(x, y)
    return (x + y) * (p.t_nf + p.t_disc)


def time_saving(x: int, y: int, p: CostModelParams = UNIT):
    return time_unfiltered(x, y, p) - time_filtered(x, y, p)


def tsp(x: int, y: int) -> Fraction:
    """``y / (2x + y)``."""
    _check_counts(x, y)
    if x + y == 0:
        raise CostModelError("tsp undefined for an empty registry (x = y = 0)")
    return Fraction(y, 2 * x + y)


def tsp_general(x: int, y: int, p: CostModelParams = UNIT) -> Fraction:
    _check_counts(x, y)
    if x + y == 0:
        raise CostModelError("tsp undefined for an empty registry (x = y = 0)")
    saving = Fraction(y * p.t_disc)
    return saving / (x * (p.t_nf + p.t_disc) + saving)


def predict(x: int, y: int, p: CostModelParams = UNIT) -> ModelPrediction:
    filtered = time_filtered(x, y, p)
    unfiltered = time_unfiltered(x, y, p)
    saving = unfiltered - filtered
    return ModelPrediction(
        time_filtered=filtered,
        time_unfiltered=unfiltered,
        saving=saving,
        tsp=tsp_general(x, y, p),
        saving_fraction=Fraction(saving) / unfiltered,
    )


def coverage_curve(n_points: int) -> list[tuple[Fraction, Fraction]]:
    """TSP at coverage ``k/n_points`` for ``k = 1..n_points``: ``(1-c)/(1+c)``."""
    if n_points < 2:
        raise CostModelError("coverage curve needs at least 2 points")
    points = []
    for k in range(1, n_points + 1):
        c = Fraction(k, n_points)
        # tsp(x=c*N, y=(1-c)*N) with N = n_points keeps the counts integral
        points.append((c, tsp(k, n_points - k)))
    return points


def write_curve_csv(points, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["coverage", "tsp"])
        for c, t in points:
            w.writerow([f"{float(c):.6f}", f"{float(t):.6f}"])
