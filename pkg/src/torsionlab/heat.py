"""Spectral heat content ``Q(t) = sum a_m**2 exp(-lambda_m t)``.

``Q`` is the heat left at time ``t`` from unit initial temperature with the
boundary held at zero. Integrating term by term gives
``integral_0^inf Q dt = sum a_m**2 / lambda_m = T``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .geometry import Region, Shape, area, as_region
from .spectrum import ModeTable, mode_table
from .torsion import torsion_spectral

DEFAULT_CUTOFF = 2000


def _times(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(t <= 0) or np.any(~np.isfinite(t)):
        raise ValueError("times must be positive and finite")
    return t


def _q_from_table(table: ModeTable, t: float) -> float:
    return math.fsum(table.weight * np.exp(-table.lam * t))


def heat_content(r: Region | Shape | str, t, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact"):
    """``Q(t)`` truncated to modes with ``lambda <= cutoff * pi**2``.

    Scalar ``t`` gives a float, an array gives an array.
    """
    table = mode_table(r, Fraction(cutoff), coeff_source)
    ts = _times(t)
    vals = np.array([_q_from_table(table, float(x)) for x in ts])
    return float(vals[0]) if np.ndim(t) == 0 else vals


def truncation_bound(r: Region | Shape | str, t, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact"):
    """Bound on the omitted modes: ``exp(-cutoff pi**2 t) * (Area - sum of kept a**2)``.

    Valid for exact coefficients, whose squares sum to the area.
    """
    table = mode_table(r, Fraction(cutoff), coeff_source)
    missing = max(area(r) - math.fsum(table.weight), 0.0)
    ts = _times(t)
    out = missing * np.exp(-float(cutoff) * math.pi**2 * ts)
    return float(out[0]) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class HeatCurve:
    times: np.ndarray
    values: np.ndarray
    cutoff: Fraction
    coeff_source: str

    def is_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) < 0))


def heat_curve(r, times, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact") -> HeatCurve:
    ts = _times(times)
    if np.any(np.diff(ts) <= 0):
        raise ValueError("times must be strictly ascending")
    vals = heat_content(r, ts, cutoff, coeff_source)
    return HeatCurve(ts, vals, Fraction(cutoff), coeff_source)


@dataclass(frozen=True)
class MomentIdentity:
    integral: float
    torsion: float
    gap: float


def heat_moment_identity(
    r: Region | Shape | str, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact"
) -> MomentIdentity:
    """Compare ``integral_0^inf Q dt`` with the spectral torsion at the same cutoff.

    ``Q`` is integrated by adaptive quadrature on ``[0, t_max]`` with
    ``lambda_1 t_max >= 40``, and the remainder is added exactly as
    ``sum a**2 exp(-lambda t_max) / lambda``.
    """
    table = mode_table(r, Fraction(cutoff), coeff_source)
    w, lam = table.weight, table.lam
    lam1 = float(lam[0])
    t_max = 40.0 / lam1

    def q(t: float) -> float:
        return float(np.dot(w, np.exp(-lam * t)))

    # geometric breakpoints resolve the fast modes near t = 0
    t_fast = 1.0 / float(lam[-1])
    edges = [0.0]
    t = t_fast
    while t < t_max:
        edges.append(t)
        t *= 4.0
    edges.append(t_max)
    pieces = []
    for a, b in zip(edges, edges[1:]):
        val, _err = integrate.quad(q, a, b, epsabs=1e-15, epsrel=1e-13, limit=200)
        pieces.append(val)
    tail = math.fsum(w * np.exp(-lam * t_max) / lam)
    total = math.fsum(pieces) + tail
    T = torsion_spectral(r, cutoff, coeff_source).value
    return MomentIdentity(total, T, abs(total - T))


@dataclass(frozen=True)
class HeatComparison:
    curve_a: HeatCurve
    curve_b: HeatCurve
    diff: np.ndarray
    truncation: np.ndarray

    @property
    def times(self) -> np.ndarray:
        return self.curve_a.times

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "Q_a", "Q_b", "diff"])
        for t, qa, qb, d in zip(self.times, self.curve_a.values, self.curve_b.values, self.diff):
            w.writerow([f"{t:.17g}", f"{qa:.17g}", f"{qb:.17g}", f"{d:.17g}"])
        return buf.getvalue()


def heat_difference_curve(
    a: Region | Shape | str, b: Region | Shape | str, times, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact"
) -> HeatComparison:
    """``Q_a(t)``, ``Q_b(t)`` and ``Q_a - Q_b``, with the summed truncation bounds."""
    ca = heat_curve(a, times, cutoff, coeff_source)
    cb = heat_curve(b, times, cutoff, coeff_source)
    trunc = truncation_bound(a, ca.times, cutoff, coeff_source) + truncation_bound(
        b, ca.times, cutoff, coeff_source
    )
    return HeatComparison(ca, cb, ca.values - cb.values, np.atleast_1d(trunc))


__all__ = [
    "HeatComparison",
    "HeatCurve",
    "MomentIdentity",
    "as_region",
    "heat_content",
    "heat_curve",
    "heat_difference_curve",
    "heat_moment_identity",
    "truncation_bound",
]
