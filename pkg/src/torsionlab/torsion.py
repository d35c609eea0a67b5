"""Torsional rigidity by closed forms and by spectral sums.

``T = sum a_m**2 / lambda_m`` over Dirichlet modes, ``a_m`` the integral of the
normalized eigenfunction. For rectangles the double sum collapses to a
single fast-converging hyperbolic series; for the triangle the printed
closed form is evaluated as published, and the spectral sum is available with
either the printed coefficients or the exactly integrated ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import series
from .geometry import Region, Shape, as_region
from .spectrum import COEFF_SOURCES, mode_table

PI = math.pi

DEFAULT_CUTOFF = 2000

METHODS = ("rect_closed", "tri_closed_paper", "spectral", "oracle", "closed")


@dataclass(frozen=True)
class TorsionResult:
    """A torsional rigidity value with its provenance.

    For ``method="spectral"`` ``tail_bound`` is the contribution of the last
    decade of eigenvalues below the cutoff: a heuristic, not a certificate.
    """

    value: float
    method: str
    tail_bound: float = 0.0
    cutoff: Fraction | None = None
    parts: tuple["TorsionResult", ...] = ()
    certified: bool = True

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "tail": self.tail_bound,
            "cutoff": None if self.cutoff is None else f"{self.cutoff.numerator}/{self.cutoff.denominator}",
        }

    def __float__(self) -> float:
        return self.value


def _positive(*vals: float) -> None:
    for v in vals:
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"dimensions must be positive, got {v}")


def torsion_rect_closed(L: float, H: float) -> TorsionResult:
    """Rectangle ``L x H`` via the odd-index tanh series.

    ``T = 64 H**3 L / pi**6 * (Z_r - (beta / 4) sum_{k odd} k**-5 tanh(k gamma / 2))``
    with ``beta = pi H / L`` and ``gamma = pi L / H``.
    """
    L, H = float(L), float(H)
    _positive(L, H)
    beta = PI * H / L
    gamma = PI * L / H
    s = series.hyper_sum("tanh", "odd", gamma / 2)
    pref = 4**3 * H**3 * L / PI**6
    Z_r = series.zeta_constants().Z_r
    value = pref * (Z_r - 0.25 * beta * s.value)
    return TorsionResult(value, "rect_closed", pref * 0.25 * beta * s.tail_bound)


def tri_closed_bracket() -> tuple[float, float]:
    """The bracket ``tau`` of the printed triangle formula and its tail bound."""
    Z_t = series.zeta_constants().Z_t
    s_tanh = series.hyper_sum("tanh", "all", PI)
    s_coth = series.hyper_sum("coth", "odd", PI / 2)
    tau = Z_t - (PI / 2) / 2**6 * s_tanh.value - (PI / 4) * s_coth.value
    tail = (PI / 2) / 2**6 * s_tanh.tail_bound + (PI / 4) * s_coth.tail_bound
    return tau, tail


def torsion_tri_closed_paper(L: float) -> TorsionResult:
    """Right isosceles triangle, evaluating the printed closed form verbatim.

    ``T = (1/2) (16 L**4 / pi**6) tau``. This reproduces the published value,
    which inherits the printed coefficients; compare with
    :func:`torsion_spectral` using ``coeff_source="exact"``.
    """
    L = float(L)
    _positive(L)
    tau, tail = tri_closed_bracket()
    pref = 0.5 * 4**2 * L**4 / PI**6
    return TorsionResult(pref * tau, "tri_closed_paper", pref * tail)


def torsion_closed(shape: Shape) -> TorsionResult:
    if shape.is_rect:
        return torsion_rect_closed(shape.length, shape.height)
    return torsion_tri_closed_paper(shape.length)


def torsion_region_closed(r: Region | Shape | str) -> TorsionResult:
    """Sum of closed forms over disjoint components."""
    parts = tuple(torsion_closed(s) for s in as_region(r).components)
    if len(parts) == 1:
        return parts[0]
    methods = {p.method for p in parts}
    method = methods.pop() if len(methods) == 1 else "closed"
    return TorsionResult(
        math.fsum(p.value for p in parts), method, math.fsum(p.tail_bound for p in parts), parts=parts
    )


def torsion_spectral(
    r: Region | Shape | str, cutoff=DEFAULT_CUTOFF, coeff_source: str = "exact"
) -> TorsionResult:
    """Partial spectral sum over modes with ``lambda <= cutoff * pi**2``.

    Terms are added with :func:`math.fsum`, which rounds correctly, so the
    value never decreases when the cutoff grows.
    """
    if coeff_source not in COEFF_SOURCES:
        raise ValueError(f"coeff_source must be one of {COEFF_SOURCES}")
    cut = Fraction(cutoff)
    if cut <= 0:
        raise ValueError("cutoff must be positive")
    table = mode_table(r, cut, coeff_source)
    terms = table.weight / table.lam if len(table) else np.zeros(0)
    value = math.fsum(terms)
    last_decade = table.lam > float(cut) * PI**2 / 10
    tail = math.fsum(terms[last_decade])
    return TorsionResult(value, "spectral", tail, cut, certified=False)


# ---------------------------------------------------------------------------
# exact variational lower bound


def _simplex_monomial(a: int, b: int) -> Fraction:
    """``integral x**a y**b`` over ``{x, y >= 0, x + y <= 1}`` = ``a! b! / (a + b + 2)!``."""
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 2))


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            key = (a1 + a2, b1 + b2)
            out[key] = out.get(key, 0) + c1 * c2
    return out


def _poly_integral(p: dict) -> Fraction:
    return sum((Fraction(c) * _simplex_monomial(a, b) for (a, b), c in p.items()), Fraction(0))


def _poly_diff(p: dict, var: int) -> dict:
    out: dict = {}
    for (a, b), c in p.items():
        e = (a, b)[var]
        if e:
            key = (a - 1, b) if var == 0 else (a, b - 1)
            out[key] = out.get(key, 0) + c * e
    return out


def rayleigh_lower_bound(trial: dict | None = None) -> Fraction:
    """Exact ``(int u)**2 / int |grad u|**2`` on the unit right isosceles triangle.

    ``trial`` maps exponent pairs to coefficients and must vanish on the
    boundary; the default is ``x y (1 - x - y)``, for which the bound is 1/160.
    Any admissible trial function gives a lower bound on ``T``.
    """
    if trial is None:
        trial = {(1, 1): 1, (2, 1): -1, (1, 2): -1}
    num = _poly_integral(trial) ** 2
    ux, uy = _poly_diff(trial, 0), _poly_diff(trial, 1)
    den = _poly_integral(_poly_mul(ux, ux)) + _poly_integral(_poly_mul(uy, uy))
    return num / den
