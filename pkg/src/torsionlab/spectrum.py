"""Dirichlet eigenvalues, eigenfunctions and Fourier coefficients.

Eigenvalues are exact: ``lambda = q * pi**2`` with ``q`` a
:class:`~fractions.Fraction`. For a rectangle ``L x H`` the modes are all
pairs ``j, k >= 1`` with ``q = j**2 / L**2 + k**2 / H**2``; for the right
isosceles triangle with leg ``L`` they are pairs ``j < k`` with
``q = (j**2 + k**2) / L**2``. Only squared lengths enter, so a leg of
``sqrt(2)`` is still exact.

The Fourier coefficient of a mode is the integral of its normalized
eigenfunction over the shape. Two triangle variants are exposed:
:func:`tri_coefficient_paper` reproduces the published formula, and
:func:`tri_coefficient_exact` is the integral computed in closed form, which
:func:`tri_coefficient_quadrature` confirms independently.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .geometry import Length, Region, Shape, as_region, parse_length

PI = math.pi
PI2 = PI * PI

COEFF_SOURCES = ("paper", "exact")


class NoExactRepresentation(ValueError):
    """A squared side length is not known as an exact rational."""


class ModeIndex(NamedTuple):
    j: int
    k: int


def _mode(m) -> ModeIndex:
    j, k = m
    j, k = int(j), int(k)
    if j < 1 or k < 1:
        raise ValueError(f"mode indices must be positive, got {(j, k)}")
    return ModeIndex(j, k)


def _exact_sq(value: Length | Fraction, what: str = "length") -> Fraction:
    _, sq = parse_length(value)
    if sq is None:
        raise NoExactRepresentation(
            f"{what} {value!r} has no exact representation; pass an int, "
            "Fraction, decimal string or 'sqrtN'"
        )
    return sq


def _float_len(value: Length) -> float:
    return parse_length(value)[0]


def rect_eigenvalue(L: Length, H: Length, m) -> Fraction:
    """Exact ``lambda / pi**2`` for mode ``m`` of the ``L x H`` rectangle."""
    j, k = _mode(m)
    L2, H2 = _exact_sq(L), _exact_sq(H, "height")
    return j * j / L2 + k * k / H2


def tri_eigenvalue(L: Length, m) -> Fraction:
    """Exact ``lambda / pi**2`` for mode ``m`` (``j < k``) of the triangle with leg ``L``."""
    j, k = _mode(m)
    if j >= k:
        raise ValueError(f"triangle modes need j < k, got {(j, k)}")
    return (j * j + k * k) / _exact_sq(L)


def rect_coefficient(L: Length, H: Length, m) -> float:
    j, k = _mode(m)
    if j % 2 == 0 or k % 2 == 0:
        return 0.0
    return 8.0 * math.sqrt(_float_len(L) * _float_len(H)) / (PI2 * j * k)


def tri_coefficient_paper(L: Length, m) -> float:
    """Published triangle coefficient: ``4 L / (pi**2 j k)`` for opposite parity, else 0."""
    j, k = _mode(m)
    if j >= k:
        raise ValueError(f"triangle modes need j < k, got {(j, k)}")
    if (j + k) % 2 == 0:
        return 0.0
    return 4.0 * _float_len(L) / (PI2 * j * k)


def tri_coefficient_exact(L: Length, m) -> float:
    """Integral of the normalized triangle eigenfunction over the triangle.

    By the ``x <-> y`` symmetry of the triangle both terms of the
    eigenfunction integrate to the same value, which vanishes for
    equal-parity modes. Otherwise, with ``k**2 - j**2 = d``::

        j odd,  k even:   8 L k / (pi**2 j d)
        j even, k odd:   -8 L j / (pi**2 k d)
    """
    j, k = _mode(m)
    if j >= k:
        raise ValueError(f"triangle modes need j < k, got {(j, k)}")
    if (j + k) % 2 == 0:
        return 0.0
    L = _float_len(L)
    d = k * k - j * j
    if j % 2 == 1:
        return 8.0 * L * k / (PI2 * j * d)
    return -8.0 * L * j / (PI2 * k * d)


def eigenfunction_value(shape: Shape, m, x, y):
    """Normalized eigenfunction of ``shape`` for mode ``m``; vectorized over ``x, y``."""
    j, k = _mode(m)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_inside(shape, x, y)
    L = shape.length
    if shape.is_rect:
        H = shape.height
        out = 2.0 / math.sqrt(L * H) * np.sin(j * PI * x / L) * np.sin(k * PI * y / H)
    else:
        if j >= k:
            raise ValueError(f"triangle modes need j < k, got {(j, k)}")
        sign = -1.0 if (j + k) % 2 == 0 else 1.0
        a, b = j * PI / L, k * PI / L
        out = (2.0 / L) * (np.sin(a * x) * np.sin(b * y) + sign * np.sin(b * x) * np.sin(a * y))
    return out[()] if out.ndim == 0 else out


def eigenfunction_laplacian(shape: Shape, m, x, y):
    """Analytic Laplacian of :func:`eigenfunction_value`."""
    j, k = _mode(m)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _check_inside(shape, x, y)
    L = shape.length
    if shape.is_rect:
        H = shape.height
        a, b = j * PI / L, k * PI / H
        out = -(a * a + b * b) * 2.0 / math.sqrt(L * H) * np.sin(a * x) * np.sin(b * y)
    else:
        sign = -1.0 if (j + k) % 2 == 0 else 1.0
        a, b = j * PI / L, k * PI / L
        # each product term sin(ax)sin(by) has Laplacian -(a^2 + b^2) times itself
        out = -(a * a + b * b) * (2.0 / L) * (
            np.sin(a * x) * np.sin(b * y) + sign * np.sin(b * x) * np.sin(a * y)
        )
    return out[()] if out.ndim == 0 else out


def _check_inside(shape: Shape, x: np.ndarray, y: np.ndarray, tol: float = 1e-12) -> None:
    scale = tol * max(shape.length, shape.height or 0.0)
    ok = (x >= -scale) & (y >= -scale)
    if shape.is_rect:
        ok &= (x <= shape.length + scale) & (y <= shape.height + scale)
    else:
        ok &= x + y <= shape.length + scale
    if not np.all(ok):
        raise ValueError(f"point outside {shape.literal()}")


# ---------------------------------------------------------------------------
# quadrature reference for triangle coefficients


@lru_cache(maxsize=8)
def _gauss(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _collapsed_panels(L: float, fun, order: int, panels: int) -> float:
    # Duffy map (u, v) -> (L u, L (1 - u) v) of the unit square onto the triangle
    g, w = _gauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    u = (edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * g[None, :]).ravel()
    wu = np.tile(w, panels) / panels
    U, V = np.meshgrid(u, u, indexing="ij")
    W = np.outer(wu, wu)
    X = L * U
    Y = L * (1.0 - U) * V
    jac = L * L * (1.0 - U)
    return math.fsum((W * jac * fun(X, Y)).ravel())


def tri_coefficient_quadrature(
    L: Length, m, order: int = 40, tol: float = 1e-13, max_panels: int = 64
) -> float:
    """Adaptive tensor Gauss-Legendre integral of the triangle eigenfunction.

    Panels are halved until two successive levels agree to ``tol``.
    """
    if order < 30:
        raise ValueError("quadrature order must be at least 30")
    shape = Shape("tri", _float_len(L))
    mode = _mode(m)

    def fun(X, Y):
        return eigenfunction_value(shape, mode, X, np.minimum(Y, shape.length - X))

    panels = 1
    prev = _collapsed_panels(shape.length, fun, order, panels)
    while panels < max_panels:
        panels *= 2
        cur = _collapsed_panels(shape.length, fun, order, panels)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise ArithmeticError(f"quadrature for mode {tuple(mode)} did not settle to {tol}")


# ---------------------------------------------------------------------------
# enumeration


def _as_bound(bound) -> Fraction:
    q = Fraction(bound) if not isinstance(bound, str) else Fraction(bound.strip())
    if q <= 0:
        raise ValueError(f"bound must be positive, got {bound}")
    return q


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _shape_modes_int(shape: Shape, B: Fraction) -> tuple[int, list[tuple[int, int, int]]]:
    """Modes below ``B`` as ``(den, [(num, j, k), ...])`` with ``q = num / den``."""
    if not shape.exact:
        raise NoExactRepresentation(f"{shape.literal()} has no exact spectrum")
    out: list[tuple[int, int, int]] = []
    if shape.is_rect:
        # q = j^2 b/a + k^2 d/c  for  L^2 = a/b, H^2 = c/d
        a, b = shape.length_sq.numerator, shape.length_sq.denominator
        c, d = shape.height_sq.numerator, shape.height_sq.denominator
        den = a * c
        cap = _floor(B * den)  # j^2 b c + k^2 d a <= cap
        j = 1
        while j * j * b * c + d * a <= cap:
            base = j * j * b * c
            kmax = math.isqrt((cap - base) // (d * a))
            out.extend((base + kk * kk * d * a, j, kk) for kk in range(1, kmax + 1))
            j += 1
        return den, out
    a, b = shape.length_sq.numerator, shape.length_sq.denominator
    cap = _floor(B * a / b)  # j^2 + k^2 <= cap
    k = 2
    while 1 + k * k <= cap:
        jmax = min(k - 1, math.isqrt(cap - k * k))
        out.extend(((jj * jj + k * k) * b, jj, k) for jj in range(1, jmax + 1))
        k += 1
    return a, out


def shape_modes(shape: Shape, bound) -> list[tuple[Fraction, int, int]]:
    """All ``(q, j, k)`` with ``q = lambda / pi**2 <= bound`` for one shape, unsorted."""
    den, modes = _shape_modes_int(shape, _as_bound(bound))
    return [(Fraction(num, den), j, k) for num, j, k in modes]


def _region_modes(r: Region, bound) -> tuple[int, list[tuple[int, int, int, int]]]:
    """Sorted ``(num, shape_index, j, k)`` over a common denominator."""
    B = _as_bound(bound)
    per_shape = [_shape_modes_int(s, B) for s in r.components]
    D = 1
    for den, _ in per_shape:
        D = D * den // math.gcd(D, den)
    entries = []
    for idx, (den, modes) in enumerate(per_shape):
        f = D // den
        entries.extend((num * f, idx, j, k) for num, j, k in modes)
    entries.sort()
    return D, entries


@dataclass(frozen=True)
class SpectrumLine:
    value: Fraction
    mult: int
    modes: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class SpectrumSlice:
    """All eigenvalues ``<= bound * pi**2`` of a region as a sorted multiset."""

    bound: Fraction
    lines: tuple[SpectrumLine, ...] = field(default_factory=tuple)

    def values(self) -> list[Fraction]:
        out = []
        for line in self.lines:
            out.extend([line.value] * line.mult)
        return out

    def counter(self) -> Counter:
        return Counter({line.value: line.mult for line in self.lines})

    def count(self) -> int:
        return sum(line.mult for line in self.lines)

    def to_json(self) -> dict:
        return {
            "bound": _frac_str(self.bound),
            "lines": [
                {
                    "lambda": _frac_str(line.value),
                    "mult": line.mult,
                    "modes": [list(m) for m in line.modes],
                }
                for line in self.lines
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SpectrumSlice":
        return cls(
            Fraction(data["bound"]),
            tuple(
                SpectrumLine(
                    Fraction(d["lambda"]), int(d["mult"]), tuple(tuple(m) for m in d["modes"])
                )
                for d in data["lines"]
            ),
        )


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def enumerate_spectrum(region: Region | Shape | str, bound) -> SpectrumSlice:
    B = _as_bound(bound)
    D, entries = _region_modes(as_region(region), B)
    lines = []
    i = 0
    while i < len(entries):
        num = entries[i][0]
        start = i
        while i < len(entries) and entries[i][0] == num:
            i += 1
        modes = tuple((e[1], e[2], e[3]) for e in entries[start:i])
        lines.append(SpectrumLine(Fraction(num, D), i - start, modes))
    return SpectrumSlice(B, tuple(lines))


@dataclass(frozen=True)
class IsospectralReport:
    equal: bool
    first_mismatch: Fraction | None
    bound: Fraction
    count_a: int
    count_b: int

    def to_json(self) -> dict:
        return {
            "isospectral": self.equal,
            "bound": _frac_str(self.bound),
            "first_mismatch": None if self.first_mismatch is None else _frac_str(self.first_mismatch),
            "count_a": self.count_a,
            "count_b": self.count_b,
        }


def isospectral_check(a, b, bound) -> IsospectralReport:
    """Exact multiset comparison of the two spectra up to ``bound * pi**2``."""
    sa, sb = enumerate_spectrum(a, bound), enumerate_spectrum(b, bound)
    ca, cb = sa.counter(), sb.counter()
    mismatch = None
    for q in sorted(set(ca) | set(cb)):
        if ca.get(q, 0) != cb.get(q, 0):
            mismatch = q
            break
    return IsospectralReport(mismatch is None, mismatch, sa.bound, sa.count(), sb.count())


def first_eigenvalue(region: Region | Shape | str) -> float:
    """Smallest Dirichlet eigenvalue (float, in absolute units)."""
    vals = []
    for s in as_region(region).components:
        if s.is_rect:
            vals.append(PI2 * (1 / s.length**2 + 1 / s.height**2))
        else:
            vals.append(PI2 * 5 / s.length**2)
    return min(vals)


# ---------------------------------------------------------------------------
# numeric mode tables


@dataclass(frozen=True)
class ModeTable:
    """Float view of the modes of a region below a cutoff, sorted by eigenvalue."""

    lam: np.ndarray  # absolute eigenvalues
    coeff: np.ndarray
    shape_index: np.ndarray
    j: np.ndarray
    k: np.ndarray

    @property
    def weight(self) -> np.ndarray:
        return self.coeff * self.coeff

    def __len__(self) -> int:
        return len(self.lam)


def coefficients(shape: Shape, j: np.ndarray, k: np.ndarray, source: str = "exact") -> np.ndarray:
    """Vectorized Fourier coefficients for arrays of mode indices."""
    if source not in COEFF_SOURCES:
        raise ValueError(f"coefficient source must be one of {COEFF_SOURCES}")
    j = np.asarray(j, dtype=float)
    k = np.asarray(k, dtype=float)
    L = shape.length
    if shape.is_rect:
        odd = (j % 2 == 1) & (k % 2 == 1)
        return np.where(odd, 8.0 * math.sqrt(L * shape.height) / (PI2 * j * k), 0.0)
    mixed = (j + k) % 2 == 1
    if source == "paper":
        return np.where(mixed, 4.0 * L / (PI2 * j * k), 0.0)
    d = k * k - j * j
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(j % 2 == 1, 8.0 * L * k / (PI2 * j * d), -8.0 * L * j / (PI2 * k * d))
    return np.where(mixed, val, 0.0)


def mode_table(region: Region | Shape | str, cutoff, source: str = "exact") -> ModeTable:
    """Modes with ``lambda <= cutoff * pi**2``, ordered by ``(lambda, shape, j, k)``.

    The ordering makes the table for a smaller cutoff a prefix of the table
    for a larger one, which keeps partial sums monotone.
    """
    r = as_region(region)
    D, entries = _region_modes(r, cutoff)
    if not entries:
        empty = np.zeros(0)
        return ModeTable(empty, empty, empty.astype(np.intp), empty.astype(np.intp), empty.astype(np.intp))
    arr = np.array(entries, dtype=object)
    q = np.array([e[0] / D for e in entries])
    sidx = arr[:, 1].astype(np.intp)
    jj = arr[:, 2].astype(np.intp)
    kk = arr[:, 3].astype(np.intp)
    coeff = np.zeros(len(q))
    for idx, shape in enumerate(r.components):
        sel = sidx == idx
        coeff[sel] = coefficients(shape, jj[sel], kk[sel], source)
    return ModeTable(q * PI2, coeff, sidx, jj, kk)
