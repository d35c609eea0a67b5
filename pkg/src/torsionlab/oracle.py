"""Finite-difference reference solution of ``-Laplace(u) = 1``, ``u = 0`` on the boundary.

Independent of every series in the package: the torsional rigidity is
obtained by integrating a five-point-stencil solution over a uniform mesh.

Meshes have ``N`` subdivisions per unit length. For the triangle the mesh is
square and aligned with the hypotenuse, so nodes with ``i + j = n`` sit
exactly on ``x + y = L`` and carry the zero boundary value without any
staircase error.

The linear system is solved by conjugate gradients preconditioned with one
geometric multigrid V-cycle (red-black Gauss-Seidel, full weighting,
bilinear interpolation, sparse LU on the coarsest grid). The grid kernels
come from :mod:`torsionlab._backend`.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from . import _backend
from .geometry import Shape, parse_shape

SOLVER_RTOL = 1e-10
MAX_SUBDIVISIONS = 4096


class OracleConvergenceError(ArithmeticError):
    """The Poisson solver did not reach its residual target."""


@dataclass(frozen=True)
class GridField:
    """Discrete torsion function on a uniform mesh.

    ``values`` holds every node, ``(nx + 1, ny + 1)``; boundary and exterior
    nodes are zero.
    """

    shape: Shape
    N: int
    nx: int
    ny: int
    hx: float
    hy: float
    values: np.ndarray
    residual_norm: float
    iterations: int

    @property
    def h(self) -> float:
        return self.hx

    @property
    def interior(self) -> np.ndarray:
        jmax = _jmax(self.shape, self.nx, self.ny)
        i = np.arange(self.nx + 1)[:, None]
        j = np.arange(self.ny + 1)[None, :]
        return (i >= 1) & (i <= self.nx - 1) & (j >= 1) & (j <= jmax[:, None])

    def torsion(self) -> float:
        # rectangle rule; boundary values vanish so this is second order
        return self.hx * self.hy * math.fsum(self.values.ravel())

    def value_at(self, x: float, y: float) -> float:
        i, j = x / self.hx, y / self.hy
        ii, jj = int(round(i)), int(round(j))
        if abs(i - ii) > 1e-9 or abs(j - jj) > 1e-9:
            raise ValueError(f"({x}, {y}) is not a mesh node")
        return float(self.values[ii, jj])

    def to_text(self) -> str:
        """Text dump: header ``shape N h``, then one mesh row (fixed ``i``) per line."""
        buf = io.StringIO()
        buf.write(f"{self.shape.literal()} {self.N} {self.hx:.17g}\n")
        for row in self.values:
            buf.write(" ".join(f"{v:.17g}" for v in row))
            buf.write("\n")
        return buf.getvalue()


def read_field_text(text: str) -> tuple[Shape, int, float, np.ndarray]:
    lines = text.strip().splitlines()
    lit, N, h = lines[0].split()
    values = np.array([[float(v) for v in ln.split()] for ln in lines[1:]])
    return parse_shape(lit), int(N), float(h), values


def grid_dims(shape: Shape, N: int) -> tuple[int, int]:
    nx = max(2, int(round(N * shape.length)))
    if shape.is_rect:
        return nx, max(2, int(round(N * shape.height)))
    return nx, nx


def _jmax(shape: Shape, nx: int, ny: int) -> np.ndarray:
    jmax = np.zeros(nx + 1, dtype=np.intp)
    i = np.arange(1, nx)
    if shape.is_rect:
        jmax[1:nx] = ny - 1
    else:
        jmax[1:nx] = nx - 1 - i
    return jmax


@dataclass
class _Level:
    nx: int
    ny: int
    cx: float
    cy: float
    jmax: np.ndarray
    lu: object = None
    index: np.ndarray | None = None
    work: dict = field(default_factory=dict)

    def zeros(self) -> np.ndarray:
        return np.zeros((self.nx + 1, self.ny + 1))


def _coarse_factor(level: _Level) -> None:
    i_idx, j_idx = [], []
    for i in range(1, level.nx):
        for j in range(1, level.jmax[i] + 1):
            i_idx.append(i)
            j_idx.append(j)
    i_idx = np.array(i_idx, dtype=np.intp)
    j_idx = np.array(j_idx, dtype=np.intp)
    number = -np.ones((level.nx + 1, level.ny + 1), dtype=np.intp)
    number[i_idx, j_idx] = np.arange(len(i_idx))
    rows, cols, vals = [], [], []
    diag = 2.0 * (level.cx + level.cy)
    for p, (i, j) in enumerate(zip(i_idx, j_idx)):
        rows.append(p)
        cols.append(p)
        vals.append(diag)
        for di, dj, c in ((-1, 0, level.cx), (1, 0, level.cx), (0, -1, level.cy), (0, 1, level.cy)):
            q = number[i + di, j + dj]
            if q >= 0:
                rows.append(p)
                cols.append(q)
                vals.append(-c)
    A = sp.csc_matrix((vals, (rows, cols)), shape=(len(i_idx), len(i_idx)))
    level.lu = splu(A)
    level.index = (i_idx, j_idx)


class _Multigrid:
    def __init__(self, shape: Shape, nx: int, ny: int, hx: float, hy: float, kernels):
        self.k = kernels
        self.levels: list[_Level] = []
        while True:
            self.levels.append(_Level(nx, ny, 1.0 / hx**2, 1.0 / hy**2, _jmax(shape, nx, ny)))
            if nx % 2 or ny % 2 or min(nx, ny) < 8:
                break
            nx, ny, hx, hy = nx // 2, ny // 2, 2 * hx, 2 * hy
        _coarse_factor(self.levels[-1])

    def vcycle(self, f: np.ndarray, level: int = 0, pre: int = 2, post: int = 2) -> np.ndarray:
        lv = self.levels[level]
        e = lv.zeros()
        if level == len(self.levels) - 1:
            e[lv.index] = lv.lu.solve(np.ascontiguousarray(f[lv.index]))
            return e
        k = self.k
        k.smooth(e, f, lv.cx, lv.cy, lv.jmax, pre, False)
        r = lv.zeros()
        k.residual(e, f, r, lv.cx, lv.cy, lv.jmax)
        nxt = self.levels[level + 1]
        rc = nxt.zeros()
        k.restrict(r, rc, nxt.jmax)
        ec = self.vcycle(rc, level + 1, pre, post)
        k.prolong_add(ec, e, lv.jmax)
        k.smooth(e, f, lv.cx, lv.cy, lv.jmax, post, True)
        return e


def _solve(shape: Shape, nx: int, ny: int, rtol: float, maxiter: int, kernels):
    if shape.is_rect:
        hx, hy = shape.length / nx, shape.height / ny
    else:
        hx = hy = shape.length / nx
    mg = _Multigrid(shape, nx, ny, hx, hy, kernels)
    top = mg.levels[0]
    jmax, cx, cy = top.jmax, top.cx, top.cy
    k = kernels

    f = top.zeros()
    for i in range(1, nx):
        f[i, 1 : jmax[i] + 1] = 1.0
    bnorm = math.sqrt(k.dot(f, f, jmax))

    x = top.zeros()
    r = f.copy()
    Ap = top.zeros()
    iterations = 0
    relres = math.inf
    for _restart in range(4):
        z = mg.vcycle(r)
        p = z.copy()
        rz = k.dot(r, z, jmax)
        while iterations < maxiter:
            iterations += 1
            k.matvec(p, Ap, cx, cy, jmax)
            alpha = rz / k.dot(p, Ap, jmax)
            x += alpha * p
            r -= alpha * Ap
            if math.sqrt(k.dot(r, r, jmax)) <= 0.25 * rtol * bnorm:
                break
            z = mg.vcycle(r)
            rz_new = k.dot(r, z, jmax)
            p *= rz_new / rz
            p += z
            rz = rz_new
        # recursive residuals drift; check the true one
        k.residual(x, f, r, cx, cy, jmax)
        relres = math.sqrt(k.dot(r, r, jmax)) / bnorm
        if relres <= rtol or iterations >= maxiter:
            break
    if relres > rtol:
        raise OracleConvergenceError(
            f"{shape.literal()} on {nx}x{ny}: relative residual {relres:.3e} after {iterations} iterations"
        )
    return x, hx, hy, relres, iterations


def poisson_solve(
    shape: Shape,
    N: int,
    rtol: float = SOLVER_RTOL,
    maxiter: int = 200,
    backend: str | None = None,
    dims: tuple[int, int] | None = None,
) -> GridField:
    """Five-point solution with ``N`` subdivisions per unit length.

    ``dims`` overrides the mesh size directly (used by the grid-doubling
    driver so that successive meshes halve ``h`` exactly).
    """
    if N < 8:
        raise ValueError(f"need N >= 8, got {N}")
    kernels = _backend.kernels if backend is None else _backend.available()[backend]
    nx, ny = dims if dims is not None else grid_dims(shape, N)
    x, hx, hy, relres, its = _solve(shape, nx, ny, rtol, maxiter, kernels)
    return GridField(shape, N, nx, ny, hx, hy, x, relres, its)


def torsion_fdm(shape: Shape, N: int, **kw) -> float:
    return poisson_solve(shape, N, **kw).torsion()


@dataclass(frozen=True)
class OracleResult:
    value: float
    estimated_error: float
    N_final: int
    converged: bool
    history: tuple[tuple[int, float], ...] = ()

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "estimated_error": self.estimated_error,
            "N_final": self.N_final,
            "converged": self.converged,
        }


def torsion_oracle(
    shape: Shape, tol: float = 1e-5, N0: int = 16, max_subdivisions: int = MAX_SUBDIVISIONS, **kw
) -> OracleResult:
    """Grid doubling with Richardson extrapolation ``(4 T_2N - T_N) / 3``.

    Stops once two successive extrapolants differ by less than ``tol``. If
    the mesh would exceed ``max_subdivisions`` along its longest side the best
    estimate is returned with ``converged=False``.
    """
    if tol < 1e-7:
        raise ValueError(f"tol must be >= 1e-7, got {tol}")
    N = N0
    nx, ny = grid_dims(shape, N)
    T_prev = torsion_fdm(shape, N, dims=(nx, ny), **kw)
    history = [(N, T_prev)]
    R_prev = None
    change = math.inf
    while True:
        if 2 * max(nx, ny) > max_subdivisions:
            best = R_prev if R_prev is not None else T_prev
            return OracleResult(best, change, N, False, tuple(history))
        N, nx, ny = 2 * N, 2 * nx, 2 * ny
        T = torsion_fdm(shape, N, dims=(nx, ny), **kw)
        history.append((N, T))
        R = (4.0 * T - T_prev) / 3.0
        if R_prev is not None:
            change = abs(R - R_prev)
            if change < tol:
                return OracleResult(R, change, N, True, tuple(history))
        R_prev, T_prev = R, T


def observed_order(values: list[float]) -> list[float]:
    """``log2`` ratios of successive differences of a doubling sequence."""
    out = []
    for a, b, c in zip(values, values[1:], values[2:]):
        out.append(math.log2(abs(a - b) / abs(b - c)))
    return out
