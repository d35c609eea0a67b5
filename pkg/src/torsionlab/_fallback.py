"""Pure numpy versions of the grid kernels in ``_kernels.pyx``.

Same signatures and in-place semantics. Interior masks are rebuilt from
``jmax`` and cached, so the per-call cost is a handful of array passes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _masks(shape: tuple[int, int], jmax_bytes: bytes):
    jmax = np.frombuffer(jmax_bytes, dtype=np.intp)
    n0, n1 = shape
    i = np.arange(n0)[:, None]
    j = np.arange(n1)[None, :]
    interior = (i >= 1) & (i <= n0 - 2) & (j >= 1) & (j <= jmax[:, None])
    red = interior & ((i + j) % 2 == 0)
    black = interior & ((i + j) % 2 == 1)
    return interior, red, black


def _get(a: np.ndarray, jmax: np.ndarray):
    return _masks(a.shape, np.ascontiguousarray(jmax, dtype=np.intp).tobytes())


def _apply(u: np.ndarray, cx: float, cy: float) -> np.ndarray:
    out = np.zeros_like(u)
    c = 2.0 * (cx + cy)
    out[1:-1, 1:-1] = (
        c * u[1:-1, 1:-1]
        - cx * (u[:-2, 1:-1] + u[2:, 1:-1])
        - cy * (u[1:-1, :-2] + u[1:-1, 2:])
    )
    return out


def matvec(u, out, cx, cy, jmax):
    interior, _, _ = _get(u, jmax)
    np.copyto(out, _apply(u, cx, cy), where=interior)


def residual(u, f, r, cx, cy, jmax):
    interior, _, _ = _get(u, jmax)
    np.copyto(r, f - _apply(u, cx, cy), where=interior)


def smooth(u, f, cx, cy, jmax, sweeps, reverse):
    _, red, black = _get(u, jmax)
    inv = 1.0 / (2.0 * (cx + cy))
    order = (black, red) if reverse else (red, black)
    for _ in range(sweeps):
        for mask in order:
            new = np.zeros_like(u)
            new[1:-1, 1:-1] = (
                f[1:-1, 1:-1]
                + cx * (u[:-2, 1:-1] + u[2:, 1:-1])
                + cy * (u[1:-1, :-2] + u[1:-1, 2:])
            ) * inv
            np.copyto(u, new, where=mask)


def restrict(rf, rc, jmax_c):
    interior, _, _ = _get(rc, jmax_c)
    full = np.zeros_like(rc)
    c = rf[2:-1:2, 2:-1:2]
    n0, n1 = c.shape
    full[1 : 1 + n0, 1 : 1 + n1] = (
        4.0 * c
        + 2.0
        * (
            rf[1:-2:2, 2:-1:2][:n0, :n1]
            + rf[3::2, 2:-1:2][:n0, :n1]
            + rf[2:-1:2, 1:-2:2][:n0, :n1]
            + rf[2:-1:2, 3::2][:n0, :n1]
        )
        + rf[1:-2:2, 1:-2:2][:n0, :n1]
        + rf[1:-2:2, 3::2][:n0, :n1]
        + rf[3::2, 1:-2:2][:n0, :n1]
        + rf[3::2, 3::2][:n0, :n1]
    ) * 0.0625
    np.copyto(rc, full, where=interior)


def prolong_add(ec, uf, jmax_f):
    interior, _, _ = _get(uf, jmax_f)
    fine = np.zeros_like(uf)
    fine[::2, ::2] = ec
    fine[1::2, ::2] = 0.5 * (ec[:-1, :] + ec[1:, :])
    fine[::2, 1::2] = 0.5 * (ec[:, :-1] + ec[:, 1:])
    fine[1::2, 1::2] = 0.25 * (ec[:-1, :-1] + ec[1:, :-1] + ec[:-1, 1:] + ec[1:, 1:])
    uf += np.where(interior, fine, 0.0)


def dot(a, b, jmax):
    interior, _, _ = _get(a, jmax)
    return float(np.sum(np.where(interior, a * b, 0.0)))
