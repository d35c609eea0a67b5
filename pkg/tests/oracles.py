"""Independent reference computations used to freeze expected values.

Nothing here imports the closed forms under test: sums are brute-forced
(numpy / mpmath) and integrals done by scipy quadrature.
"""

import math

import mpmath
import numpy as np

PI = math.pi


def lorentz_direct(x, parity="all", J=10**6):
    """Direct sum of 1/(1 + j^2 x^2) plus the integral bound on the tail."""
    j = np.arange(1, J + 1, dtype=float)
    if parity == "odd":
        j = j[::2]
    terms = 1.0 / (1.0 + (j * x) ** 2)
    # sum_{j > J} 1/(1 + j^2 x^2) <= integral_J^inf dt / (t^2 x^2) = 1 / (J x^2)
    return math.fsum(terms[::-1]), 1.0 / (J * x * x)


def hyper_mp(kernel, parity, theta, K=4000, dps=30):
    """High-precision truncated hyperbolic sum (tail below 1e-15 at K=4000)."""
    with mpmath.workdps(dps):
        ks = range(1, 2 * K, 2) if parity == "odd" else range(1, K + 1)
        fn = mpmath.tanh if kernel == "tanh" else mpmath.coth
        return float(mpmath.fsum(mpmath.mpf(k) ** -5 * fn(k * mpmath.mpf(theta)) for k in ks))


def lattice_brute(J=2000):
    """Brute-force sums of F(j,k) = 1/(j^2 k^2 (j^2 + k^2)) over j, k <= J."""
    j = np.arange(1, J + 1, dtype=float)
    J2 = j[:, None] ** 2
    K2 = j[None, :] ** 2
    F = 1.0 / (J2 * K2 * (J2 + K2))
    par_j = (np.arange(1, J + 1) % 2)[:, None]
    par_k = (np.arange(1, J + 1) % 2)[None, :]
    S_a = math.fsum(F.ravel())
    S_o = math.fsum(F[(par_j == 1) & (par_k == 1)].ravel())
    S_e = math.fsum(F[(par_j == 0) & (par_k == 0)].ravel())
    S = math.fsum(F[par_j != par_k].ravel())
    # pairs with j > J or k > J: F <= 1/(j^4 k^2) summed twice
    tail = 2 * (PI**2 / 6) / (3 * J**3)
    return {"S_a": S_a, "S_o": S_o, "S_e": S_e, "S": S, "tail": tail}


def rect_torsion_double_series(L, H, J=4001):
    """64 L H / pi^6 * sum_{j,k odd} 1/(j^2 k^2 ((j/L)^2 + (k/H)^2)), truncated."""
    j = np.arange(1, J + 1, 2, dtype=float)
    A = j[:, None] ** 2
    B = j[None, :] ** 2
    terms = 1.0 / (A * B * (A / L**2 + B / H**2))
    s = math.fsum(terms.ravel())
    # omitted pairs have j > J (term <= L^2 / (j^4 k^2)) or k > J (term <= H^2 / (j^2 k^4));
    # sum_{k odd} k^-2 = pi^2/8 and sum_{j odd > J} j^-4 <= 1/(6 J^3)
    tail = (PI**2 / 8) * (L**2 + H**2) / (6 * J**3)
    return 64 * L * H / PI**6 * s, 64 * L * H / PI**6 * tail
