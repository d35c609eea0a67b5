"""Special sums behind the closed-form torsion formulas.

Every truncated infinite sum is returned as a :class:`SeriesValue` carrying a
rigorous bound on the neglected tail. The hyperbolic sums all have the shape
``sum k**-5 * kernel(k * theta)`` with a kernel bounded on the tail, so the
``k**-5`` envelope gives the bound

    sum_{k > K} k**-5 <= integral_K^inf x**-5 dx = 1 / (4 K**4).

All arithmetic is IEEE double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PI = math.pi

#: tail target used to pick the default number of terms
DEFAULT_TAIL = 1e-15

KERNELS = ("tanh", "coth")
PARITIES = ("odd", "all")


@dataclass(frozen=True)
class SeriesValue:
    """A truncated sum with a certified bound on its tail."""

    value: float
    tail_bound: float
    terms_used: int

    def to_json(self) -> dict:
        return {"value": self.value, "tail": self.tail_bound, "terms": self.terms_used}

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class ZetaConstants:
    zeta2: float
    zeta4: float
    zeta5: float
    zeta6: float
    Z_r: float
    Z_t: float
    zeta5_tail: float
    Z_r_product: float
    Z_t_combination: float

    def check(self, rtol: float = 1e-15) -> bool:
        """Closed forms of ``Z_r`` and ``Z_t`` agree with their zeta-product definitions."""
        return (
            abs(self.Z_r - self.Z_r_product) <= rtol * self.Z_r
            and abs(self.Z_t - self.Z_t_combination) <= rtol * self.Z_t
        )


def _envelope_tail(K: int) -> float:
    if K < 2:
        return math.inf
    return 1.0 / (4.0 * float(K - 1) ** 4)


def _kernel(name: str, x: np.ndarray) -> np.ndarray:
    if name == "tanh":
        return np.tanh(x)
    return 1.0 / np.tanh(x)


def _kernel_cap(name: str, K: int, theta: float) -> float:
    # tanh <= 1; coth is decreasing, so coth(K theta) bounds every tail term
    if name == "tanh":
        return 1.0
    return 1.0 / math.tanh(K * theta)


def default_terms(kernel: str, theta: float, tail: float = DEFAULT_TAIL) -> int:
    """Smallest ``K`` whose certified tail bound is below ``tail``."""
    K = int(math.ceil((1.0 / (4.0 * tail)) ** 0.25)) + 1
    while _kernel_cap(kernel, K, theta) * _envelope_tail(K) >= tail:
        K += 1
    return K


def _indices(parity: str, K: int) -> np.ndarray:
    if parity == "odd":
        return np.arange(1, 2 * K, 2, dtype=np.float64)
    return np.arange(1, K + 1, dtype=np.float64)


def hyper_terms(kernel: str, parity: str, theta: float, terms: int) -> np.ndarray:
    """The summands ``k**-5 * kernel(k theta)`` in ascending ``k``."""
    k = _indices(parity, terms)
    return k**-5 * _kernel(kernel, k * theta)


def hyper_sum(
    kernel: str, parity: str, theta: float, terms: int | None = None
) -> SeriesValue:
    """``sum_{k in parity} k**-5 * kernel(k * theta)``.

    ``terms`` counts summands within the parity class. By default it is the
    smallest count whose certified tail is below ``1e-15``.
    """
    if kernel not in KERNELS:
        raise ValueError(f"kernel must be one of {KERNELS}, got {kernel!r}")
    if parity not in PARITIES:
        raise ValueError(f"parity must be one of {PARITIES}, got {parity!r}")
    if not (theta > 0 and math.isfinite(theta)):
        raise ValueError(f"theta must be positive and finite, got {theta}")
    if kernel == "coth" and theta < 0.01:
        raise ValueError(f"coth kernel needs theta >= 0.01, got {theta}")
    K = default_terms(kernel, theta) if terms is None else int(terms)
    if K < 2:
        raise ValueError("need at least two terms")
    # pairwise summation; the test suite checks it against math.fsum
    value = float(np.sum(hyper_terms(kernel, parity, theta, K)))
    tail = _kernel_cap(kernel, K, theta) * _envelope_tail(K)
    return SeriesValue(value, tail, K)


def _x_coth_x_minus_one(z: float) -> float:
    # z coth z - 1, cancellation-free for small z
    if z < 0.1:
        z2 = z * z
        # Taylor coefficients 2^(2n) B_2n / (2n)!
        return z2 * (
            1 / 3
            - z2 * (1 / 45 - z2 * (2 / 945 - z2 * (1 / 4725 - z2 * (2 / 93555))))
        )
    return z / math.tanh(z) - 1.0


def lorentz_sum_all(x: float) -> float:
    """``sum_{j >= 1} 1 / (1 + j**2 x**2) = -1/2 + pi coth(pi / x) / (2 x)``."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    return 0.5 * _x_coth_x_minus_one(PI / x)


def lorentz_sum_odd(x: float) -> float:
    """``sum_{j odd} 1 / (1 + j**2 x**2) = (pi / (4 x)) tanh(pi / (2 x))``."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    return PI / (4.0 * x) * math.tanh(PI / (2.0 * x))


def zeta5_direct(tail: float = DEFAULT_TAIL) -> SeriesValue:
    K = default_terms("tanh", 1.0, tail)
    k = np.arange(1, K + 1, dtype=np.float64)
    return SeriesValue(math.fsum(k**-5), _envelope_tail(K), K)


def zeta_constants() -> ZetaConstants:
    z2 = PI**2 / 6
    z4 = PI**4 / 90
    z6 = PI**6 / 945
    z5 = zeta5_direct()
    Z_r = PI**6 / 768
    Z_t = PI**6 / 960
    Z_r_product = (1 - 1 / 2**4) * (1 - 1 / 2**2) * z4 * z2
    Z_t_combination = ((1 - 1 / 2**6) - (1 - 1 / 2**4) * (1 - 1 / 2**2)) * z4 * z2 + 0.5 * (
        1 - 1 / 2**6
    ) * z6
    return ZetaConstants(
        zeta2=z2,
        zeta4=z4,
        zeta5=z5.value,
        zeta6=z6,
        Z_r=Z_r,
        Z_t=Z_t,
        zeta5_tail=z5.tail_bound,
        Z_r_product=Z_r_product,
        Z_t_combination=Z_t_combination,
    )


@dataclass(frozen=True)
class LatticeSums:
    """Sums of ``F(j, k) = 1 / (j**2 k**2 (j**2 + k**2))`` over lattice subsets.

    ``S_a`` is the full positive lattice, ``S_e`` both indices even, ``S_o``
    both odd and ``S`` the opposite-parity pairs.
    """

    S_a: float
    S_e: float
    S_o: float
    S: float
    tail_bound: float


def lattice_sum_components() -> LatticeSums:
    z = zeta_constants()
    coth_all_pi = hyper_sum("coth", "all", PI)
    coth_odd_pi = hyper_sum("coth", "odd", PI)
    coth_odd_half = hyper_sum("coth", "odd", PI / 2)

    S_a = z.zeta4 * z.zeta2 + 0.5 * z.zeta6 - (PI / 2) * coth_all_pi.value
    S_e = S_a / 2**6
    C = (1 - 1 / 2**4) * (1 - 1 / 2**2) * z.zeta4 * z.zeta2
    S_o = C - (PI / 2) * coth_odd_pi.value + (PI / 4) * coth_odd_half.value
    S = S_a - S_e - S_o
    tail = (PI / 2) * coth_all_pi.tail_bound * (1 + 1 / 2**6) + (PI / 2) * coth_odd_pi.tail_bound + (
        PI / 4
    ) * coth_odd_half.tail_bound
    return LatticeSums(S_a, S_e, S_o, S, tail)


def half_angle_residuals(theta: float) -> tuple[float, float]:
    """Residuals of ``coth(t/2) = coth t + csch t`` and ``tanh(t/2) = coth t - csch t``."""
    coth = 1.0 / math.tanh(theta)
    csch = 1.0 / math.sinh(theta)
    return (
        1.0 / math.tanh(theta / 2) - coth - csch,
        math.tanh(theta / 2) - coth + csch,
    )
