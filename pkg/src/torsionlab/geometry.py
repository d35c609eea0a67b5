"""Shape primitives, disjoint-union regions and the Chapman pair.

Only intrinsic dimensions are stored. Every quantity computed downstream
(spectrum, torsion, heat content) is invariant under rigid motions, so a
region is just an ordered list of shapes.

Lengths carry an optional exact square (a :class:`~fractions.Fraction`)
next to their float value. Dirichlet eigenvalues of both primitives depend
only on squared side lengths, so a leg of ``sqrt(2)`` still has an exact
spectrum. Integers, fractions, decimal strings and ``sqrtN`` strings are
exact; non-integer floats are not.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RECT = "rect"
TRI = "tri"

Length = Union[int, float, Fraction, str]


class RegionSyntaxError(ValueError):
    """A region literal could not be parsed."""

    def __init__(self, token: str, reason: str = "") -> None:
        self.token = token
        msg = f"malformed region token {token!r}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


_SQRT_RE = re.compile(r"^sqrt\(?\s*([0-9]+(?:/[0-9]+)?)\s*\)?$")


def parse_length(value: Length) -> tuple[float, Fraction | None]:
    """Return ``(float_value, exact_square_or_None)`` for a length.

    >>> parse_length("sqrt2")
    (1.4142135623730951, Fraction(2, 1))
    >>> parse_length(1.5)
    (1.5, None)
    """
    if isinstance(value, bool):
        raise TypeError("length must be numeric")
    if isinstance(value, int):
        return float(value), Fraction(value) ** 2
    if isinstance(value, Fraction):
        return float(value), value**2
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"length must be finite, got {value}")
        if value.is_integer():
            return value, Fraction(int(value)) ** 2
        return value, None
    if isinstance(value, str):
        text = value.strip().lower().replace("√", "sqrt")
        m = _SQRT_RE.match(text)
        if m:
            sq = Fraction(m.group(1))
            return math.sqrt(sq), sq
        try:
            q = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a length: {value!r}") from None
        return float(q), q**2
    raise TypeError(f"unsupported length type {type(value).__name__}")


@dataclass(frozen=True)
class Shape:
    """A rectangle ``length x height`` or a right isosceles triangle with leg ``length``.

    The triangle is ``{(x, y): 0 <= x <= L, 0 <= y <= L - x}``.
    """

    kind: str
    length: float
    height: float | None = None
    length_sq: Fraction | None = None
    height_sq: Fraction | None = None

    def __post_init__(self) -> None:
        if self.kind not in (RECT, TRI):
            raise ValueError(f"unknown shape kind {self.kind!r}")
        if not self.length > 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.kind == RECT:
            if self.height is None or not self.height > 0:
                raise ValueError(f"rectangle height must be positive, got {self.height}")
        elif self.height is not None:
            raise ValueError("triangles take a single leg length")

    @property
    def is_rect(self) -> bool:
        return self.kind == RECT

    @property
    def exact(self) -> bool:
        if self.kind == RECT:
            return self.length_sq is not None and self.height_sq is not None
        return self.length_sq is not None

    @property
    def exact_area(self) -> Fraction | None:
        if self.kind == TRI:
            return self.length_sq / 2 if self.length_sq is not None else None
        if not self.exact:
            return None
        return _exact_sqrt(self.length_sq * self.height_sq)

    @property
    def area(self) -> float:
        exact = self.exact_area
        if exact is not None:
            return float(exact)
        if self.kind == RECT:
            return self.length * self.height
        return 0.5 * self.length**2

    @property
    def inradius_side(self) -> float:
        """Shortest side; bounds the torsion function by ``side**2 / 8``."""
        if self.kind == RECT:
            return min(self.length, self.height)
        return self.length

    def contains(self, x: float, y: float, tol: float = 1e-12) -> bool:
        if x < -tol or y < -tol:
            return False
        if self.kind == RECT:
            return x <= self.length + tol and y <= self.height + tol
        return x + y <= self.length + tol

    def literal(self) -> str:
        if self.kind == RECT:
            if self.length == self.height and self.length_sq == self.height_sq:
                return f"square:{_fmt_length(self.length, self.length_sq)}"
            return (
                f"rect:{_fmt_length(self.length, self.length_sq)}"
                f"x{_fmt_length(self.height, self.height_sq)}"
            )
        return f"tri:{_fmt_length(self.length, self.length_sq)}"

    def __str__(self) -> str:
        return self.literal()


def _exact_sqrt(q: Fraction) -> Fraction | None:
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _fmt_length(value: float, sq: Fraction | None) -> str:
    if sq is not None:
        q = _exact_sqrt(sq)
        if q is not None:
            return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"
        return f"sqrt{sq.numerator}" if sq.denominator == 1 else f"sqrt{sq.numerator}/{sq.denominator}"
    return repr(value)


def rectangle(length: Length, height: Length) -> Shape:
    L, L2 = parse_length(length)
    H, H2 = parse_length(height)
    return Shape(RECT, L, H, L2, H2)


def square(side: Length) -> Shape:
    return rectangle(side, side)


def triangle(leg: Length) -> Shape:
    L, L2 = parse_length(leg)
    return Shape(TRI, L, None, L2, None)


@dataclass(frozen=True)
class Region:
    """Ordered disjoint union of shapes."""

    components: tuple[Shape, ...]

    def __post_init__(self) -> None:
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a region needs at least one component")
        if not all(isinstance(c, Shape) for c in comps):
            raise TypeError("region components must be Shape instances")
        object.__setattr__(self, "components", comps)

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int) -> Shape:
        return self.components[i]

    def literal(self) -> str:
        return "+".join(c.literal() for c in self.components)

    def __str__(self) -> str:
        return self.literal()


def as_region(obj: Region | Shape | str) -> Region:
    if isinstance(obj, Region):
        return obj
    if isinstance(obj, Shape):
        return Region((obj,))
    if isinstance(obj, str):
        return parse_region(obj)
    raise TypeError(f"cannot make a region from {type(obj).__name__}")


def union(*parts: Region | Shape) -> Region:
    comps: list[Shape] = []
    for p in parts:
        comps.extend(as_region(p).components)
    return Region(tuple(comps))


def area(r: Region | Shape) -> float:
    # components are summed in order so that area(C1) == area(C2) holds exactly
    return math.fsum(c.area for c in as_region(r).components)


def _scale_length(v: float, sq: Fraction | None, s: float, s_sq: Fraction | None):
    new_sq = sq * s_sq if (sq is not None and s_sq is not None) else None
    return v * s, new_sq


def scale_shape(shape: Shape, s: Length) -> Shape:
    sv, s_sq = parse_length(s)
    if not sv > 0:
        raise ValueError(f"scale factor must be positive, got {s}")
    L, L2 = _scale_length(shape.length, shape.length_sq, sv, s_sq)
    if shape.kind == TRI:
        return Shape(TRI, L, None, L2, None)
    H, H2 = _scale_length(shape.height, shape.height_sq, sv, s_sq)
    return Shape(RECT, L, H, L2, H2)


def scale(r: Region | Shape, s: Length) -> Region:
    """Multiply every linear dimension by ``s > 0``.

    ``s`` may be ``"sqrt2"`` to keep exact squared lengths; a non-integer
    float factor drops exactness.
    """
    return Region(tuple(scale_shape(c, s) for c in as_region(r).components))


def chapman_pair() -> tuple[Region, Region]:
    """Return ``(C1, C2)``: ``square(1) + tri(2)`` and ``rect(2, 1) + tri(sqrt 2)``."""
    c1 = Region((square(1), triangle(2)))
    c2 = Region((rectangle(2, 1), triangle("sqrt2")))
    return c1, c2


def parse_shape(token: str) -> Shape:
    tok = token.strip()
    kind, sep, arg = tok.partition(":")
    if not sep or not arg:
        raise RegionSyntaxError(token, "expected kind:dimensions")
    kind = kind.lower()
    try:
        if kind == "square":
            return square(arg)
        if kind in ("rect", "rectangle"):
            parts = arg.lower().split("x")
            if len(parts) != 2:
                raise RegionSyntaxError(token, "rectangles are written rect:LxH")
            return rectangle(parts[0], parts[1])
        if kind in ("tri", "triangle"):
            return triangle(arg)
    except RegionSyntaxError:
        raise
    except (ValueError, TypeError) as exc:
        raise RegionSyntaxError(token, str(exc)) from None
    raise RegionSyntaxError(token, f"unknown shape kind {kind!r}")


def parse_region(text: str) -> Region:
    """Parse ``square:1``, ``rect:2x1``, ``tri:sqrt2`` joined by ``+``."""
    if not text or not text.strip():
        raise RegionSyntaxError(text, "empty region")
    return Region(tuple(parse_shape(tok) for tok in text.split("+")))
