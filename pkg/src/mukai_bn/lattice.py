"""Exact arithmetic on the algebraic Mukai lattice of a Picard-rank-one K3 surface.

The surface is encoded by a single integer n >= 1 with H^2 = 2n, where H is
the ample generator of the Picard group.  A Mukai vector (r, d, a) stands for
(r, dH, a); the pairing is

    <(r, d, a), (r', d', a')> = 2n d d' - r a' - r' a.

Everything here is pure integer arithmetic.  No floats, ever: wall comparisons
downstream have to be bit-exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class DomainError(ValueError):
    """Input outside the regime where an operation is defined."""


@dataclass(frozen=True)
class K3Context:
    """The surface: Pic = Z H with H^2 = 2n."""

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")


@dataclass(frozen=True, order=True)
class MukaiVector:
    """Integer triple (r, d, a): rank, H-coefficient of c1, degree-4 part."""

    r: int
    d: int
    a: int

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.d + other.d, self.a + other.a)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.d - other.d, self.a - other.a)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, -self.d, -self.a)

    def __mul__(self, c: int) -> "MukaiVector":
        return MukaiVector(c * self.r, c * self.d, c * self.a)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.r
        yield self.d
        yield self.a

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.r, self.d, self.a)


#: v(O_X), the class of the structure sheaf.
STRUCTURE_SHEAF = MukaiVector(1, 0, 1)


def line_bundle(ctx: K3Context, p: int) -> MukaiVector:
    """v(O_X(pH)) = (1, p, n p^2 + 1)."""
    return MukaiVector(1, p, ctx.n * p * p + 1)


def pairing(ctx: K3Context, u: MukaiVector, v: MukaiVector) -> int:
    """Mukai pairing; symmetric, integer bilinear, equals -chi(U, V) for sheaves."""
    return 2 * ctx.n * u.d * v.d - u.r * v.a - v.r * u.a


def square(ctx: K3Context, v: MukaiVector) -> int:
    """v^2 = <v, v> = 2n d^2 - 2 r a."""
    return 2 * ctx.n * v.d * v.d - 2 * v.r * v.a


def euler_char(v: MukaiVector) -> int:
    """chi of a sheaf with this vector: r + a.  Equals -<v, v(O_X)>."""
    return v.r + v.a


def dual(v: MukaiVector) -> MukaiVector:
    """(r, d, a) -> (r, -d, a); an involutive isometry."""
    return MukaiVector(v.r, -v.d, v.a)


def twist(ctx: K3Context, v: MukaiVector, p: int) -> MukaiVector:
    """Multiply by the class of O_X(pH): (r, d + rp, a + 2ndp + r n p^2).

    An isometry; twist(., p) followed by twist(., -p) is the identity.
    """
    n = ctx.n
    return MukaiVector(v.r, v.d + v.r * p, v.a + 2 * n * v.d * p + v.r * n * p * p)


def reflect(ctx: K3Context, v: MukaiVector, u: MukaiVector) -> MukaiVector:
    """Spherical reflection v -> v + <v, u> u.  Requires u^2 = -2."""
    if square(ctx, u) != -2:
        raise DomainError(f"reflection class {u.as_tuple()} is not spherical (square {square(ctx, u)})")
    return v + pairing(ctx, v, u) * u


def is_spherical(ctx: K3Context, v: MukaiVector) -> bool:
    return square(ctx, v) == -2


def is_isotropic(ctx: K3Context, v: MukaiVector) -> bool:
    return square(ctx, v) == 0


def is_primitive(v: MukaiVector) -> bool:
    return gcd(gcd(abs(v.r), abs(v.d)), abs(v.a)) == 1


def is_positive(ctx: K3Context, v: MukaiVector) -> bool:
    """Positivity for primitive vectors with square >= -2.

    Cases: r > 0; or r = 0 with d > 0 and a != 0; or r = d = 0 and a > 0.
    Non-primitive vectors are not positive (their primitive part may be).
    """
    if not is_primitive(v) or square(ctx, v) < -2:
        return False
    if v.r > 0:
        return True
    if v.r == 0 and v.d > 0 and v.a != 0:
        return True
    return v.r == 0 and v.d == 0 and v.a > 0


def content(v: MukaiVector) -> int:
    """gcd of the three components (0 for the zero vector)."""
    return gcd(gcd(abs(v.r), abs(v.d)), abs(v.a))
