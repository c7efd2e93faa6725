"""Exact-rational geometry of pseudo-walls in the (s, t) half-plane.

A destabilizing class v1 = (r1, d1, a1) against v = (r, d, a) cuts out either
a vertical line (when r1 d = r d1) or a semicircle with center (alpha, 0):

    alpha  = (r a1 - r1 a) / (2n (r d1 - r1 d))
    rho^2  = alpha^2 - (a1 d - a d1) / (n (r d1 - r1 d))

The semicircle meets the t-axis at height t with

    t^2 = (a1 d - a d1) / (n (r1 d - r d1)) = k / (n m),

writing m = r1 d - r d1 and k = a1 d - a d1.  The wall cut out by the shifted
structure sheaf meets the t-axis at t^2 = 1/n, so a wall sits at/above that
one iff k >= m (for m > 0).  All quantities are Fractions; no floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .lattice import DomainError, K3Context, MukaiVector


class WallComparisonError(DomainError):
    """Vertical walls do not take part in the height ordering."""


@dataclass(frozen=True)
class Wall:
    """A pseudo-wall: semicircle (center, radius_sq) or vertical line (s0)."""

    kind: str  # "semicircle" | "vertical"
    center: Optional[Fraction] = None
    radius_sq: Optional[Fraction] = None
    s0: Optional[Fraction] = None

    @property
    def is_vertical(self) -> bool:
        return self.kind == "vertical"

    def height_sq(self) -> Fraction:
        """t^2 at s = 0; negative when the semicircle misses the t-axis."""
        if self.is_vertical:
            raise WallComparisonError("vertical walls have no t-axis height")
        return self.radius_sq - self.center * self.center


def wall_between(ctx: K3Context, v: MukaiVector, v1: MukaiVector) -> Wall:
    """The pseudo-wall where v and v1 have equal slope, as exact data."""
    n = ctx.n
    r, d, a = v
    r1, d1, a1 = v1
    m = r1 * d - r * d1
    if m == 0:
        den = r1 * a - r * a1
        if den == 0:
            raise DomainError(f"{v.as_tuple()} and {v1.as_tuple()} are proportional: degenerate wall")
        return Wall(kind="vertical", s0=Fraction(a * d1 - a1 * d, den))
    k = a1 * d - a * d1
    alpha = Fraction(r * a1 - r1 * a, 2 * n * (-m))
    rho_sq = alpha * alpha - Fraction(k, n * (-m))
    wall = Wall(kind="semicircle", center=alpha, radius_sq=rho_sq)
    # Consistency with the circle equation t^2 + s^2 - 2*alpha*s = -2*alpha*d/r + a/(r*n):
    # an algebraic identity for r != 0, asserted here to guard against sign slips.
    if r != 0:
        assert wall.height_sq() == Fraction(a, r * n) - 2 * alpha * Fraction(d, r)
    return wall


def height_at_s_zero_sq(ctx: K3Context, v: MukaiVector, v1: MukaiVector) -> Fraction:
    """t^2 where the wall crosses s = 0; positive iff it actually crosses."""
    m = v1.r * v.d - v.r * v1.d
    if m == 0:
        raise WallComparisonError("vertical wall: no s = 0 crossing height")
    k = v1.a * v.d - v.a * v1.d
    return Fraction(k, ctx.n * m)


def ox1_wall_height_sq(ctx: K3Context) -> Fraction:
    """t^2 of the shifted-structure-sheaf wall: 2/H^2 = 1/n."""
    return Fraction(1, ctx.n)


def is_at_or_above_ox1(ctx: K3Context, v: MukaiVector, v1: MukaiVector) -> str:
    """'above' / 'equal' / 'below' the shifted-structure-sheaf wall.

    Decided by comparing k = a1 d - a d1 against m = r1 d - r d1; requires the
    wall of v1 to cross s = 0.
    """
    h = height_at_s_zero_sq(ctx, v, v1)
    if h <= 0:
        raise DomainError(f"wall of {v1.as_tuple()} does not cross s = 0 (height^2 = {h})")
    ref = ox1_wall_height_sq(ctx)
    if h > ref:
        return "above"
    if h == ref:
        return "equal"
    return "below"


def compare_walls(ctx: K3Context, v: MukaiVector, v1: MukaiVector, v2: MukaiVector) -> int:
    """Order two walls of v: +1 / 0 / -1 as wall(v1) is higher / same / lower.

    Semicircles are ordered by t-axis height; equal heights force the same
    circle (the center is determined by the height for r != 0), which is
    asserted.  Two vertical walls compare by s-coordinate for diagnostic use;
    mixing a vertical wall with a semicircle raises.
    """
    w1 = wall_between(ctx, v, v1)
    w2 = wall_between(ctx, v, v2)
    if w1.is_vertical != w2.is_vertical:
        raise WallComparisonError("cannot order a vertical wall against a semicircle")
    if w1.is_vertical:
        return (w1.s0 > w2.s0) - (w1.s0 < w2.s0)
    h1, h2 = w1.height_sq(), w2.height_sq()
    if h1 == h2:
        assert (w1.center, w1.radius_sq) == (w2.center, w2.radius_sq)
        return 0
    return 1 if h1 > h2 else -1


def wall_record(ctx: K3Context, v: MukaiVector, v1: MukaiVector) -> dict:
    """Flat record of one wall for CSV/JSON dumps."""
    wall = wall_between(ctx, v, v1)
    if wall.is_vertical:
        raise DomainError("vertical walls are not dumped: no height data")
    h = wall.height_sq()
    return {
        "r1": v1.r,
        "d1": v1.d,
        "a1": v1.a,
        "alpha_num": wall.center.numerator,
        "alpha_den": wall.center.denominator,
        "rho_sq_num": wall.radius_sq.numerator,
        "rho_sq_den": wall.radius_sq.denominator,
        "height_sq_num": h.numerator,
        "height_sq_den": h.denominator,
    }
