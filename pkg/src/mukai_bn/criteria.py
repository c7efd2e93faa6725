"""Auxiliary numeric criteria: slope stability, local freeness, global
generation, Ulrich classes, twisted cohomology."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .classify import UnknownPatternError, generic_cohomology, weak_bn
from .destabilizers import find_Dv
from .lattice import (
    DomainError,
    K3Context,
    MukaiVector,
    content,
    is_positive,
    square,
    twist,
)


@dataclass(frozen=True)
class GGVerdict:
    """Global-generation answer: yes/no come with a witnessing rule,
    everything else is an honest unknown."""

    status: str  # "yes" | "no" | "unknown"
    rule: str


@dataclass(frozen=True)
class TwistedH1:
    status: str  # "exact" | "unknown"
    value: Optional[int] = None
    lo: Optional[int] = None
    hi: Optional[int] = None


def has_mu_stable(ctx: K3Context, v: MukaiVector) -> bool:
    """Whether the moduli space contains slope-stable sheaves.

    Writing v = (l r0, l d0, a) with gcd(r0, d0) = 1, slope-stables are
    missing exactly when r0 divides n d0^2 + 1 and v^2 < 2 l^2, or when
    r0 does not divide it, v^2 = 0 and v is not primitive.
    """
    if v.r < 1:
        raise DomainError("slope stability needs positive rank")
    g = content(v)
    prim = MukaiVector(v.r // g, v.d // g, v.a // g)
    if not is_positive(ctx, prim):
        raise DomainError(f"{v.as_tuple()}: empty moduli space")
    l = gcd(v.r, abs(v.d)) if v.d != 0 else v.r
    r0, d0 = v.r // l, v.d // l
    sq = square(ctx, v)
    divides = (ctx.n * d0 * d0 + 1) % r0 == 0
    if divides and sq < 2 * l * l:
        return False
    if not divides and sq == 0 and g > 1:
        return False
    return True


def only_non_locally_free(ctx: K3Context, v: MukaiVector) -> bool:
    """Whether every semistable sheaf in the moduli space fails to be locally
    free.  Rank zero is trivially true; in positive rank the three lattice
    patterns are tested."""
    n = ctx.n
    r, d, a = v
    if r == 0:
        return True
    sq = square(ctx, v)
    if sq > 0:
        if r == 1:
            return True  # twisted ideal sheaf of a nonempty subscheme
        if d % r == 0:
            p = d // r
            if a == r * p * p * n - 1:
                return True
    if sq == 0:
        r0 = 1
        while r0 * r0 <= r:
            if r % (r0 * r0) == 0:
                m = r // (r0 * r0)
                if d % (m * r0) == 0:
                    d0 = d // (m * r0)
                    if (
                        a == m * d0 * d0 * n
                        and gcd(r0, abs(d0)) == 1
                        and (n * d0 * d0 + 1) % r0 == 0
                    ):
                        return True
            r0 += 1
    return False


def globally_generated(ctx: K3Context, v: MukaiVector) -> GGVerdict:
    """Decide global generation of the generic sheaf where a criterion applies."""
    n = ctx.n
    r, d, a = v
    if r < 0 or d <= 0 or square(ctx, v) < -2:
        raise DomainError(f"{v.as_tuple()}: outside the d > 0, square >= -2 regime")
    if a <= 0:
        return GGVerdict("no", "sections-bounded-by-rank")
    if a == 1:
        if (r, d, a) == (n * d * d + 1, d, 1):
            return GGVerdict("yes", "quotient-of-trivial-bundle")
        return GGVerdict("no", "a-equals-one")
    if n == 1 and r == 1 and d == 2 and a in (2, 3, 4):
        return GGVerdict("no", "double-cover-twist")
    if r == 0:
        return GGVerdict("yes", "rank-zero")
    if r == 1:
        return GGVerdict("yes", "rank-one")
    if n >= 2 * r:
        return GGVerdict("yes", "n-dominates-twice-rank")
    if d >= r * (2 * r // n) + r and (n > 1 or 2 * d >= 2 * a + r):
        return GGVerdict("yes", "d-dominates-gg")
    try:
        verdict = weak_bn(ctx, v)
    except UnknownPatternError:
        return GGVerdict("unknown", "no-criterion")
    if (
        verdict.wbn
        and not find_Dv(ctx, v)
        and not only_non_locally_free(ctx, MukaiVector(a, d, r))
    ):
        return GGVerdict("yes", "transform-locally-free")
    return GGVerdict("unknown", "no-criterion")


def ulrich_vector(n: int, r: int, m: int) -> Optional[MukaiVector]:
    """The Mukai vector of an Ulrich bundle of rank r with respect to mH,
    when one exists: (r, 3rm/2, r(2 m^2 n - 1)), requiring 2 | rm."""
    if n < 1 or r < 1 or m < 1:
        raise DomainError(f"ulrich_vector needs n, r, m >= 1, got {(n, r, m)}")
    if (r * m) % 2 != 0:
        return None
    return MukaiVector(r, 3 * r * m // 2, r * (2 * m * m * n - 1))


def twisted_h1(ctx: K3Context, v: MukaiVector, p: int) -> TwistedH1:
    """h^1 of the generic sheaf twisted by O(pH), exact where a covered case
    applies, otherwise the tensoring interval with status unknown."""
    if p < 0:
        raise DomainError("twist exponent must be nonnegative")
    if p == 0:
        return TwistedH1("exact", value=generic_cohomology(ctx, v)[1])
    w = twist(ctx, v, p)
    try:
        return TwistedH1("exact", value=weak_bn(ctx, w).h[1])
    except UnknownPatternError as err:
        return TwistedH1("unknown", lo=err.lo, hi=err.hi)
