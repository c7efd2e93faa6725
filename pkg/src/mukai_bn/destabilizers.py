"""Enumerate candidate destabilizing classes and select the largest wall.

For v = (r, d, a) with d > 0, the candidate set consists of the classes
v1 = (r1, d1, a1) with

    v1^2 = -2e (e = 0 or 1),   d >= d1 > 0,   <v, v1> < v1^2 + 2,
    and (a1 d - a d1) / (r1 d - r d1) > 0.

The square constraint pins r1 a1 = n d1^2 + e, so the fast path walks r1 over
the (positive and negative) divisors of n d1^2 + e.  A dumb box scan
(`brute_force`) re-applies the defining inequalities literally and serves as
the independent oracle for the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .lattice import DomainError, K3Context, MukaiVector, pairing, reflect, square


@dataclass(frozen=True)
class Destabilizer:
    """A candidate class v1 with its derived integers m and k.

    m = r1 d - r d1 and k = a1 d - a d1 share a sign and m != 0; the wall of
    v1 meets the t-axis at t^2 = k/(nm).  epsilon is 1 for spherical v1 and 0
    for isotropic v1.
    """

    v1: MukaiVector
    m: int
    k: int
    epsilon: int

    def height_sq(self, n: int) -> Fraction:
        return Fraction(self.k, n * self.m)

    def record(self) -> dict:
        return {
            "r1": self.v1.r,
            "d1": self.v1.d,
            "a1": self.v1.a,
            "m": self.m,
            "k": self.k,
            "epsilon": self.epsilon,
        }


@dataclass(frozen=True)
class SearchBox:
    """Bounds for the brute-force scan: |r1| <= r1_abs_max, 0 < d1 <= d1_max."""

    r1_abs_max: int
    d1_max: int


@lru_cache(maxsize=None)
def _divisors(x: int) -> tuple[int, ...]:
    """Positive divisors of x > 0, ascending."""
    small, large = [], []
    i = 1
    while i * i <= x:
        if x % i == 0:
            small.append(i)
            if i * i != x:
                large.append(x // i)
        i += 1
    return tuple(small + large[::-1])


@lru_cache(maxsize=None)
def _classes_with_d1(n: int, d1: int) -> tuple[tuple[int, int, int, int], ...]:
    """All (r1, a1, eps) with r1 a1 = n d1^2 + eps, packed as (r1, d1, a1, eps)."""
    out = []
    for eps in (1, 0):
        target = n * d1 * d1 + eps
        for r1 in _divisors(target):
            a1 = target // r1
            out.append((r1, d1, a1, eps))
            out.append((-r1, d1, -a1, eps))
    return tuple(out)


def _check_member(ctx: K3Context, v: MukaiVector, r1: int, d1: int, a1: int, eps: int):
    """Apply the pairing and slope-ratio conditions; return a Destabilizer or None."""
    r, d, a = v
    m = r1 * d - r * d1
    if m == 0:
        return None
    k = a1 * d - a * d1
    if (k > 0) != (m > 0) or k == 0:
        return None
    pv = 2 * ctx.n * d * d1 - r1 * a - r * a1
    if pv >= -2 * eps + 2:
        return None
    return Destabilizer(MukaiVector(r1, d1, a1), m, k, eps)


def _validate_input(ctx: K3Context, v: MukaiVector) -> None:
    if v.d <= 0:
        raise DomainError(f"destabilizer search needs d > 0, got {v.as_tuple()}")
    if square(ctx, v) < -2:
        raise DomainError(f"{v.as_tuple()} has square {square(ctx, v)} < -2: no semistable sheaf")


def find_Dv(ctx: K3Context, v: MukaiVector) -> frozenset[Destabilizer]:
    """The complete candidate set, via divisor-driven enumeration."""
    _validate_input(ctx, v)
    found = []
    for d1 in range(1, v.d + 1):
        for r1, dd1, a1, eps in _classes_with_d1(ctx.n, d1):
            t = _check_member(ctx, v, r1, dd1, a1, eps)
            if t is not None:
                found.append(t)
    return frozenset(found)


def find_DvBN(ctx: K3Context, v: MukaiVector) -> frozenset[Destabilizer]:
    """Members whose wall sits at or above the shifted-structure-sheaf wall.

    That is 0 < m <= k.  Only meaningful for r, a >= 0 (where every member
    already has m > 0).
    """
    if v.r < 0 or v.a < 0:
        raise DomainError(f"BN filtering needs r, a >= 0, got {v.as_tuple()}")
    return frozenset(t for t in find_Dv(ctx, v) if 0 < t.m <= t.k)


def brute_force_Dv(ctx: K3Context, v: MukaiVector, box: SearchBox) -> frozenset[Destabilizer]:
    """Exhaustive oracle: scan the integer box and test the definition literally.

    Any admissible class has |a1| <= n d1^2 + 1 (since |r1 a1| = n d1^2 + eps
    with r1 != 0), so the a1 axis is capped there without loss.
    """
    _validate_input(ctx, v)
    n = ctx.n
    r, d, a = v
    found = []
    for d1 in range(1, min(box.d1_max, d) + 1):
        two_nd1sq = 2 * n * d1 * d1
        a1_cap = n * d1 * d1 + 1
        for r1 in range(-box.r1_abs_max, box.r1_abs_max + 1):
            if r1 == 0:
                continue
            for a1 in range(-a1_cap, a1_cap + 1):
                sq = two_nd1sq - 2 * r1 * a1
                if sq != 0 and sq != -2:
                    continue
                eps = 1 if sq == -2 else 0
                m = r1 * d - r * d1
                if m == 0:
                    continue
                k = a1 * d - a * d1
                if Fraction(k, m) <= 0:
                    continue
                if 2 * n * d * d1 - r1 * a - r * a1 >= sq + 2:
                    continue
                found.append(Destabilizer(MukaiVector(r1, d1, a1), m, k, eps))
    return frozenset(found)


def lemma_box(ctx: K3Context, v: MukaiVector) -> SearchBox:
    """Box guaranteed to contain every member for r, a >= 0: r1 < r, d1 < 2r/n."""
    d1_max = min(v.d, max(2 * v.r // ctx.n + 1, 1))
    return SearchBox(r1_abs_max=max(v.r, 1), d1_max=d1_max)


# ---------------------------------------------------------------------------
# Quotient shapes and selection of the largest totally-semistable wall
# ---------------------------------------------------------------------------

#: shapes the resolution engine knows how to unroll
SHAPE_SHEAF = "sheaf"
SHAPE_TORSION = "torsion"
SHAPE_SHIFTED_STRUCTURE = "shifted-structure"
SHAPE_SHIFTED_LINE_BUNDLE = "shifted-line-bundle"


def quotient_shape(ctx: K3Context, v: MukaiVector, t: Destabilizer):
    """Classify reflect(v, t.v1) into the pattern catalog.

    Returns (tag, params) or None.  Tags: positive-rank sheaf; rank-zero
    torsion; k copies of the shifted structure sheaf, vector k*(-1,0,-1); or
    k copies of a shifted line bundle, vector k*(-1,p,-(n p^2+1)) meaning
    (O(-pH)[1])^k (p may be negative).
    """
    c = -pairing(ctx, v, t.v1)
    if c <= 0:
        return None
    q = reflect(ctx, v, t.v1)
    if q.r > 0:
        return (SHAPE_SHEAF, {}) if q.d > 0 else None
    if q.r == 0:
        return (SHAPE_TORSION, {}) if q.d > 0 else None
    kk = -q.r
    if q.d % kk != 0:
        return None
    p = q.d // kk
    if q.a != -kk * (ctx.n * p * p + 1):
        return None
    if p == 0:
        return (SHAPE_SHIFTED_STRUCTURE, {"k": kk})
    return (SHAPE_SHIFTED_LINE_BUNDLE, {"k": kk, "p": p})


def top_wall_candidates(ctx: K3Context, v: MukaiVector) -> list[Destabilizer]:
    """Members on the highest wall, in tie-break order (d1 then r1 ascending).

    Classes inducing the same t-axis height induce the identical circle, so a
    tie really is one wall realized by several spherical classes.
    """
    members = find_DvBN(ctx, v)
    if not members:
        return []
    top = max(t.height_sq(ctx.n) for t in members)
    tops = [t for t in members if t.height_sq(ctx.n) == top]
    tops.sort(key=lambda t: (t.v1.d, t.v1.r))
    return tops


def largest_tss_wall(ctx: K3Context, v: MukaiVector):
    """The engine's destabilizer of choice on the largest wall, or None.

    Among classes inducing the top wall the one with minimal (d1, r1) whose
    quotient lands in the pattern catalog is preferred; if none does, the
    minimal one is reported anyway.
    """
    tops = top_wall_candidates(ctx, v)
    if not tops:
        return None
    for t in tops:
        if quotient_shape(ctx, v, t) is not None:
            return t
    return tops[0]
