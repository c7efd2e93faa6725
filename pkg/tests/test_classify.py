import random

import pytest

from mukai_bn import (
    DomainError,
    K3Context,
    MukaiVector,
    enumerate_counterexamples,
    euler_char,
    family_matches,
    generic_cohomology,
    match_family,
    minimal_a,
    resolve,
    twist,
    weak_bn,
)


def test_minimal_a():
    assert minimal_a(K3Context(1), 2, 3) == 5
    assert minimal_a(K3Context(2), 3, 4) == 11
    assert minimal_a(K3Context(1), 1, 1) == 2
    with pytest.raises(DomainError):
        minimal_a(K3Context(1), 0, 3)


def test_weak_bn_examples():
    # unique stable bundle pulled back from projective space: fails with h1 = 1
    v = weak_bn(K3Context(3), MukaiVector(4, 5, 19))
    assert (v.wbn, v.h) == (False, (24, 1, 0))
    v = weak_bn(K3Context(1), MukaiVector(2, 3, 4))
    assert (v.wbn, v.h) == (True, (6, 0, 0))
    v = weak_bn(K3Context(1), MukaiVector(5, 3, 2))
    assert (v.wbn, v.h) == (False, (8, 1, 0))
    v = weak_bn(K3Context(1), MukaiVector(13, 8, 5))
    assert (v.wbn, v.h[1]) == (False, 3)
    v = weak_bn(K3Context(2), MukaiVector(17, 12, 17))
    assert (v.wbn, v.h[1]) == (False, 1)


def test_weak_bn_nonpositive_a():
    # chi < 0 leaves only h1; chi >= 0 leaves only h0
    assert weak_bn(K3Context(1), MukaiVector(3, 2, -5)).h == (0, 2, 0)
    assert weak_bn(K3Context(1), MukaiVector(3, 2, -2)).h == (1, 0, 0)
    assert weak_bn(K3Context(2), MukaiVector(0, 3, -4)).h == (0, 4, 0)


def test_weak_bn_domain_errors():
    ctx = K3Context(1)
    with pytest.raises(DomainError):
        weak_bn(ctx, MukaiVector(2, 0, 1))
    with pytest.raises(DomainError):
        weak_bn(ctx, MukaiVector(2, -3, 1))
    with pytest.raises(DomainError):
        weak_bn(ctx, MukaiVector(-1, 2, 1))
    with pytest.raises(DomainError):
        weak_bn(ctx, MukaiVector(4, 6, 11))  # square -16, primitive


def test_weak_bn_spherical_multiples():
    # moduli of g times a spherical class is the polystable power of the
    # unique stable bundle; cohomology scales by g
    ctx = K3Context(1)
    v = weak_bn(ctx, MukaiVector(4, 2, 2))
    assert (v.wbn, v.h) == (True, (6, 0, 0))
    v = weak_bn(ctx, MukaiVector(10, 6, 4))
    assert (v.wbn, v.h) == (False, (16, 2, 0))
    assert v.rule.startswith("polystable-scale:")


def test_generic_cohomology_examples():
    assert generic_cohomology(K3Context(1), MukaiVector(16, 9, 5))[1] == 3
    assert generic_cohomology(K3Context(2), MukaiVector(3, 4, 11))[1] == 1
    # weak Brill-Noether with nonnegative chi gives (chi, 0, 0)
    v = MukaiVector(6, 5, 3)
    verdict = weak_bn(K3Context(1), v)
    if verdict.wbn:
        assert verdict.h == (euler_char(v), 0, 0)


def test_resolve_trees():
    ctx = K3Context(1)
    node = resolve(ctx, MukaiVector(2, 3, 5))
    assert node.kind == "spherical-chain"
    assert node.sub == (MukaiVector(1, 1, 2), 3)
    assert node.quotient == MukaiVector(-1, 0, -1)
    assert node.quotient_tag == "shifted-structure"
    assert node.quotient_params == {"k": 1}

    node = resolve(ctx, MukaiVector(11, 6, 3))
    assert node.sub == (MukaiVector(2, 1, 1), 5)
    assert node.quotient == MukaiVector(1, 1, -2)
    assert node.quotient_tag == "sheaf"
    assert node.children and node.children[0].kind == "leaf-wbn"

    node = resolve(ctx, MukaiVector(13, 8, 5))
    assert node.sub == (MukaiVector(2, 1, 1), 7)
    assert node.quotient == MukaiVector(-1, 1, -2)
    assert node.quotient_tag == "shifted-line-bundle"
    assert node.quotient_params == {"k": 1, "p": 1}

    with pytest.raises(DomainError):
        resolve(ctx, MukaiVector(2, 3, 2))  # nothing at or above the boundary


def test_resolution_invariants():
    # sub multiplicity is minus the pairing, quotient is the reflection
    from mukai_bn import pairing, reflect

    ctx = K3Context(1)
    for v in (MukaiVector(2, 3, 5), MukaiVector(12, 7, 4), MukaiVector(20, 31, 48)):
        node = resolve(ctx, v)
        v1, c = node.sub
        assert c == -pairing(ctx, v, v1)
        assert node.quotient == reflect(ctx, v, v1)


def test_match_family():
    assert match_family(K3Context(4), MukaiVector(5, 6, 29)).family == "1"
    assert match_family(K3Context(4), MukaiVector(5, 6, 29)).h1 == 1
    m = match_family(K3Context(1), MukaiVector(3, 4, 5))
    assert (m.family, m.h1) == ("2", 1)
    assert m.params == {"p": 1, "j": 1, "i": 0}
    m = match_family(K3Context(1), MukaiVector(5, 8, 13))
    assert (m.family, m.h1) == ("sporadic-twist", 3)
    m = match_family(K3Context(1), MukaiVector(13, 18, 25))
    assert (m.family, m.h1) == ("sporadic-twist", 8)
    assert match_family(K3Context(1), MukaiVector(9, 5, 1)) is None


def test_family_claims_consistent():
    # several families can match one vector; their claims must agree
    rng = random.Random(23)
    checked = 0
    for _ in range(600):
        n = rng.randint(1, 4)
        ctx = K3Context(n)
        r, d = rng.randint(2, 12), rng.randint(1, 14)
        hi = (n * d * d + 1) // r
        if hi < 2:
            continue
        v = MukaiVector(r, d, rng.randint(2, hi))
        claims = {m.h1 for m in family_matches(ctx, v)}
        assert len(claims) <= 1
        checked += len(claims)
    assert checked > 40


def test_enumerate_rank3():
    got = [(n, v.as_tuple(), verdict.h[1]) for n, v, verdict in enumerate_counterexamples(3)]
    assert got == [(1, (2, 3, 5), 1), (1, (3, 4, 5), 1), (2, (3, 4, 11), 1)]


def test_enumerate_n_filter():
    only_n2 = enumerate_counterexamples(3, n_filter=2)
    assert [(n, v.as_tuple()) for n, v, _ in only_n2] == [(2, (3, 4, 11))]
    with pytest.raises(DomainError):
        enumerate_counterexamples(1)


def test_monotonicity_small():
    # once weak Brill-Noether holds while descending a, it keeps holding
    ctx = K3Context(1)
    for r, d in ((2, 3), (5, 3), (3, 4), (13, 8)):
        seen_wbn = False
        for a in range(minimal_a(ctx, r, d), -r - 1, -1):
            verdict = weak_bn(ctx, MukaiVector(r, d, a))
            if seen_wbn:
                assert verdict.wbn, (r, d, a)
            seen_wbn = seen_wbn or verdict.wbn


def test_euler_consistency_on_counterexamples():
    for n, v, verdict in enumerate_counterexamples(6):
        h0, h1, h2 = verdict.h
        assert h0 - h1 + h2 == euler_char(v)
        assert h2 == 0
        assert not verdict.wbn and h0 > 0 and h1 > 0


def test_twisted_spherical_chain():
    # twists of the rank-5 extremal vector: the wall route and the twist
    # route cross-check each other inside weak_bn
    ctx = K3Context(1)
    base = MukaiVector(5, 3, 2)
    assert weak_bn(ctx, twist(ctx, base, 1)).h[1] == 3
    assert weak_bn(ctx, twist(ctx, base, 2)).h[1] == 0


def test_enumerate_d_slack_conservative():
    # widening the degree bound can only confirm that nothing lives beyond it
    assert enumerate_counterexamples(12, d_slack=8) == enumerate_counterexamples(12)
