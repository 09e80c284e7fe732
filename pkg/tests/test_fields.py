"""Canonical coordinates, heights and unit normalization over Q and Q(i)."""

import random
from fractions import Fraction

import pytest

from ruledcount import (
    QI,
    QQ,
    ProjectivePoint,
    RingElement,
    ZeroElementError,
    ZeroVectorError,
    DimensionMismatchError,
    canonicalize,
    format_point,
    height,
    local_norms,
    parse_element,
    parse_point,
    ring_divmod,
    ring_gcd,
    sup_norm,
    unit_canonicalize,
)


def gauss(rng, bound=50):
    return RingElement(rng.randint(-bound, bound), rng.randint(-bound, bound))


# -- canonicalize ------------------------------------------------------------


def test_canonicalize_gcd_division():
    assert format_point(canonicalize([2, 4, 6], QQ)) == "[1:2:3]"


def test_canonicalize_leading_sign():
    assert format_point(canonicalize([-3, 6], QQ)) == "[1:-2]"


def test_canonicalize_first_nonzero_governs():
    assert format_point(canonicalize([0, 5, 10], QQ)) == "[0:1:2]"


def test_canonicalize_gaussian_gcd_then_unit():
    # gcd(1-i, 2) = 1-i, so division gives [1:1+i]; the first coordinate is
    # already in the canonical quadrant. Oracle below checks uniqueness.
    P = canonicalize([RingElement(1, -1), RingElement(2)], QI)
    assert format_point(P) == "[1:1+i]"

    # brute force over all four unit multiples after gcd removal: exactly one
    # candidate has its first nonzero coordinate with Re > 0, Im >= 0
    reduced = (RingElement(1), RingElement(1, 1))
    candidates = []
    for u in QI.units():
        vec = tuple(u * x for x in reduced)
        lead = next(x for x in vec if not x.is_zero())
        if lead.a > 0 and lead.b >= 0:
            candidates.append(vec)
    assert len(candidates) == 1
    assert candidates[0] == P.coords


def test_canonicalize_errors():
    with pytest.raises(ZeroVectorError):
        canonicalize([0, 0, 0], QQ)
    with pytest.raises(DimensionMismatchError):
        canonicalize([5], QQ)


def test_canonicalize_accepts_fractions():
    P = canonicalize([Fraction(1, 2), Fraction(3, 4)], QQ)
    assert format_point(P) == "[2:3]"


def test_scaling_invariance_rational():
    rng = random.Random(1001)
    for _ in range(1000):
        m = rng.randint(2, 5)
        v = [rng.randint(-40, 40) for _ in range(m)]
        if all(x == 0 for x in v):
            continue
        lam = Fraction(rng.choice([x for x in range(-9, 10) if x]),
                       rng.randint(1, 9))
        assert canonicalize([lam * x for x in v], QQ) == canonicalize(v, QQ)


def test_scaling_invariance_gaussian():
    rng = random.Random(1002)
    for _ in range(1000):
        m = rng.randint(2, 4)
        v = [gauss(rng, 20) for _ in range(m)]
        if all(x.is_zero() for x in v):
            continue
        lam = gauss(rng, 6)
        if lam.is_zero():
            lam = RingElement(1, 1)
        scaled = [lam * x for x in v]
        assert canonicalize(scaled, QI) == canonicalize(v, QI)


def test_canonicalize_idempotent():
    rng = random.Random(1003)
    for ctx in (QQ, QI):
        for _ in range(200):
            v = [gauss(rng, 30) if ctx.imaginary else
                 RingElement(rng.randint(-30, 30)) for _ in range(3)]
            if all(x.is_zero() for x in v):
                continue
            P = canonicalize(v, ctx)
            assert canonicalize(P.coords, ctx) == P


# -- heights and norms -------------------------------------------------------


def test_height_identity_case():
    assert height(canonicalize([1, 0], QQ)) == 1


def test_height_max_abs():
    assert height(canonicalize([1, 2, 3], QQ)) == 3


def test_height_gaussian_after_canonicalization():
    # (1+i) divides 2, so [1+i:2] canonicalizes to [1:1-i]; the finite place
    # at 1+i contributes 1/2 and the true height is 4 * (1/2) = 2.
    P = canonicalize([RingElement(1, 1), RingElement(2)], QI)
    assert format_point(P) == "[1:1-i]"
    assert height(P) == 2


def test_height_gaussian_coprime():
    P = canonicalize([RingElement(1, 1), RingElement(0, 3)], QI)
    assert height(P) == max(RingElement(1, 1).norm(), RingElement(0, 3).norm()) == 9


def test_height_well_defined_under_scaling():
    rng = random.Random(1004)
    for _ in range(300):
        v = [rng.randint(-50, 50) for _ in range(4)]
        if all(x == 0 for x in v):
            continue
        lam = rng.choice([x for x in range(-7, 8) if x])
        assert height(canonicalize([lam * x for x in v], QQ)) == height(
            canonicalize(v, QQ)
        )


def test_height_one_iff_units():
    rng = random.Random(1005)
    for ctx in (QQ, QI):
        for _ in range(300):
            v = [gauss(rng, 4) if ctx.imaginary else
                 RingElement(rng.randint(-4, 4)) for _ in range(3)]
            if all(x.is_zero() for x in v):
                continue
            P = canonicalize(v, ctx)
            h = height(P)
            assert h >= 1
            units_only = all(x.is_zero() or x.is_unit() for x in P.coords)
            assert (h == 1) == units_only


def test_local_norms_examples():
    assert local_norms([RingElement(3), RingElement(-4)], QQ) == [4]
    assert local_norms([RingElement(1, 1), RingElement(1)], QI) == [2]
    with pytest.raises(ZeroVectorError):
        local_norms([RingElement(0), RingElement(0)], QQ)


def test_local_norms_length_is_place_count():
    assert len(local_norms([RingElement(2), RingElement(1)], QQ)) == sum(QQ.signature)
    assert len(local_norms([RingElement(2), RingElement(1)], QI)) == sum(QI.signature)


def test_sup_norm_examples():
    assert sup_norm([RingElement(1), RingElement(1)], QQ) == 1
    assert sup_norm([RingElement(2), RingElement(-5), RingElement(3)], QQ) == 5
    assert sup_norm([RingElement(3, 4), RingElement(1)], QI) == 25


def test_sup_norm_matches_height_on_canonical_points():
    rng = random.Random(1006)
    for ctx in (QQ, QI):
        for _ in range(200):
            v = [gauss(rng, 25) if ctx.imaginary else
                 RingElement(rng.randint(-25, 25)) for _ in range(3)]
            if all(x.is_zero() for x in v):
                continue
            P = canonicalize(v, ctx)
            assert sup_norm(P.coords, ctx) == height(P)


# -- units and ring arithmetic ------------------------------------------------


def test_unit_canonicalize_rational():
    x, u = unit_canonicalize(RingElement(-7), QQ)
    assert (x, u) == (RingElement(7), RingElement(-1))


def test_unit_canonicalize_gaussian_examples():
    x, u = unit_canonicalize(RingElement(1, -1), QI)
    assert x == RingElement(1, 1) and u == RingElement(0, 1)
    x, u = unit_canonicalize(RingElement(0, 5), QI)
    assert x == RingElement(5) and u == RingElement(0, -1)


def test_unit_canonicalize_unique_and_idempotent():
    rng = random.Random(1007)
    for _ in range(500):
        x = gauss(rng, 30)
        if x.is_zero():
            continue
        y, u = unit_canonicalize(x, QI)
        assert u * x == y
        # exactly one of the four unit multiples is canonical
        hits = [v for v in QI.units()
                if (v * x).a > 0 and (v * x).b >= 0]
        assert len(hits) == 1 and hits[0] * x == y
        again, u2 = unit_canonicalize(y, QI)
        assert again == y and u2 == RingElement(1)
    with pytest.raises(ZeroElementError):
        unit_canonicalize(RingElement(0), QI)


def test_norm_multiplicative():
    rng = random.Random(1008)
    for _ in range(1000):
        x, y = gauss(rng), gauss(rng)
        assert (x * y).norm() == x.norm() * y.norm()


def test_norm_zero_iff_zero():
    assert RingElement(0, 0).norm() == 0
    rng = random.Random(1009)
    for _ in range(200):
        x = gauss(rng)
        assert (x.norm() == 0) == x.is_zero()


def test_ring_divmod_remainder_small():
    rng = random.Random(1010)
    for _ in range(500):
        x, y = gauss(rng), gauss(rng, 20)
        if y.is_zero():
            continue
        q, r = ring_divmod(x, y)
        assert q * y + r == x
        assert 2 * r.norm() <= y.norm()


def test_ring_gcd_divides_both():
    rng = random.Random(1011)
    for _ in range(500):
        x, y = gauss(rng, 40), gauss(rng, 40)
        if x.is_zero() and y.is_zero():
            continue
        g = ring_gcd(x, y)
        for z in (x, y):
            _, r = ring_divmod(z, g)
            assert r.is_zero()


def test_exactness_types():
    # counting-path values are plain ints, never floats
    P = canonicalize([RingElement(3, 4), RingElement(2, -1)], QI)
    assert isinstance(height(P), int)
    assert isinstance(sup_norm(P.coords, QI), int)
    assert all(isinstance(x.a, int) and isinstance(x.b, int) for x in P.coords)


# -- parsing and formatting ----------------------------------------------------


def test_parse_point_roundtrip():
    for text, ctx in (("[1:2:3]", QQ), ("[0:1:-2]", QQ), ("[1+i:2:0]", QI),
                      ("[i:1]", QI), ("[3-2i:-i]", QI)):
        P = parse_point(text, ctx)
        assert parse_point(format_point(P), ctx) == P


def test_parse_element_forms():
    assert parse_element("-12", QQ) == Fraction(-12)
    assert parse_element("3/4", QQ) == Fraction(3, 4)
    assert parse_element("i", QI) == RingElement(0, 1)
    assert parse_element("-i", QI) == RingElement(0, -1)
    assert parse_element("2i", QI) == RingElement(0, 2)
    assert parse_element("3-i", QI) == RingElement(3, -1)
    assert parse_element("-2+5i", QI) == RingElement(-2, 5)


def test_field_context_invariants():
    for ctx in (QQ, QI):
        r1, r2 = ctx.signature
        assert ctx.degree == r1 + 2 * r2
        assert len(ctx.units()) == ctx.unit_count
