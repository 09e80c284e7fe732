"""Pluecker coordinates, saturated line lattices, and the covolume band."""

import random
from fractions import Fraction
from math import isqrt

import pytest

from ruledcount import (
    QI,
    QQ,
    DegenerateSpanError,
    Line,
    LineLattice,
    RingElement,
    det_height_report,
    format_point,
    lattice_coefficients,
    lattice_determinant,
    line_lattice,
    plucker_height,
    plucker_vector,
    random_lines,
    sqrt_interval,
)


def test_plucker_axes():
    L = Line.from_vectors([1, 0, 0], [0, 1, 0], QQ)
    assert format_point(plucker_vector(L).point) == "[1:0:0]"
    assert plucker_height(L) == 1


def test_plucker_sum_zero_line():
    L = Line.from_vectors([1, -1, 0], [0, 1, -1], QQ)
    assert format_point(plucker_vector(L).point) == "[1:-1:1]"
    assert plucker_height(L) == 1


def test_plucker_basis_change_same_point():
    L1 = Line.from_vectors([1, 0, 0], [0, 1, 0], QQ)
    L2 = Line.from_vectors([1, 0, 0], [2, 1, 0], QQ)
    assert plucker_vector(L1).point == plucker_vector(L2).point


def test_plucker_height_13():
    L = Line.from_vectors([1, 0, 7], [0, 1, -13], QQ)
    assert plucker_height(L) == 13


def test_degenerate_span_rejected():
    with pytest.raises(DegenerateSpanError):
        Line.from_vectors([1, 2, 3], [2, 4, 6], QQ)
    with pytest.raises(DegenerateSpanError):
        Line.from_vectors([0, 0, 0], [1, 2, 3], QQ)


def test_plucker_relations_random():
    for ctx, seed in ((QQ, 21), (QI, 22)):
        for n in (3, 4):
            for L in random_lines(n, 40, 9, seed, ctx):
                assert plucker_vector(L).relations_hold()


def test_plucker_invariant_under_basis_change():
    rng = random.Random(23)
    for L in random_lines(3, 60, 15, 24):
        p = plucker_vector(L).point
        # unimodular change of spanning pair
        while True:
            q11, q12, q21, q22 = (rng.randint(-4, 4) for _ in range(4))
            if abs(q11 * q22 - q12 * q21) == 1:
                break
        a = tuple((q11 * x + q12 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        b = tuple((q21 * x + q22 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        assert plucker_vector(Line(a, b, QQ)).point == p
        # general invertible change (nonzero determinant)
        while True:
            q11, q12, q21, q22 = (rng.randint(-5, 5) for _ in range(4))
            if q11 * q22 - q12 * q21 != 0:
                break
        a = tuple((q11 * x + q12 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        b = tuple((q21 * x + q22 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        assert plucker_vector(Line(a, b, QQ)).point == p


# -- lattices ------------------------------------------------------------------


def _box_vectors_on_line(L, radius):
    """Brute-force saturation oracle: integral vectors on L in a small box."""
    from itertools import product

    m = len(L.span_a)
    out = []
    for vec in product(range(-radius, radius + 1), repeat=m):
        if any(vec) and L.contains_pairs(tuple((x, 0) for x in vec)):
            out.append(tuple((x, 0) for x in vec))
    return out


def test_lattice_sum_zero_line():
    L = Line.from_vectors([1, -1, 0], [0, 1, -1], QQ)
    M = line_lattice(L)
    assert M.det_squared == 3
    assert tuple(sorted(M.gram[0])) in ((-1, 2), (1, 2))
    for vec in _box_vectors_on_line(L, 3):
        assert lattice_coefficients(M, vec) is not None


def test_lattice_axes():
    L = Line.from_vectors([1, 0, 0], [0, 1, 0], QQ)
    M = line_lattice(L)
    assert M.det_squared == 1


def test_lattice_saturation_removes_content():
    L = Line.from_vectors([2, 0, 0], [0, 2, 0], QQ)
    M = line_lattice(L)
    assert M.det_squared == 1
    assert lattice_coefficients(M, ((1, 0), (0, 0), (0, 0))) is not None


def test_lattice_saturation_oracle_random():
    for L in random_lines(2, 25, 6, 31) + random_lines(3, 25, 4, 32):
        M = line_lattice(L)
        members = _box_vectors_on_line(L, 3)
        for vec in members:
            assert lattice_coefficients(M, vec) is not None
        # a vector off the line is never in the lattice
        off = tuple((x + (1 if j == 0 else 0), 0)
                    for j, (x, _) in enumerate(M.ring_basis[0]))
        if not L.contains_pairs(off):
            assert lattice_coefficients(M, off) is None


def test_lattice_saturation_oracle_gaussian():
    for L in random_lines(2, 10, 3, 33, QI):
        M = line_lattice(L)
        from itertools import product

        vals = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]
        for vec in product(vals, repeat=3):
            if any(v != (0, 0) for v in vec) and L.contains_pairs(vec):
                assert lattice_coefficients(M, vec) is not None


def test_lattice_det_invariant_under_span_change():
    rng = random.Random(34)
    for L in random_lines(3, 40, 12, 35):
        d = line_lattice(L).det_squared
        q11, q12, q21, q22 = 1, rng.randint(-3, 3), rng.randint(-3, 3), 1
        q22 += q12 * q21  # keep the change invertible over Q
        if q11 * q22 - q12 * q21 == 0:
            continue
        a = tuple((q11 * x + q12 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        b = tuple((q21 * x + q22 * y, 0)
                  for (x, _), (y, _) in zip(L.span_a, L.span_b))
        assert line_lattice(Line(a, b, QQ)).det_squared == d


def test_lattice_determinant_interval():
    L = Line.from_vectors([1, -1, 0], [0, 1, -1], QQ)
    det2, (lo, hi) = lattice_determinant(line_lattice(L))
    assert det2 == 3
    assert lo * lo <= 3 <= hi * hi
    assert (hi - lo) <= hi * Fraction(1, 2**32)


def test_scaled_basis_determinant():
    # a rank-2 lattice with basis {(2,0,0),(0,2,0)} has covolume 4
    basis = ((2, 0, 0), (0, 2, 0))
    gram = ((4, 0), (0, 4))
    M = LineLattice(QQ, 2, (((2, 0), (0, 0), (0, 0)), ((0, 0), (2, 0), (0, 0))),
                    basis, gram, 16)
    det2, (lo, hi) = lattice_determinant(M)
    assert det2 == 16 and lo <= 4 <= hi


def test_sqrt_interval_certified():
    rng = random.Random(36)
    for _ in range(50):
        x = Fraction(rng.randint(1, 10**6), rng.randint(1, 100))
        lo, hi = sqrt_interval(x)
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= hi * Fraction(1, 2**32)
    assert sqrt_interval(0) == (0, 0)


# -- covolume vs height --------------------------------------------------------


def test_det_band_boundary_attained():
    # sum-zero line: det^2 = 3 = C(3,2) * H^2, the upper edge of the band
    r = det_height_report(Line.from_vectors([1, -1, 0], [0, 1, -1], QQ))
    assert r.in_band and r.det_squared == 3 * r.height**2


def test_det_band_lower_edge():
    r = det_height_report(Line.from_vectors([1, 0, 0], [0, 1, 0], QQ))
    assert r.in_band and r.det_squared == r.height**2 == 1


def test_det_band_random_p3():
    # 1000 random lines in P^3 with entries in [-50, 50]: ratio in [1, sqrt(6)]
    for L in random_lines(3, 1000, 50, 42):
        r = det_height_report(L)
        assert r.in_band
        assert r.height**2 <= r.det_squared <= 6 * r.height**2


def test_det_band_gaussian():
    # over Q(i) the real rank-4 covolume is an integer in [H, C(n+1,2) * H]
    for L in random_lines(2, 60, 6, 43, QI) + random_lines(3, 30, 4, 44, QI):
        r = det_height_report(L)
        detz = isqrt(r.det_squared)
        assert detz * detz == r.det_squared
        nminors = (L.n + 1) * L.n // 2
        assert r.in_band
        assert r.height <= detz <= nminors * r.height


def test_lattice_plucker_consistency():
    # the Pluecker vector of the saturated basis is the canonical one: the
    # lattice construction and the wedge product must tell the same story
    from ruledcount.lines import _minor
    from itertools import combinations
    from ruledcount import canonicalize

    for L in random_lines(3, 50, 20, 45):
        M = line_lattice(L)
        u, w = M.ring_basis
        m = len(u)
        entries = [_minor(u, w, i, j)[0] for i, j in combinations(range(m), 2)]
        assert canonicalize(entries, QQ) == plucker_vector(L).point
