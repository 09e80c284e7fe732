"""Bounded-height enumeration and the dual-route line counts."""

import random

import pytest

from ruledcount import (
    QI,
    QQ,
    InsufficientDataError,
    Line,
    ResourceLimitError,
    count_line_bruteforce,
    count_line_lattice,
    count_line_lattice_raw,
    count_pn,
    enumerate_pn,
    format_point,
    height,
    iroot,
    line_lattice,
    line_min_height,
    line_points_bruteforce,
    line_points_lattice,
    random_lines,
    verify_line_count_bound,
)


def test_p1_height_one_points():
    pts = {format_point(P) for P in enumerate_pn(1, 1, QQ)}
    assert pts == {"[0:1]", "[1:0]", "[1:1]", "[1:-1]"}
    assert count_pn(1, 1, QQ) == 4


def test_p1_gaussian_height_one_points():
    pts = {format_point(P) for P in enumerate_pn(1, 1, QI)}
    assert pts == {"[0:1]", "[1:0]", "[1:1]", "[1:-1]", "[1:i]", "[1:-i]"}
    assert count_pn(1, 1, QI) == 6


def test_p2_height_one():
    assert count_pn(2, 1, QQ) == 13


def test_count_matches_enumeration():
    for n, B, ctx in ((1, 7, QQ), (2, 3, QQ), (1, 4, QI), (2, 2, QI)):
        pts = list(enumerate_pn(n, B, ctx))
        assert len(pts) == count_pn(n, B, ctx)
        assert len({p.coords for p in pts}) == len(pts)  # no duplicates
        assert all(height(p) <= B for p in pts)


def test_counts_nondecreasing_and_eventually_strict():
    prev = 0
    strict = False
    for B in range(1, 9):
        c = count_pn(1, B, QQ)
        assert c >= prev
        strict = strict or c > prev
        prev = c
    assert strict


def test_p1_ratio_band_at_10():
    c = count_pn(1, 10, QQ)
    assert c == 128
    assert 1.0 <= c / 100 <= 1.4


def test_preconditions():
    with pytest.raises(ValueError):
        count_pn(1, 0, QQ)
    with pytest.raises(ValueError):
        count_pn(0, 5, QQ)
    with pytest.raises(ResourceLimitError):
        count_pn(3, 1000, QQ, limit=10**6)


def test_iroot():
    assert iroot(0, 3) == 0
    assert iroot(10**4, 2) == 100
    assert iroot(10**4 - 1, 2) == 99
    for n in (1, 7, 8, 9, 26, 27, 28, 10**6):
        r = iroot(n, 3)
        assert r**3 <= n < (r + 1) ** 3


# -- lines, both routes ---------------------------------------------------------


def test_axes_line_matches_p1():
    L = Line.from_vectors([1, 0, 0], [0, 1, 0], QQ)
    for B in (1, 2, 5, 9):
        assert (
            count_line_bruteforce(L, B)
            == count_line_lattice(L, B)
            == count_pn(1, B, QQ)
        )


def test_sum_zero_line_small():
    L = Line.from_vectors([1, -1, 0], [0, 1, -1], QQ)
    assert count_line_bruteforce(L, 1) == 3
    assert count_line_lattice(L, 1) == 3
    assert line_points_lattice(L, 1) == {(1, -1, 0), (1, 0, -1), (0, 1, -1)}


def test_count_zero_below_minimum():
    L = Line.from_vectors([2, 3, 0], [0, 5, 7], QQ)
    mh = line_min_height(L)
    assert mh == 3
    assert count_line_lattice(L, mh - 1) == 0
    assert count_line_bruteforce(L, mh - 1) == 0
    assert count_line_lattice(L, mh) >= 1


def test_method_agreement_random():
    corpus = random_lines(2, 60, 20, 777) + random_lines(3, 60, 20, 778)
    for L in corpus:
        lat = line_lattice(L)
        for B in (1, 5, 10):
            assert count_line_lattice(L, B, lattice=lat) == count_line_bruteforce(L, B)


def test_method_agreement_points_not_just_counts():
    for L in random_lines(2, 20, 10, 779):
        assert line_points_lattice(L, 8) == line_points_bruteforce(L, 8)


def test_method_agreement_gaussian():
    for L in random_lines(2, 15, 4, 780, QI):
        for B in (1, 2, 5):
            assert count_line_lattice(L, B) == count_line_bruteforce(L, B)
    for L in random_lines(3, 6, 3, 781, QI):
        assert count_line_lattice(L, 2) == count_line_bruteforce(L, 2)


def test_unit_quotient_factor():
    for L in random_lines(2, 25, 8, 782):
        for B in (3, 7):
            raw = count_line_lattice_raw(L, B)
            assert raw == 2 * count_line_lattice(L, B)
    for L in random_lines(2, 10, 3, 783, QI):
        for B in (2, 5):
            raw = count_line_lattice_raw(L, B)
            assert raw == 4 * count_line_lattice(L, B)


def test_line_counts_monotone():
    for L in random_lines(2, 10, 12, 784):
        prev = 0
        for B in (1, 3, 6, 12):
            c = count_line_lattice(L, B)
            assert c >= prev
            prev = c


def test_lattice_resource_limit():
    L = Line.from_vectors([1, 0, 0], [0, 1, 0], QQ)
    with pytest.raises(ResourceLimitError):
        count_line_lattice(L, 10**6, limit=100)


def test_random_lines_deterministic():
    a = random_lines(3, 20, 15, 4242)
    b = random_lines(3, 20, 15, 4242)
    assert [(L.span_a, L.span_b) for L in a] == [(L.span_a, L.span_b) for L in b]


def test_uniform_bound_report():
    corpus = random_lines(3, 30, 30, 4711)
    rep = verify_line_count_bound(corpus, [5, 20])
    assert len(rep.rows) == 60
    assert rep.supremum >= rep.supremum_high
    assert rep.no_degradation
    # exactness: the normalized statistic recomputes from the row
    for row in rep.rows[:10]:
        assert row.normalized * row.bound**2 == (row.count - 1) * row.line_height
    with pytest.raises(InsufficientDataError):
        verify_line_count_bound([], [5])
