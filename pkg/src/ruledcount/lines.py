"""Lines in P^n: Pluecker coordinates, Pluecker height, saturated lattice model.

A line is a 2-dimensional subspace of K^{n+1}. Its arithmetic data lives in
the rank-2 module M of integral vectors on the line; this module computes a
saturated basis of M by a double-kernel construction, reduces it, and exposes
its Gram determinant together with the canonical Pluecker vector.

All linear algebra here is exact. Vectors are tuples of (a, b) integer pairs
representing a + b*i; the rational field embeds as pairs with b = 0, so one
Euclidean elimination kernel serves both fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt

from .errors import DegenerateSpanError
from .fields import (
    FieldContext,
    ProjectivePoint,
    RingElement,
    _gdivmod,
    _gmul,
    _nearest_div,
    canonicalize,
    height,
)

PairVec = tuple[tuple[int, int], ...]


# ---------------------------------------------------------------------------
# Exact linear algebra on pair vectors
# ---------------------------------------------------------------------------


def _row_submul(row: list, prow: list, q1: int, q2: int) -> None:
    """row -= (q1 + q2*i) * prow, elementwise."""
    for j in range(len(row)):
        a, b = row[j]
        c, d = prow[j]
        row[j] = (a - q1 * c + q2 * d, b - q1 * d - q2 * c)


def _echelon(rows: list[list[tuple[int, int]]], ncols: int) -> int:
    """Euclidean row echelon (in place) over the first ncols columns.

    Row operations are unimodular over Z[i] (swaps, subtracting a ring
    multiple), so the row span is preserved exactly. Returns the rank found
    in the primary columns.
    """
    rank = 0
    nrows = len(rows)
    for col in range(ncols):
        while True:
            piv, pn = -1, 0
            for r in range(rank, nrows):
                a, b = rows[r][col]
                if a or b:
                    nn = a * a + b * b
                    if piv < 0 or nn < pn:
                        piv, pn = r, nn
            if piv < 0:
                break
            if piv != rank:
                rows[rank], rows[piv] = rows[piv], rows[rank]
            pa, pb = rows[rank][col]
            dirty = False
            for r in range(rank + 1, nrows):
                a, b = rows[r][col]
                if a or b:
                    q1, q2, r1, r2 = _gdivmod(a, b, pa, pb)
                    if q1 or q2:
                        _row_submul(rows[r], rows[rank], q1, q2)
                    if r1 or r2:
                        dirty = True
            if not dirty:
                rank += 1
                break
    return rank


def _kernel(mat: list[PairVec], m: int) -> list[PairVec]:
    """Saturated basis of {x in O^m : sum_j x_j * mat_i[j] = 0 for all i}.

    Augmented-echelon method: reduce [mat^T | I_m] by unimodular row
    operations; rows whose primary part vanishes carry a basis of the kernel
    in their identity part. Because the transformation is unimodular, every
    integral solution is an O-combination of the returned vectors (the
    kernel basis is automatically saturated).
    """
    t = len(mat)
    aug: list[list[tuple[int, int]]] = []
    for j in range(m):
        row = [mat[i][j] for i in range(t)] + [(0, 0)] * m
        row[t + j] = (1, 0)
        aug.append(row)
    _echelon(aug, t)
    out = []
    for row in aug:
        if all(row[i] == (0, 0) for i in range(t)):
            out.append(tuple(row[t:]))
    return out


def _hdot(u: PairVec, v: PairVec) -> tuple[int, int]:
    """Hermitian inner product sum u_j * conj(v_j), as a pair."""
    a = b = 0
    for (x1, y1), (x2, y2) in zip(u, v):
        a += x1 * x2 + y1 * y2
        b += y1 * x2 - x1 * y2
    return a, b


def _lagrange_reduce(u: PairVec, w: PairVec) -> tuple[PairVec, PairVec]:
    """Size-reduce a rank-2 basis under the Hermitian form (norms ascending).

    Standard Gauss/Lagrange loop; stops at the first non-improving step, so
    it terminates unconditionally and only ever applies unimodular changes.
    """
    nu = _hdot(u, u)[0]
    nw = _hdot(w, w)[0]
    while True:
        if nw < nu:
            u, w, nu, nw = w, u, nw, nu
        ha, hb = _hdot(w, u)
        q1 = _nearest_div(ha, nu)
        q2 = _nearest_div(hb, nu)
        if q1 == 0 and q2 == 0:
            return u, w
        w2 = tuple(
            (a - q1 * c + q2 * d, b - q1 * d - q2 * c)
            for (a, b), (c, d) in zip(w, u)
        )
        nw2 = _hdot(w2, w2)[0]
        if nw2 >= nw:
            return u, w
        w, nw = w2, nw2


def _int_det(mat: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [row[:] for row in mat]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


def sqrt_interval(x, rel_bits: int = 32) -> tuple[Fraction, Fraction]:
    """Certified rational enclosure of sqrt(x) with relative width <= 2^-rel_bits."""
    frac = Fraction(x)
    if frac < 0:
        raise ValueError("negative argument")
    p, q = frac.numerator, frac.denominator
    if p == 0:
        return Fraction(0), Fraction(0)
    t = 1 << (rel_bits + 8)
    s = isqrt(p * q * t * t)
    return Fraction(s, q * t), Fraction(s + 1, q * t)


# ---------------------------------------------------------------------------
# Lines and Pluecker vectors
# ---------------------------------------------------------------------------


def _to_pairs(vec) -> PairVec:
    out = []
    for x in vec:
        if isinstance(x, RingElement):
            out.append((x.a, x.b))
        elif isinstance(x, int):
            out.append((x, 0))
        elif isinstance(x, tuple) and len(x) == 2:
            out.append((int(x[0]), int(x[1])))
        else:
            raise TypeError(f"unsupported span entry {x!r}")
    return tuple(out)


@dataclass(frozen=True)
class Line:
    """A line in P^n given by two independent integral spanning vectors."""

    span_a: PairVec
    span_b: PairVec
    ctx: FieldContext

    def __post_init__(self) -> None:
        if len(self.span_a) != len(self.span_b):
            raise DegenerateSpanError("spanning vectors of different lengths")
        if len(self.span_a) < 2:
            raise DegenerateSpanError("ambient dimension must be >= 1")
        if not self.ctx.imaginary:
            if any(b for _, b in self.span_a) or any(b for _, b in self.span_b):
                raise ValueError("imaginary span entry over the rational field")
        if all(
            m == (0, 0)
            for m in (_minor(self.span_a, self.span_b, i, j)
                      for i, j in combinations(range(len(self.span_a)), 2))
        ):
            raise DegenerateSpanError("spanning vectors are linearly dependent")

    @classmethod
    def from_vectors(cls, a, b, ctx: FieldContext) -> "Line":
        return cls(_to_pairs(a), _to_pairs(b), ctx)

    @property
    def n(self) -> int:
        return len(self.span_a) - 1

    def contains_pairs(self, vec: PairVec) -> bool:
        """Exact membership test: every 3x3 minor with the span vanishes."""
        m = len(vec)
        for i, j in combinations(range(m), 2):
            pa, pb = _minor(self.span_a, self.span_b, i, j)
            if pa or pb:
                # vec is on the line iff vec wedge span_a wedge span_b = 0;
                # with a nonzero pivot minor it suffices to check the 3x3
                # minors that contain the pivot columns.
                for k in range(m):
                    if k in (i, j):
                        continue
                    s = (0, 0)
                    s = _padd(s, _gmul(*vec[k], *_minor(self.span_a, self.span_b, i, j)))
                    s = _psub(s, _gmul(*vec[i], *_minor(self.span_a, self.span_b, k, j)))
                    s = _padd(s, _gmul(*vec[j], *_minor(self.span_a, self.span_b, k, i)))
                    if s != (0, 0):
                        return False
                return True
        raise DegenerateSpanError("spanning vectors are linearly dependent")

    def __str__(self) -> str:
        def fmt(vec):
            return "[" + ":".join(str(RingElement(a, b)) for a, b in vec) + "]"

        return f"span={fmt(self.span_a)};{fmt(self.span_b)}"


def _minor(u: PairVec, v: PairVec, i: int, j: int) -> tuple[int, int]:
    """2x2 minor u_i v_j - u_j v_i, as a pair."""
    a1, b1 = u[i]
    a2, b2 = v[j]
    a3, b3 = u[j]
    a4, b4 = v[i]
    return (
        a1 * a2 - b1 * b2 - a3 * a4 + b3 * b4,
        a1 * b2 + b1 * a2 - a3 * b4 - b3 * a4,
    )


def _padd(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    return x[0] + y[0], x[1] + y[1]


def _psub(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
    return x[0] - y[0], x[1] - y[1]


@dataclass(frozen=True)
class PluckerVector:
    """Canonical wedge-product coordinates of a line, indexed by pairs i < j."""

    point: ProjectivePoint
    ambient_n: int

    @property
    def entries(self) -> tuple[RingElement, ...]:
        return self.point.coords

    def index_pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(self.ambient_n + 1), 2))

    def relations_hold(self) -> bool:
        """Quadratic consistency: p_ij p_kl - p_ik p_jl + p_il p_jk = 0."""
        idx = {pair: e for pair, e in zip(self.index_pairs(), self.entries)}
        for i, j, k, l in combinations(range(self.ambient_n + 1), 4):
            s = (
                idx[(i, j)] * idx[(k, l)]
                - idx[(i, k)] * idx[(j, l)]
                + idx[(i, l)] * idx[(j, k)]
            )
            if not s.is_zero():
                return False
        return True


def plucker_vector(L: Line) -> PluckerVector:
    """Canonical Pluecker vector of L, invariant under change of spanning pair."""
    m = len(L.span_a)
    entries = [_minor(L.span_a, L.span_b, i, j) for i, j in combinations(range(m), 2)]
    if all(e == (0, 0) for e in entries):
        raise DegenerateSpanError("spanning vectors are linearly dependent")
    point = canonicalize(entries if L.ctx.imaginary else [a for a, _ in entries], L.ctx)
    return PluckerVector(point, m - 1)


def plucker_height(L: Line) -> int:
    """Height of the line: the height of its canonical Pluecker point."""
    return height(plucker_vector(L).point)


# ---------------------------------------------------------------------------
# The saturated lattice model
# ---------------------------------------------------------------------------


def _embed_real(vec: PairVec) -> tuple[int, ...]:
    out = []
    for a, b in vec:
        out.append(a)
        out.append(b)
    return tuple(out)


def _mul_i(vec: PairVec) -> PairVec:
    return tuple((-b, a) for a, b in vec)


@dataclass(frozen=True)
class LineLattice:
    """Saturated module of integral vectors on a line, with Gram data.

    ``ring_basis`` is a reduced O_K-basis (2 vectors); ``basis`` is the
    corresponding Z-basis in the real embedding (2 vectors over Q, 4 over
    Q(i) where coordinates contribute real and imaginary parts).
    ``det_squared`` is the Gram determinant of ``basis``; the covolume of
    the lattice is its square root.
    """

    ctx: FieldContext
    ambient_n: int
    ring_basis: tuple[PairVec, PairVec]
    basis: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    det_squared: int


def line_lattice(L: Line) -> LineLattice:
    """Saturated basis of L's integral points, reduced, with exact Gram data.

    Saturation is the double-kernel construction: the kernel C of the span
    matrix is saturated by construction, and the kernel of C is exactly the
    set of integral vectors in the K-span of the line. Both kernels use the
    same unimodular Euclidean elimination.
    """
    m = len(L.span_a)
    ortho = _kernel([L.span_a, L.span_b], m)
    sat = _kernel(ortho, m)
    if len(sat) != 2:
        raise DegenerateSpanError("line span has rank != 2")
    u, w = _lagrange_reduce(sat[0], sat[1])
    if L.ctx.imaginary:
        zbasis = (_embed_real(u), _embed_real(_mul_i(u)),
                  _embed_real(w), _embed_real(_mul_i(w)))
    else:
        zbasis = (tuple(a for a, _ in u), tuple(a for a, _ in w))
    gram = tuple(
        tuple(sum(x * y for x, y in zip(r, s)) for s in zbasis) for r in zbasis
    )
    det2 = _int_det([list(r) for r in gram])
    if L.ctx.imaginary:
        # rank-4 real Gram determinant must be the square of the Hermitian one
        dh = _hdot(u, u)[0] * _hdot(w, w)[0]
        ha, hb = _hdot(u, w)
        dh -= ha * ha + hb * hb
        if det2 != dh * dh:
            raise AssertionError("real and Hermitian lattice determinants disagree")
    if det2 <= 0:
        raise DegenerateSpanError("lattice basis is degenerate")
    return LineLattice(L.ctx, m - 1, (u, w), zbasis, gram, det2)


def lattice_determinant(M: LineLattice) -> tuple[int, tuple[Fraction, Fraction]]:
    """Exact Gram determinant and a certified enclosure of its square root.

    The interval endpoints are rational with relative width <= 2^-32.
    """
    return M.det_squared, sqrt_interval(M.det_squared)


def lattice_coefficients(M: LineLattice, vec: PairVec):
    """O_K-coordinates of ``vec`` in the lattice basis, or None if not in M."""
    u, w = M.ring_basis
    best = None
    for i, j in combinations(range(len(u)), 2):
        da, db = _minor(u, w, i, j)
        if da or db:
            nn = da * da + db * db
            if best is None or nn > best[0]:
                best = (nn, i, j, (da, db))
    if best is None:
        raise DegenerateSpanError("degenerate lattice basis")
    _, i, j, (da, db) = best
    # Cramer: c1 = (v_i w_j - v_j w_i) / delta, c2 = (u_i v_j - u_j v_i) / delta
    n1 = _psub(_gmul(*vec[i], *w[j]), _gmul(*vec[j], *w[i]))
    n2 = _psub(_gmul(*u[i], *vec[j]), _gmul(*u[j], *vec[i]))
    dd = da * da + db * db
    c = []
    for na, nb in (n1, n2):
        ra = na * da + nb * db
        rb = nb * da - na * db
        if ra % dd or rb % dd:
            return None
        c.append((ra // dd, rb // dd))
    (c1, c2) = c
    for k in range(len(u)):
        lhs = _padd(_gmul(*c1, *u[k]), _gmul(*c2, *w[k]))
        if lhs != vec[k]:
            return None
    return c1, c2


# ---------------------------------------------------------------------------
# Determinant vs height comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetHeightReport:
    """Exact comparison of the lattice covolume against the Pluecker height."""

    line: Line
    height: int
    det_squared: int
    covolume: tuple[Fraction, Fraction]  # certified sqrt enclosure
    ratio_bounds: tuple[Fraction, Fraction]  # covolume / height enclosure
    band: tuple[int, int]  # (1, C(n+1,2)) as the squared-ratio band over Q
    in_band: bool


def det_height_report(L: Line) -> DetHeightReport:
    """Check the two-sided covolume band for a line, in exact arithmetic.

    Over Q the covolume of the saturated lattice is sqrt(sum p_ij^2) for the
    primitive Pluecker vector p, so with H = max |p_ij| the squared ratio
    det^2 / H^2 lies in [1, C(n+1,2)]; the check compares integers exactly.
    Over Q(i) the rank-4 covolume equals sum norm(p_ij) and the documented
    band is H <= covolume <= C(n+1,2) * H, checked exactly as well.
    """
    M = line_lattice(L)
    h = plucker_height(L)
    det2, cov = lattice_determinant(M)
    m = L.n + 1
    nminors = m * (m - 1) // 2
    if L.ctx.imaginary:
        detz = isqrt(det2)
        in_band = h <= detz and detz <= nminors * h
    else:
        in_band = h * h <= det2 and det2 <= nminors * h * h
    ratio = (cov[0] / h, cov[1] / h)
    return DetHeightReport(L, h, det2, cov, ratio, (1, nminors), in_band)
