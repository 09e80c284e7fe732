"""Concrete line-covered varieties and fiber-sum counting.

Three families are modeled exactly:

* rational normal scrolls S(a, b) in P^{a+b+1}, ruled over P^1, with
  determinantal membership equations (all 2x2 minors of the rolling matrix);
* the pencil decomposition of P^n through a basepoint;
* the quadric cone x0*x2 = x1^2 in P^3 with its vertex ruling.

Each family supports two independent exact counts: summing per-fiber line
counts (with certified cutoffs from lattice minima) and a direct scan of the
membership equations. The two must agree exactly.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, isqrt, log

from .errors import InsufficientDataError, ResourceLimitError
from .fields import (
    QQ,
    FieldContext,
    ProjectivePoint,
    _canon_tuple_qi,
    _ggcd,
    _gmul,
    canonicalize,
    height,
    point_from_pairs,
)
from .lines import Line
from .enumeration import (
    DEFAULT_LIMIT,
    count_line_lattice,
    count_pn,
    enumerate_pn,
    iroot,
    line_lattice,
    line_min_height,
    line_points_lattice,
)
from .lines import plucker_height

Pair = tuple[int, int]


def _ppow(x: Pair, k: int) -> Pair:
    out = (1, 0)
    for _ in range(k):
        out = _gmul(*out, *x)
    return out


def _monomial_vector(s: Pair, t: Pair, deg: int) -> tuple[Pair, ...]:
    """(s^deg, s^(deg-1) t, ..., t^deg); primitive whenever gcd(s, t) is a unit."""
    return tuple(
        _gmul(*_ppow(s, deg - k), *_ppow(t, k)) for k in range(deg + 1)
    )


# ---------------------------------------------------------------------------
# Scrolls
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scroll:
    """The rational normal scroll S(a, b) in P^(a+b+1), ruled over P^1.

    The fiber over [s:t] is spanned by the degree-a monomial vector in the
    first coordinate block and the degree-b monomial vector in the second.
    Membership in the ambient space is the vanishing of all 2x2 minors of
    the rolling matrix formed by consecutive coordinates of each block.
    """

    a: int
    b: int
    ctx: FieldContext = QQ

    def __post_init__(self) -> None:
        if not (0 <= self.a <= self.b) or self.a + self.b < 1:
            raise ValueError("need 0 <= a <= b and a + b >= 1")

    @property
    def n(self) -> int:
        return self.a + self.b + 1

    @property
    def degree(self) -> int:
        return self.a + self.b

    def token(self) -> str:
        return f"scroll:{self.a},{self.b}"

    def rolling_columns(self, vec: tuple[Pair, ...]) -> list[tuple[Pair, Pair]]:
        a, b = self.a, self.b
        x = vec[: a + 1]
        y = vec[a + 1 :]
        cols = [(x[i], x[i + 1]) for i in range(a)]
        cols += [(y[j], y[j + 1]) for j in range(b)]
        return cols

    def contains(self, vec: tuple[Pair, ...]) -> bool:
        """Exact membership: the rolling matrix has rank <= 1."""
        cols = self.rolling_columns(vec)
        for (t1, b1), (t2, b2) in combinations(cols, 2):
            pa = t1[0] * b2[0] - t1[1] * b2[1] - t2[0] * b1[0] + t2[1] * b1[1]
            pb = t1[0] * b2[1] + t1[1] * b2[0] - t2[0] * b1[1] - t2[1] * b1[0]
            if pa or pb:
                return False
        return True


def scroll_fiber(S: Scroll, basept: ProjectivePoint) -> Line:
    """The ruling line over a base point of P^1."""
    s, t = basept.coords[0], basept.coords[1]
    sp, tp = (s.a, s.b), (t.a, t.b)
    zero = (0, 0)
    u = _monomial_vector(sp, tp, S.a) + (zero,) * (S.b + 1)
    w = (zero,) * (S.a + 1) + _monomial_vector(sp, tp, S.b)
    return Line(u, w, S.ctx)


def scroll_psi_height(S: Scroll, basept: ProjectivePoint) -> int:
    """Height of the ruling over a base point (its Pluecker height)."""
    return plucker_height(scroll_fiber(S, basept))


def scroll_base_of(S: Scroll, vec: tuple[Pair, ...]) -> ProjectivePoint | None:
    """Base point of the ruling through a scroll point, or None at a
    contracted directrix point (only possible when a = 0)."""
    for top, bot in S.rolling_columns(vec):
        if top != (0, 0) or bot != (0, 0):
            if S.ctx.imaginary:
                return canonicalize([top, bot], S.ctx)
            return canonicalize([top[0], bot[0]], S.ctx)
    return None


# ---------------------------------------------------------------------------
# Fiber-sum counting with certified cutoffs
# ---------------------------------------------------------------------------


def _height_class(h: int, ctx: FieldContext):
    """Base points of P^1 with height exactly h."""
    for P in enumerate_pn(1, h, ctx):
        if height(P) == h:
            yield P


def _certify_scroll_cutoff(S: Scroll, B: int, hmax: int, nonvertex: bool) -> None:
    """Assert that rulings over the next base-height class contribute nothing.

    The certificate is computed, not assumed: for every base point of height
    hmax + 1 the lattice minimum of the fiber (or its count beyond the shared
    vertex when a = 0) is checked directly.
    """
    for P in _height_class(hmax + 1, S.ctx):
        L = scroll_fiber(S, P)
        if nonvertex:
            if count_line_lattice(L, B) > 1:
                raise AssertionError("fiber beyond the cutoff still contributes")
        else:
            if line_min_height(L) <= B:
                raise AssertionError("fiber beyond the cutoff still contributes")


def count_scroll_fibersum(S: Scroll, B: int, limit: int = DEFAULT_LIMIT) -> int:
    """Exact count of scroll points with height <= B by summing over rulings.

    For a >= 1 the rulings are pairwise disjoint and the counts add up; for
    a = 0 all rulings share the vertex, which is counted exactly once. The
    base cutoff is certified by per-fiber lattice minima.
    """
    if B < 1:
        raise ValueError("bound must be >= 1")
    if S.a >= 1:
        hmax = iroot(B, S.a)
        total = 0
        for P in enumerate_pn(1, hmax, S.ctx):
            L = scroll_fiber(S, P)
            lat = line_lattice(L)
            if line_min_height(L, lat) > B:
                continue
            total += count_line_lattice(L, B, lattice=lat, limit=limit)
        _certify_scroll_cutoff(S, B, hmax, nonvertex=False)
        return total
    hmax = iroot(B, S.b)
    total = 1  # the vertex, shared by every ruling
    for P in enumerate_pn(1, hmax, S.ctx):
        L = scroll_fiber(S, P)
        total += count_line_lattice(L, B, limit=limit) - 1
    _certify_scroll_cutoff(S, B, hmax, nonvertex=True)
    return total


def scroll_points_fibersum(S: Scroll, B: int, limit: int = DEFAULT_LIMIT):
    """Set of canonical coordinate tuples of scroll points with height <= B,
    assembled as the union of per-ruling point sets."""
    if B < 1:
        raise ValueError("bound must be >= 1")
    hmax = iroot(B, S.a) if S.a >= 1 else iroot(B, S.b)
    pts = set()
    for P in enumerate_pn(1, hmax, S.ctx):
        L = scroll_fiber(S, P)
        pts |= line_points_lattice(L, B, limit=limit)
    if S.a == 0:
        vertex = ((1, 0),) + ((0, 0),) * (S.n)
        if S.ctx.imaginary:
            pts.add(vertex)
        else:
            pts.add(tuple(a for a, _ in vertex))
    _certify_scroll_cutoff(S, B, hmax, nonvertex=(S.a == 0))
    return pts


# ---------------------------------------------------------------------------
# Brute-force scans of the membership equations
# ---------------------------------------------------------------------------


def _canon_q(vec: tuple[int, ...]):
    for x in vec:
        if x:
            return vec if x > 0 else tuple(-y for y in vec)
    return None


def _scan_s11(B: int):
    """Solved-coordinate scan of x0*y1 = x1*y0 in P^3 (coords x0,x1,y0,y1)."""
    pts = set()
    rng = range(-B, B + 1)
    for x0 in rng:
        if x0 == 0:
            continue
        for x1 in rng:
            for y0 in rng:
                num = x1 * y0
                if num % x0:
                    continue
                y1 = num // x0
                if y1 > B or y1 < -B:
                    continue
                vec = (x0, x1, y0, y1)
                if gcd(*vec) == 1:
                    pts.add(_canon_q(vec))
    for p in rng:  # x0 = 0, x1 = 0: any (y0, y1)
        for q in rng:
            if gcd(p, q) == 1:
                pts.add(_canon_q((0, 0, p, q)))
    for p in rng:  # x0 = 0, x1 != 0 forces y0 = 0
        if p == 0:
            continue
        for q in rng:
            if gcd(p, q) == 1:
                pts.add(_canon_q((0, p, 0, q)))
    return pts


def _scan_s12(B: int):
    """Solved-coordinate scan of S(1,2) in P^4 (coords x0,x1,y0,y1,y2).

    Equations: x0 y1 = x1 y0, x0 y2 = x1 y1, y0 y2 = y1^2. With x0 != 0 the
    first two solve y1 and y2 and imply the third; the x0 = 0 slices are
    enumerated separately.
    """
    pts = set()
    rng = range(-B, B + 1)
    for x0 in rng:
        if x0 == 0:
            continue
        for x1 in rng:
            for y0 in rng:
                n1 = x1 * y0
                if n1 % x0:
                    continue
                y1 = n1 // x0
                if y1 > B or y1 < -B:
                    continue
                n2 = x1 * y1
                if n2 % x0:
                    continue
                y2 = n2 // x0
                if y2 > B or y2 < -B:
                    continue
                vec = (x0, x1, y0, y1, y2)
                if gcd(*vec) == 1:
                    pts.add(_canon_q(vec))
    # x0 = 0, x1 != 0: y0 = y1 = 0, y2 free
    for p in rng:
        if p == 0:
            continue
        for q in rng:
            if gcd(p, q) == 1:
                pts.add(_canon_q((0, p, 0, 0, q)))
    # x0 = x1 = 0: the y-block lies on the conic y0 y2 = y1^2
    for y0 in rng:
        if y0 == 0:
            continue
        for y1 in rng:
            n = y1 * y1
            if n % y0:
                continue
            y2 = n // y0
            if y2 > B or y2 < -B:
                continue
            vec = (0, 0, y0, y1, y2)
            if gcd(*vec) == 1:
                pts.add(_canon_q(vec))
    pts.add((0, 0, 0, 0, 1))  # y0 = y1 = 0 forces the last coordinate axis
    return pts


def scroll_points_bruteforce(S: Scroll, B: int, limit: int = DEFAULT_LIMIT):
    """Set of canonical scroll points with height <= B from the equations.

    Uses a solved-coordinate scan for S(1,1) and S(1,2) over Q (validated
    against the generic scan in the tests) and the generic full enumeration
    of P^n candidates elsewhere.
    """
    if B < 1:
        raise ValueError("bound must be >= 1")
    if not S.ctx.imaginary:
        if (S.a, S.b) == (1, 1):
            if (2 * B + 1) ** 3 > limit:
                raise ResourceLimitError("scan box exceeds the candidate ceiling")
            return _scan_s11(B)
        if (S.a, S.b) == (1, 2):
            if (2 * B + 1) ** 3 > limit:
                raise ResourceLimitError("scan box exceeds the candidate ceiling")
            return _scan_s12(B)
    pts = set()
    for P in enumerate_pn(S.n, B, S.ctx, limit=limit):
        pairs = P.as_pairs()
        if S.contains(pairs):
            pts.add(pairs if S.ctx.imaginary else P.as_ints())
    return pts


def count_scroll_bruteforce(S: Scroll, B: int, limit: int = DEFAULT_LIMIT) -> int:
    """Oracle count of scroll points with height <= B."""
    return len(scroll_points_bruteforce(S, B, limit))


# ---------------------------------------------------------------------------
# Base growth exponent and the quadratic band
# ---------------------------------------------------------------------------


@dataclass
class BaseGrowthReport:
    """Log-log growth fit of the base counting function of a scroll.

    ``slope`` estimates the exponent of N_X(B_A) in B_A; the fiber-sum
    argument needs it below 1, and for S(a, b) the exact exponent is
    2/(a+b) because ruling heights are the (a+b)-th power of base heights.
    """

    scroll: Scroll
    samples: list[tuple[int, int]]  # (B_A, N_X(B_A))
    slope: float
    expected: Fraction
    slope_within_tolerance: bool
    sublinear: bool

    TOLERANCE = 0.1
    SUBLINEAR_THRESHOLD = 0.9


def check_base_growth(S: Scroll, B_values, limit: int = DEFAULT_LIMIT) -> BaseGrowthReport:
    """Count base points by ruling height and fit the growth exponent."""
    bvals = sorted(set(int(B) for B in B_values))
    if len(bvals) < 3:
        raise InsufficientDataError("need at least 3 bounds for a growth fit")
    e = S.degree
    samples = []
    for BA in bvals:
        hmax = iroot(BA, e) + 1
        c = 0
        for P in enumerate_pn(1, hmax, S.ctx, limit=limit):
            if scroll_psi_height(S, P) <= BA:
                c += 1
        samples.append((BA, c))
    if any(c <= 0 for _, c in samples):
        raise InsufficientDataError("empty base counts cannot be fitted")
    fit = statistics.linear_regression(
        [log(BA) for BA, _ in samples], [log(c) for _, c in samples]
    )
    slope = fit.slope
    expected = Fraction(2, e)
    return BaseGrowthReport(
        S,
        samples,
        slope,
        expected,
        abs(slope - float(expected)) <= BaseGrowthReport.TOLERANCE,
        slope <= BaseGrowthReport.SUBLINEAR_THRESHOLD,
    )


@dataclass
class QuadraticBandReport:
    """N_V(B) / B^2 across a range of bounds, against a frozen band."""

    scroll: Scroll
    samples: list[tuple[int, int]]  # (B, N_V(B))
    ratios: list[Fraction]
    spread_below_4: bool
    band: tuple[Fraction, Fraction] | None
    in_band: bool | None


def verify_quadratic_band(
    S: Scroll,
    B_values,
    band: tuple[Fraction, Fraction] | None = None,
    limit: int = DEFAULT_LIMIT,
) -> QuadraticBandReport:
    """Fiber-sum counts divided by B^2 must stay inside a fixed band.

    Only meaningful when the base growth is sublinear (degree >= 3); inputs
    failing that hypothesis are rejected.
    """
    if S.degree < 3:
        raise ValueError(
            f"S({S.a},{S.b}) does not satisfy the sublinear base-growth hypothesis"
        )
    bvals = sorted(set(int(B) for B in B_values))
    if not bvals:
        raise InsufficientDataError("no bounds given")
    samples = [(B, count_scroll_fibersum(S, B, limit=limit)) for B in bvals]
    ratios = [Fraction(c, B * B) for B, c in samples]
    spread_ok = max(ratios) < 4 * min(ratios)
    in_band = None
    if band is not None:
        lo, hi = band
        in_band = all(lo <= r <= hi for r in ratios)
    return QuadraticBandReport(S, samples, ratios, spread_ok, band, in_band)


# ---------------------------------------------------------------------------
# The pencil decomposition of P^n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PencilDecomposition:
    """P^n as the union of the lines through a fixed basepoint.

    Every point other than the basepoint lies on exactly one such line; the
    line toward direction [d] in P^(n-1) meets the height-B ball beyond the
    basepoint exactly when H(d) <= B, because its second-shortest point is
    [0:d] of height H(d).
    """

    n: int
    ctx: FieldContext = QQ

    def basepoint(self) -> ProjectivePoint:
        pairs = ((1, 0),) + ((0, 0),) * self.n
        return point_from_pairs(pairs, self.ctx)

    def line_through(self, direction: ProjectivePoint) -> Line:
        zero = (0, 0)
        e0 = ((1, 0),) + (zero,) * self.n
        d = (zero,) + direction.as_pairs()
        return Line(e0, d, self.ctx)


def count_pn_via_pencil(
    n: int, B: int, ctx: FieldContext = QQ, limit: int = DEFAULT_LIMIT
) -> int:
    """Count P^n(K) points of height <= B by summing over pencil lines.

    The basepoint is counted once; each direction of height <= B contributes
    its line's count minus the basepoint. Must equal count_pn(n, B) exactly.
    """
    if n < 2 or B < 1:
        raise ValueError("need n >= 2 and B >= 1")
    pencil = PencilDecomposition(n, ctx)
    total = 1
    for d in enumerate_pn(n - 1, B, ctx, limit=limit):
        L = pencil.line_through(d)
        total += count_line_lattice(L, B, limit=limit) - 1
    return total


# ---------------------------------------------------------------------------
# The quadric cone
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadricCone:
    """The cone x0*x2 = x1^2 in P^3, ruled by the lines joining the vertex
    [0:0:0:1] to the base conic [s^2 : s t : t^2 : 0]."""

    ctx: FieldContext = QQ

    def vertex(self) -> ProjectivePoint:
        return point_from_pairs(((0, 0), (0, 0), (0, 0), (1, 0)), self.ctx)

    def contains(self, vec: tuple[Pair, ...]) -> bool:
        x0, x1, x2, _ = vec
        lhs = _gmul(*x0, *x2)
        rhs = _gmul(*x1, *x1)
        return lhs == rhs

    def ruling(self, basept: ProjectivePoint) -> Line:
        s, t = basept.coords[0], basept.coords[1]
        sp, tp = (s.a, s.b), (t.a, t.b)
        zero = (0, 0)
        conic = (_ppow(sp, 2), _gmul(*sp, *tp), _ppow(tp, 2), zero)
        axis = (zero, zero, zero, (1, 0))
        return Line(conic, axis, self.ctx)


def cone_points_bruteforce(B: int, ctx: FieldContext = QQ,
                           limit: int = DEFAULT_LIMIT):
    """Canonical points of the quadric cone with height <= B, by direct scan."""
    if B < 1:
        raise ValueError("bound must be >= 1")
    if ctx.imaginary:
        cone = QuadricCone(ctx)
        pts = set()
        for P in enumerate_pn(3, B, ctx, limit=limit):
            pairs = P.as_pairs()
            if cone.contains(pairs):
                pts.add(pairs)
        return pts
    if (2 * B + 1) ** 3 > limit:
        raise ResourceLimitError("scan box exceeds the candidate ceiling")
    pts = set()
    rng = range(-B, B + 1)
    for x0 in rng:
        if x0 == 0:
            continue
        for x1 in rng:
            n = x1 * x1
            if n % x0:
                continue
            x2 = n // x0
            if x2 > B or x2 < -B:
                continue
            for x3 in rng:
                vec = (x0, x1, x2, x3)
                if gcd(*vec) == 1:
                    pts.add(_canon_q(vec))
    for p in rng:  # x0 = 0 forces x1 = 0
        for q in rng:
            if gcd(p, q) == 1:
                pts.add(_canon_q((0, 0, p, q)))
    return pts


def count_cone(B: int, ctx: FieldContext = QQ, limit: int = DEFAULT_LIMIT) -> int:
    """Count cone points of height <= B by summing over the vertex ruling.

    The vertex lies on every ruling and is counted exactly once; a ruling
    contributes beyond the vertex exactly when its base height h satisfies
    h^2 <= B, certified per fiber through the lattice minimum.
    """
    if B < 1:
        raise ValueError("bound must be >= 1")
    cone = QuadricCone(ctx)
    hmax = isqrt(B)
    total = 1
    for P in enumerate_pn(1, hmax, ctx, limit=limit):
        L = cone.ruling(P)
        total += count_line_lattice(L, B, limit=limit) - 1
    for P in _height_class(hmax + 1, ctx):
        if count_line_lattice(cone.ruling(P), B, limit=limit) > 1:
            raise AssertionError("ruling beyond the cutoff still contributes")
    return total


# ---------------------------------------------------------------------------
# Height comparability measurements
# ---------------------------------------------------------------------------


@dataclass
class ComparabilityRow:
    point: ProjectivePoint
    point_height: int
    base: ProjectivePoint | None
    ruling_height: int | None
    ratio: Fraction | None  # ruling height / ambient height


@dataclass
class ComparabilityReport:
    """Observed relation between ruling heights and ambient point heights.

    Purely observational: reports the max ratio and the distribution of
    log H_ruling / log H_point over the sample (points of height 1 and
    contracted directrix points are excluded from the log statistics).
    """

    scroll: Scroll
    rows: list[ComparabilityRow]
    max_ratio: Fraction | None
    log_exponents: list[float]

    @property
    def max_exponent(self) -> float | None:
        return max(self.log_exponents) if self.log_exponents else None


def measure_height_comparability(S: Scroll, points) -> ComparabilityReport:
    """Compare each sample point's height with the height of its ruling."""
    pts = list(points)
    if not pts:
        raise InsufficientDataError("empty sample")
    rows = []
    max_ratio = None
    log_exps = []
    for P in pts:
        vec = P.as_pairs()
        if not S.contains(vec):
            raise ValueError(f"{P} is not on {S.token()}")
        base = scroll_base_of(S, vec)
        hp = height(P)
        if base is None:
            rows.append(ComparabilityRow(P, hp, None, None, None))
            continue
        ha = scroll_psi_height(S, base)
        ratio = Fraction(ha, hp)
        rows.append(ComparabilityRow(P, hp, base, ha, ratio))
        if max_ratio is None or ratio > max_ratio:
            max_ratio = ratio
        if hp > 1 and ha >= 1:
            log_exps.append(log(ha) / log(hp))
    return ComparabilityReport(S, rows, max_ratio, log_exps)
