"""Exact arithmetic over Z and Z[i], canonical projective coordinates, heights.

Supported base fields are Q and Q(i). Both have class number 1 and a finite
unit group, so every projective point has a unique canonical integral
representative: coordinates that are coprime in the ring of integers, with
the first nonzero coordinate positive (Q) or in the quadrant Re > 0, Im >= 0
(Q(i)).

Heights use the field-dependent (unnormalised) convention: for a canonical
point the height is max |x_i| over Q and max norm(x_i) over Q(i), an exact
integer in both cases. Finite places contribute nothing because canonical
coordinates are coprime. No floating point appears anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import (
    DimensionMismatchError,
    ParseError,
    ZeroElementError,
    ZeroVectorError,
)

# ---------------------------------------------------------------------------
# Integer-pair kernels for Z[i].
#
# Hot paths (gcd sieves, lattice enumeration) work on plain (a, b) int pairs
# representing a + b*i; the RingElement class below wraps the same kernels.
# Z is embedded as pairs with b = 0, so one set of kernels serves both rings.
# ---------------------------------------------------------------------------


def _nearest_div(p: int, q: int) -> int:
    """Nearest integer to p/q for q > 0 (ties rounded up)."""
    return (2 * p + q) // (2 * q)


def _gmul(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    return a * c - b * d, a * d + b * c


def _gdivmod(a: int, b: int, c: int, d: int) -> tuple[int, int, int, int]:
    """Quotient and remainder of (a+bi) / (c+di) with norm(r) <= norm(divisor)/2.

    Nearest-integer rounding of both components makes Z[i] norm-Euclidean,
    which guarantees gcd termination.
    """
    n = c * c + d * d
    q1 = _nearest_div(a * c + b * d, n)
    q2 = _nearest_div(b * c - a * d, n)
    return q1, q2, a - q1 * c + q2 * d, b - q1 * d - q2 * c


def _ggcd(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """A gcd of a+bi and c+di in Z[i] (unique up to a unit)."""
    while c or d:
        n = c * c + d * d
        q1 = _nearest_div(a * c + b * d, n)
        q2 = _nearest_div(b * c - a * d, n)
        a, b, c, d = c, d, a - q1 * c + q2 * d, b - q1 * d - q2 * c
    return a, b


def _gdiv_exact(a: int, b: int, c: int, d: int) -> tuple[int, int]:
    """Exact division (a+bi)/(c+di); raises if the division is not exact."""
    n = c * c + d * d
    re_num = a * c + b * d
    im_num = b * c - a * d
    if re_num % n or im_num % n:
        raise ArithmeticError("non-exact Gaussian division")
    return re_num // n, im_num // n


def _gunit_quadrant(a: int, b: int) -> tuple[int, int, int, int]:
    """Rotate nonzero a+bi by the unit that lands it in Re > 0, Im >= 0.

    Returns (a', b', ua, ub) with a'+b'i = (ua+ub*i)(a+bi). Exactly one of
    the four unit multiples satisfies the quadrant condition.
    """
    if a > 0 and b >= 0:
        return a, b, 1, 0
    if a <= 0 and b > 0:
        return b, -a, 0, -1
    if a < 0 and b <= 0:
        return -a, -b, -1, 0
    return -b, a, 0, 1


def _canon_tuple_q(vec: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical representative of a nonzero integer vector over Q."""
    g = gcd(*vec)
    if g == 0:
        raise ZeroVectorError("all coordinates are zero")
    if g != 1:
        vec = tuple(x // g for x in vec)
    for x in vec:
        if x:
            return vec if x > 0 else tuple(-y for y in vec)
    raise ZeroVectorError("all coordinates are zero")


def _canon_tuple_qi(
    vec: tuple[tuple[int, int], ...],
) -> tuple[tuple[int, int], ...]:
    """Canonical representative of a nonzero Gaussian-integer vector."""
    ga, gb = 0, 0
    for a, b in vec:
        ga, gb = _ggcd(ga, gb, a, b)
        if ga * ga + gb * gb == 1:
            break
    if (ga, gb) == (0, 0):
        raise ZeroVectorError("all coordinates are zero")
    if ga * ga + gb * gb != 1:
        vec = tuple(_gdiv_exact(a, b, ga, gb) for a, b in vec)
    for a, b in vec:
        if a or b:
            _, _, ua, ub = _gunit_quadrant(a, b)
            if (ua, ub) != (1, 0):
                vec = tuple(_gmul(ua, ub, x, y) for x, y in vec)
            return vec
    raise ZeroVectorError("all coordinates are zero")


# ---------------------------------------------------------------------------
# Ring elements and field contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class RingElement:
    """An integer a + b*i of the ring of integers (b = 0 over Q)."""

    a: int
    b: int = 0

    def norm(self) -> int:
        return self.a * self.a + self.b * self.b

    def conjugate(self) -> "RingElement":
        return RingElement(self.a, -self.b)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __add__(self, other: "RingElement | int") -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.a + other, self.b)
        return RingElement(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "RingElement | int") -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.a - other, self.b)
        return RingElement(self.a - other.a, self.b - other.b)

    def __rsub__(self, other: int) -> "RingElement":
        return RingElement(other - self.a, -self.b)

    def __neg__(self) -> "RingElement":
        return RingElement(-self.a, -self.b)

    def __mul__(self, other: "RingElement | int") -> "RingElement":
        if isinstance(other, int):
            return RingElement(self.a * other, self.b * other)
        return RingElement(*_gmul(self.a, self.b, other.a, other.b))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            raise ValueError("negative exponent in a ring")
        out = RingElement(1)
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b == 0:
            return str(a)
        imag = "i" if abs(b) == 1 else f"{abs(b)}i"
        if a == 0:
            return imag if b > 0 else "-" + imag
        return f"{a}{'+' if b > 0 else '-'}{imag}"


def ring_divmod(x: RingElement, y: RingElement) -> tuple[RingElement, RingElement]:
    """Euclidean division with norm(remainder) <= norm(y)/2."""
    if y.is_zero():
        raise ZeroElementError("division by zero")
    q1, q2, r1, r2 = _gdivmod(x.a, x.b, y.a, y.b)
    return RingElement(q1, q2), RingElement(r1, r2)


def ring_gcd(x: RingElement, y: RingElement) -> RingElement:
    """A gcd of x and y, defined up to a unit."""
    return RingElement(*_ggcd(x.a, x.b, y.a, y.b))


@dataclass(frozen=True)
class FieldContext:
    """One of the two supported base fields with its exact arithmetic data."""

    kind: str  # "RationalField" or "GaussianField"
    degree: int  # d = r1 + 2*r2
    unit_count: int  # order of the (finite) unit group
    signature: tuple[int, int]  # (r1, r2)

    def __post_init__(self) -> None:
        r1, r2 = self.signature
        if self.degree != r1 + 2 * r2:
            raise ValueError("degree must equal r1 + 2*r2")
        if self.unit_count != (2 if self.degree == 1 else 4):
            raise ValueError("unit_count inconsistent with the field")

    @property
    def imaginary(self) -> bool:
        return self.signature[1] > 0

    @property
    def label(self) -> str:
        return "Q(i)" if self.imaginary else "Q"

    @property
    def token(self) -> str:
        return "qi" if self.imaginary else "q"

    def units(self) -> tuple[RingElement, ...]:
        if self.imaginary:
            return (
                RingElement(1),
                RingElement(0, 1),
                RingElement(-1),
                RingElement(0, -1),
            )
        return (RingElement(1), RingElement(-1))


QQ = FieldContext("RationalField", 1, 2, (1, 0))
QI = FieldContext("GaussianField", 2, 4, (0, 1))


def field_from_token(token: str) -> FieldContext:
    t = token.strip().lower()
    if t in ("q", "qq", "rational"):
        return QQ
    if t in ("qi", "q(i)", "gaussian"):
        return QI
    raise ParseError(f"unknown field token {token!r} (expected 'q' or 'qi')")


# ---------------------------------------------------------------------------
# Projective points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """Canonical primitive coordinate vector of a point of P^n(K).

    Construct via canonicalize(); the constructor itself trusts its input.
    """

    coords: tuple[RingElement, ...]
    ctx: FieldContext

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def height(self) -> int:
        return height(self)

    def as_pairs(self) -> tuple[tuple[int, int], ...]:
        return tuple((x.a, x.b) for x in self.coords)

    def as_ints(self) -> tuple[int, ...]:
        return tuple(x.a for x in self.coords)

    def __str__(self) -> str:
        return format_point(self)


def _entry_to_fractions(entry, ctx: FieldContext) -> tuple[Fraction, Fraction]:
    if isinstance(entry, RingElement):
        ra, rb = Fraction(entry.a), Fraction(entry.b)
    elif isinstance(entry, (int, Fraction)):
        ra, rb = Fraction(entry), Fraction(0)
    elif isinstance(entry, tuple) and len(entry) == 2:
        ra, rb = Fraction(entry[0]), Fraction(entry[1])
    else:
        raise TypeError(f"unsupported coordinate entry {entry!r}")
    if rb and not ctx.imaginary:
        raise ValueError("imaginary coordinate in a rational-field context")
    return ra, rb


def canonicalize(raw, ctx: FieldContext) -> ProjectivePoint:
    """Canonical representative of the projective point spanned by ``raw``.

    Accepts ring elements, ints, Fractions, or (re, im) pairs. Denominators
    are cleared, the coordinate gcd is divided out, and the result is scaled
    by the unique unit that puts the first nonzero coordinate in canonical
    position. The output is invariant under scaling raw by any nonzero field
    element.
    """
    entries = [_entry_to_fractions(e, ctx) for e in raw]
    if len(entries) < 2:
        raise DimensionMismatchError("a projective point needs >= 2 coordinates")
    if all(ra == 0 and rb == 0 for ra, rb in entries):
        raise ZeroVectorError("all coordinates are zero")
    denom = lcm(*(f.denominator for pair in entries for f in pair))
    if ctx.imaginary:
        pairs = tuple(
            (int(ra * denom), int(rb * denom)) for ra, rb in entries
        )
        canon = _canon_tuple_qi(pairs)
        return ProjectivePoint(tuple(RingElement(a, b) for a, b in canon), ctx)
    ints = tuple(int(ra * denom) for ra, _ in entries)
    canon = _canon_tuple_q(ints)
    return ProjectivePoint(tuple(RingElement(a) for a in canon), ctx)


def point_from_pairs(pairs, ctx: FieldContext) -> ProjectivePoint:
    """Wrap an already-canonical coordinate tuple without re-normalizing.

    Entries are (a, b) pairs, or plain ints over Q.
    """
    if ctx.imaginary:
        return ProjectivePoint(tuple(RingElement(a, b) for a, b in pairs), ctx)
    coords = []
    for e in pairs:
        if isinstance(e, tuple):
            if e[1]:
                raise ValueError("imaginary coordinate in a rational-field context")
            coords.append(RingElement(e[0]))
        else:
            coords.append(RingElement(e))
    return ProjectivePoint(tuple(coords), ctx)


def height(P: ProjectivePoint, ctx: FieldContext | None = None) -> int:
    """Exact height of a canonical point: max |x_i| (Q) or max norm(x_i) (Q(i))."""
    ctx = ctx or P.ctx
    if ctx.imaginary:
        return max(x.norm() for x in P.coords)
    return max(abs(x.a) for x in P.coords)


def local_norms(v, ctx: FieldContext) -> list[int]:
    """Archimedean max-norms of a nonzero coordinate vector, one per place.

    Both supported fields have a single archimedean place (r1 + r2 = 1), so
    the list has one entry: max |v_j| over Q, max norm(v_j) over Q(i). The
    Q(i) value is the squared-modulus convention.
    """
    coords = [x if isinstance(x, RingElement) else RingElement(x) for x in v]
    if all(x.is_zero() for x in coords):
        raise ZeroVectorError("all coordinates are zero")
    if ctx.imaginary:
        return [max(x.norm() for x in coords)]
    if any(x.b for x in coords):
        raise ValueError("imaginary coordinate in a rational-field context")
    return [max(abs(x.a) for x in coords)]


def sup_norm(v, ctx: FieldContext) -> int:
    """The d-th power of the sup norm of v, an exact integer.

    The exponent convention is fixed so that H(P) = sup_norm(coords) for any
    canonical point P: over Q this is max |v_j|; over Q(i) the place is
    complex, the norm carries exponent 1/2, and the square returned here is
    max norm(v_j).
    """
    return local_norms(v, ctx)[0]


def unit_canonicalize(
    x: RingElement, ctx: FieldContext
) -> tuple[RingElement, RingElement]:
    """The unique unit multiple of x in canonical position, with the unit used.

    Canonical position is x > 0 over Q and Re > 0, Im >= 0 over Q(i).
    """
    if x.is_zero():
        raise ZeroElementError("zero has no canonical unit multiple")
    if ctx.imaginary:
        a, b, ua, ub = _gunit_quadrant(x.a, x.b)
        return RingElement(a, b), RingElement(ua, ub)
    if x.b:
        raise ValueError("imaginary element in a rational-field context")
    if x.a > 0:
        return x, RingElement(1)
    return -x, RingElement(-1)


# ---------------------------------------------------------------------------
# Parsing and formatting
# ---------------------------------------------------------------------------

def _imag_coeff(s: str) -> int:
    if s in ("", "+"):
        return 1
    if s == "-":
        return -1
    return int(s)


def parse_element(text: str, ctx: FieldContext):
    """Parse one coordinate entry: an integer or p/q over Q, a+bi over Q(i)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ParseError("empty coordinate")
    if not ctx.imaginary:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational coordinate {text!r}") from exc
    try:
        if not s.endswith("i"):
            return RingElement(int(s), 0)
        body = s[:-1]
        # split at the last interior sign: "a+bi" / "a-bi"; else pure "bi"
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-":
                return RingElement(int(body[:k]), _imag_coeff(body[k:]))
        return RingElement(0, _imag_coeff(body))
    except ValueError as exc:
        raise ParseError(f"bad Gaussian coordinate {text!r}") from exc


def parse_point(text: str, ctx: FieldContext) -> ProjectivePoint:
    """Parse a bracketed colon-separated point literal like "[1+i:2:0]"."""
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError(f"point literal must be bracketed: {text!r}")
    parts = s[1:-1].split(":")
    if len(parts) < 2:
        raise DimensionMismatchError("a projective point needs >= 2 coordinates")
    return canonicalize([parse_element(p, ctx) for p in parts], ctx)


def format_point(P: ProjectivePoint) -> str:
    return "[" + ":".join(str(x) for x in P.coords) + "]"
