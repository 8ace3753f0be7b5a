"""
angles — petal angles and the alpha / beta / gamma angle vectors.

A petal angle <abc> is the angle at the centre of a circle of radius a
subtended by two circles of radii b and c tangent to it and to each other.
The three angle vectors list the petal angles around a small (alpha),
mid (beta) and large (gamma) centre, always in the neighbour-pair order

    (large, large), (mid, mid), (small, small),
    (large, mid),   (large, small), (mid, small)

which is also the coordinate order of every AngleCount in tuples.py.

Exports:
  to_scalar(x)                          -> mpf
  cosine_rule(a, b, c)                  -> exact Fraction / mpf
  petal_angle(a, b, c, digits)          -> mpf
  angle_vector(kind, r, s, digits)      -> 6-tuple of mpf, 0 < s < r < 1
  closure_angle_vector(...)             -> same, any positive radii
  ray_derivative(kind, xi, m, r, digits)-> mpf
  origin_limit_cosines(kind, m)         -> 6-tuple
  check_radii(r, s)                     -> raises DomainError
"""

from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from mpmath import mp, mpf

from errors import DomainError, UsageError

DEFAULT_DIGITS = 50
GUARD_DIGITS = 10

Scalar = Union[mpf, Fraction, int, float, str]

KINDS = ("alpha", "beta", "gamma")

# Neighbour pairs per AngleCount coordinate, written as radius labels.
PAIR_LABELS = (
    ("large", "large"),
    ("mid", "mid"),
    ("small", "small"),
    ("large", "mid"),
    ("large", "small"),
    ("mid", "small"),
)

_CENTRE_LABEL = {"alpha": "small", "beta": "mid", "gamma": "large"}


class RadiiPair(NamedTuple):
    r: mpf
    s: mpf


def to_scalar(x: Scalar) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


def check_radii(r, s) -> None:
    """Raise DomainError unless 0 < s < r < 1."""
    if not (0 < s < r < 1):
        raise DomainError(f"radii outside 0 < s < r < 1: r={r}, s={s}")


def cosine_rule(a, b, c):
    """
    Cosine of <abc>, i.e. ((a+b)^2 + (a+c)^2 - (b+c)^2) / (2(a+c)(a+b)),
    kept in the reduced form 1 - 2bc / ((a+b)(a+c)).

    Exact when the inputs are Fractions or ints.
    """
    if all(isinstance(x, int) for x in (a, b, c)):
        a = Fraction(a)
    return 1 - 2 * b * c / ((a + b) * (a + c))


def _acos_clamped(x: mpf, digits: int) -> mpf:
    if x > 1 or x < -1:
        if abs(x) - 1 >= mpf(10) ** (-(digits - 5)):
            raise DomainError(f"cosine-rule argument {mp.nstr(x, 15)} outside [-1, 1]")
        x = mpf(1) if x > 0 else mpf(-1)
    return mp.acos(x)


def petal_angle(a: Scalar, b: Scalar, c: Scalar, digits: int = DEFAULT_DIGITS) -> mpf:
    """Angle <abc> in (0, pi); all three radii must be positive."""
    with mp.workdps(digits + GUARD_DIGITS):
        a, b, c = to_scalar(a), to_scalar(b), to_scalar(c)
        if a <= 0 or b <= 0 or c <= 0:
            raise DomainError(f"petal angle needs positive radii, got ({a}, {b}, {c})")
        if a == b == c:
            return +mp.pi / 3
        return _acos_clamped(cosine_rule(a, b, c), digits)


def _radius_of(label: str, r: mpf, s: mpf) -> mpf:
    if label == "large":
        return mpf(1)
    if label == "mid":
        return r
    return s


def closure_angle_vector(kind: str, r: Scalar, s: Scalar, digits: int = DEFAULT_DIGITS,
                         weights: Optional[Sequence[int]] = None) -> tuple:
    """
    alpha(r,s) = (<s11>, <srr>, <sss>, <s1r>, <s1s>, <srs>)
    beta(r,s)  = (<r11>, <rrr>, <rss>, <r1r>, <r1s>, <rrs>)
    gamma(r,s) = (<111>, <1rr>, <1ss>, <11r>, <11s>, <1rs>)

    Defined for any positive radii, so contour endpoints on s = r and r = 1
    can be evaluated. With `weights`, coordinates of weight zero are skipped
    and returned as 0.
    """
    if kind not in _CENTRE_LABEL:
        raise UsageError(f"Unknown angle kind {kind!r}. Valid kinds: {list(KINDS)}")
    with mp.workdps(digits + GUARD_DIGITS):
        r, s = to_scalar(r), to_scalar(s)
        centre = _radius_of(_CENTRE_LABEL[kind], r, s)
        return tuple(
            petal_angle(centre, _radius_of(b, r, s), _radius_of(c, r, s), digits)
            if weights is None or weights[i] else mpf(0)
            for i, (b, c) in enumerate(PAIR_LABELS)
        )


def angle_vector(kind: str, r: Scalar, s: Scalar, digits: int = DEFAULT_DIGITS,
                 weights: Optional[Sequence[int]] = None) -> tuple:
    """closure_angle_vector restricted to 0 < s < r < 1."""
    with mp.workdps(digits + GUARD_DIGITS):
        r, s = to_scalar(r), to_scalar(s)
        if kind in _CENTRE_LABEL:
            check_radii(r, s)
        return closure_angle_vector(kind, r, s, digits, weights)


def ray_derivative(kind: str, xi: Sequence[int], m: Scalar, r: Scalar,
                   digits: int = DEFAULT_DIGITS) -> mpf:
    """
    d/dr of xi . kind(r, m*r) along the ray s = m*r.

    Only coordinates 1, 4 and 5 depend on r along a ray, so the value is
    -(xi1*U + xi4*V + xi5*W) with closed forms per side.
    """
    if kind not in ("alpha", "beta"):
        raise UsageError(f"ray_derivative is defined for alpha and beta, not {kind!r}")
    with mp.workdps(digits + GUARD_DIGITS):
        m, r = to_scalar(m), to_scalar(r)
        if not (0 < m < 1) or not (0 < r < 1):
            raise DomainError(f"ray derivative needs m, r in (0, 1): m={m}, r={r}")
        if kind == "alpha":
            mr1 = m * r + 1
            u = 2 * m / (mr1 * mp.sqrt(m * r * (m * r + 2)))
            v = m / (mr1 * mp.sqrt(m * (m * r + r + 1)))
            w = m / (mr1 * mp.sqrt(2 * m * r + 1))
        else:
            r1 = r + 1
            u = 2 / (r1 * mp.sqrt(r * (r + 2)))
            v = 1 / (r1 * mp.sqrt(2 * r + 1))
            w = m / (r1 * mp.sqrt(m * (m * r + r + 1)))
        return -(xi[0] * u + xi[3] * v + xi[4] * w)


def origin_limit_cosines(kind: str, m) -> tuple:
    """
    Limits as r -> 0 of the cosine-rule arguments of kind(r, m*r).

    Rational in m: Fraction in, Fraction out; mpf in, mpf out.
    """
    if kind not in ("alpha", "beta"):
        raise UsageError(f"origin limits are defined for alpha and beta, not {kind!r}")
    one = Fraction(1) if isinstance(m, (Fraction, int)) else mpf(1)
    m = m * one
    if kind == "alpha":
        return (
            -one,
            1 - 2 / (1 + m) ** 2,
            one / 2,
            (m - 1) / (m + 1),
            0 * one,
            m / (1 + m),
        )
    return (
        -one,
        one / 2,
        1 - 2 * m ** 2 / (1 + m) ** 2,
        0 * one,
        (1 - m) / (1 + m),
        1 / (1 + m),
    )


def origin_limit_angles(kind: str, m, digits: int = DEFAULT_DIGITS) -> tuple:
    with mp.workdps(digits + GUARD_DIGITS):
        return tuple(
            _acos_clamped(to_scalar(c), digits)
            for c in origin_limit_cosines(kind, m)
        )
