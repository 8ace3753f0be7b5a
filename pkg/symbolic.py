"""
symbolic — exact polynomial machinery for contour equations.

Pipeline for one contour xi . kind(r, s) = 2pi:

  cos_sum_expr   cos(xi . kind) - 1 as  numerator / denominator, where the
                 numerator is a RadicalPoly: integer polynomials in r, s
                 times square-free products of square roots of polynomials
  detrig         square away the radicals one at a time (left^2 - right^2)
                 until an integer polynomial p(r, s) remains; every point
                 of the contour is a zero of p
  boundary_polys specialisations of the contour polynomial that pin its
                 endpoints (boundary_polys_of takes p itself)
  eliminate      resultant of two contour polynomials in one variable
  isolate_roots  exact isolating intervals (sympy's real-root isolation)
  algebraic_equal exact equality of two real algebraic numbers

Soundness only: p may carry extra factors, and roots found here are tied
back to the numeric contours by their isolating intervals.
"""

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from loguru import logger
from mpmath import mp, mpf
from sympy import Poly, Rational, ZZ, factorint, sturm, symbols

from angles import DEFAULT_DIGITS, GUARD_DIGITS, PAIR_LABELS, to_scalar
from errors import EliminationError, PreconditionError, ResourceBudgetError, UsageError

R, S, M = symbols("r s m")
GENS = (R, S)
DEFAULT_TERM_CAP = 5_000_000

_CENTRE_LABEL = {"alpha": "small", "beta": "mid", "gamma": "large"}


def _zero() -> Poly:
    return Poly(0, *GENS, domain=ZZ)


def _const(c) -> Poly:
    return Poly(c, *GENS, domain=ZZ)


_LABEL_POLY = {
    "large": lambda: _const(1),
    "mid": lambda: Poly(R, *GENS, domain=ZZ),
    "small": lambda: Poly(S, *GENS, domain=ZZ),
}


def eval_poly(p: Poly, *values) -> mpf:
    """Evaluate an integer polynomial at mpf values, one per generator."""
    total = mpf(0)
    for monom, coeff in p.terms():
        term = mpf(int(coeff))
        for v, e in zip(values, monom):
            if e:
                term *= v ** e
        total += term
    return total


# ------------------------------------------------------------------
# Radical polynomials
# ------------------------------------------------------------------

class RadicandTable:
    """Square-free radicands, shared by every RadicalPoly of one expansion."""

    def __init__(self):
        self.radicands: List[Poly] = []
        self._index: Dict[tuple, int] = {}

    def add(self, q: Poly) -> int:
        key = tuple(q.terms())
        if key not in self._index:
            self._index[key] = len(self.radicands)
            self.radicands.append(q)
        return self._index[key]

    def __getitem__(self, i: int) -> Poly:
        return self.radicands[i]

    def __len__(self) -> int:
        return len(self.radicands)


class RadicalPoly:
    """
    sum over keys K of  coeff_K(r, s) * prod_{i in K} sqrt(q_i(r, s)).

    Keys are sets, so every radical appears at most once per term; products
    reduce sqrt(q_i)^2 to q_i on the fly.
    """

    def __init__(self, table: RadicandTable, terms: Optional[Dict[FrozenSet[int], Poly]] = None):
        self.table = table
        self.terms: Dict[FrozenSet[int], Poly] = {}
        for key, coeff in (terms or {}).items():
            if not coeff.is_zero:
                self.terms[key] = coeff

    @classmethod
    def constant(cls, table: RadicandTable, p: Poly) -> "RadicalPoly":
        return cls(table, {frozenset(): p})

    @classmethod
    def radical(cls, table: RadicandTable, coeff: Poly, index: int) -> "RadicalPoly":
        return cls(table, {frozenset([index]): coeff})

    def __add__(self, other: "RadicalPoly") -> "RadicalPoly":
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            out[key] = out[key] + coeff if key in out else coeff
        return RadicalPoly(self.table, out)

    def __neg__(self) -> "RadicalPoly":
        return RadicalPoly(self.table, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "RadicalPoly") -> "RadicalPoly":
        return self + (-other)

    def __mul__(self, other: "RadicalPoly") -> "RadicalPoly":
        out: Dict[FrozenSet[int], Poly] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                coeff = c1 * c2
                for i in k1 & k2:
                    coeff = coeff * self.table[i]
                key = k1 ^ k2
                out[key] = out[key] + coeff if key in out else coeff
        return RadicalPoly(self.table, out)

    def scale(self, p: Poly) -> "RadicalPoly":
        return RadicalPoly(self.table, {k: c * p for k, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def radicals(self) -> set:
        found = set()
        for key in self.terms:
            found |= key
        return found

    def term_count(self) -> int:
        return sum(len(c.terms()) for c in self.terms.values())

    def radical_weight(self, i: int) -> int:
        return sum(len(c.terms()) for k, c in self.terms.items() if i in k)

    def split(self, i: int) -> Tuple["RadicalPoly", "RadicalPoly"]:
        """(L, right) with self = sqrt(q_i) * L + right, neither containing sqrt(q_i)."""
        left, right = {}, {}
        for key, coeff in self.terms.items():
            if i in key:
                left[key - {i}] = coeff
            else:
                right[key] = coeff
        return RadicalPoly(self.table, left), RadicalPoly(self.table, right)

    def to_poly(self) -> Poly:
        if self.radicals():
            raise PreconditionError("RadicalPoly still contains radicals")
        return self.terms.get(frozenset(), _zero())

    def evaluate(self, r, s) -> mpf:
        r, s = to_scalar(r), to_scalar(s)
        roots = [mp.sqrt(eval_poly(q, r, s)) for q in self.table.radicands]
        total = mpf(0)
        for key, coeff in self.terms.items():
            term = eval_poly(coeff, r, s)
            for i in key:
                term *= roots[i]
            total += term
        return total


# ------------------------------------------------------------------
# Cosine expansion
# ------------------------------------------------------------------

def _square_free_split(p: Poly) -> Tuple[Poly, Poly]:
    """p = outside^2 * inside with inside square-free (integer content too)."""
    content, factors = p.sqf_list()
    outside, inside = _const(1), _const(1)
    c_out, c_in = 1, 1
    for prime, e in factorint(abs(int(content))).items():
        c_out *= prime ** (e // 2)
        c_in *= prime ** (e % 2)
    for f, k in factors:
        f = Poly(f.as_expr(), *GENS, domain=ZZ)
        outside = outside * f ** (k // 2)
        if k % 2:
            inside = inside * f
    return outside * c_out, inside * c_in


@dataclass
class _Rotation:
    """cos and sin numerators over a shared polynomial denominator."""
    cos: RadicalPoly
    sin: RadicalPoly
    den: Poly

    def add(self, other: "_Rotation") -> "_Rotation":
        return _Rotation(
            self.cos * other.cos - self.sin * other.sin,
            self.sin * other.cos + self.cos * other.sin,
            self.den * other.den,
        )


def _petal_rotation(table: RadicandTable, a: Poly, b: Poly, c: Poly) -> _Rotation:
    # cos<abc> = (D - 2bc) / D,  sin<abc> = 2 sqrt(abc(a+b+c)) / D,  D = (a+b)(a+c)
    den = (a + b) * (a + c)
    cos_num = den - 2 * b * c
    outside, inside = _square_free_split(a * b * c * (a + b + c))
    if inside == _const(1):
        sin = RadicalPoly.constant(table, 2 * outside)
    else:
        sin = RadicalPoly.radical(table, 2 * outside, table.add(inside))
    return _Rotation(RadicalPoly.constant(table, cos_num), sin, den)


def _rotation_power(rot: _Rotation, n: int, table: RadicandTable) -> _Rotation:
    result = _Rotation(RadicalPoly.constant(table, _const(1)), RadicalPoly(table), _const(1))
    base = rot
    while n:
        if n & 1:
            result = result.add(base)
        n >>= 1
        if n:
            base = base.add(base)
    return result


@dataclass
class CosineExpansion:
    """cos(xi . kind) - 1 == numerator / denominator on the radii domain."""
    kind: str
    xi: Tuple[int, ...]
    numerator: RadicalPoly
    denominator: Poly

    @property
    def radicands(self) -> List[Poly]:
        return list(self.numerator.table.radicands)

    def evaluate(self, r, s) -> mpf:
        return self.numerator.evaluate(r, s) / eval_poly(self.denominator, to_scalar(r), to_scalar(s))


def cos_sum_expr(kind: str, xi: Sequence[int]) -> CosineExpansion:
    if kind not in _CENTRE_LABEL:
        raise UsageError(f"Unknown angle kind {kind!r}. Valid kinds: {list(_CENTRE_LABEL)}")
    xi = tuple(int(v) for v in xi)
    if sum(xi) == 0:
        raise PreconditionError("cos_sum_expr needs a non-zero angle count")
    table = RadicandTable()
    centre = _LABEL_POLY[_CENTRE_LABEL[kind]]()
    total = _Rotation(RadicalPoly.constant(table, _const(1)), RadicalPoly(table), _const(1))
    for n, (b, c) in zip(xi, PAIR_LABELS):
        if n:
            rot = _petal_rotation(table, centre, _LABEL_POLY[b](), _LABEL_POLY[c]())
            total = total.add(_rotation_power(rot, n, table))
    numerator = total.cos - RadicalPoly.constant(table, total.den)
    return CosineExpansion(kind, xi, numerator, total.den)


# ------------------------------------------------------------------
# Detrig
# ------------------------------------------------------------------

def detrig(expr: CosineExpansion, term_cap: int = DEFAULT_TERM_CAP) -> Poly:
    """
    Integer polynomial vanishing wherever expr.numerator vanishes.

    Repeatedly picks the radical carried by the fewest terms, writes the
    expression as sqrt(q) * L + right and replaces it by q * L^2 - right^2.
    """
    current = expr.numerator
    table = current.table
    steps = 0
    while True:
        rads = current.radicals()
        if not rads:
            break
        i = min(rads, key=lambda k: (current.radical_weight(k), k))
        left, right = current.split(i)
        current = (left * left).scale(table[i]) - right * right
        steps += 1
        count = current.term_count()
        logger.debug("[Symbolic] detrig {} step {}: {} terms", expr.xi, steps, count)
        if count > term_cap:
            raise ResourceBudgetError(
                f"detrig of {expr.kind} {expr.xi} exceeded the term cap ({count} > {term_cap})",
                used=count, cap=term_cap)
    p = current.to_poly()
    if p.is_zero:
        logger.warning("[Symbolic] detrig {} {} collapsed to zero", expr.kind, expr.xi)
        return p
    if p.LC() < 0:
        p = -p
    return p


def contour_poly(kind: str, xi: Sequence[int], term_cap: int = DEFAULT_TERM_CAP) -> Poly:
    return detrig(cos_sum_expr(kind, xi), term_cap)


# ------------------------------------------------------------------
# Boundary specialisations
# ------------------------------------------------------------------

@dataclass
class BoundaryPolys:
    diagonal: Optional[Poly]   # p(r, r), in r
    at_one: Optional[Poly]     # p(1, s), in s
    at_zero: Optional[Poly]    # p(r, 0), in r
    ray: Optional[Poly]        # lowest-order coefficient of p(r, m r), in m
    degenerate: List[str] = field(default_factory=list)


def _univariate(coeffs: Dict[int, int], gen) -> Optional[Poly]:
    coeffs = {k: v for k, v in coeffs.items() if v}
    if not coeffs:
        return None
    return Poly.from_dict({(k,): v for k, v in coeffs.items()}, gen, domain=ZZ)


def boundary_polys_of(p: Poly) -> BoundaryPolys:
    diag: Dict[int, int] = {}
    one: Dict[int, int] = {}
    zero: Dict[int, int] = {}
    by_order: Dict[int, Dict[int, int]] = {}
    for (i, j), c in p.terms():
        c = int(c)
        diag[i + j] = diag.get(i + j, 0) + c
        one[j] = one.get(j, 0) + c
        if j == 0:
            zero[i] = zero.get(i, 0) + c
        by_order.setdefault(i + j, {})
        by_order[i + j][j] = by_order[i + j].get(j, 0) + c
    ray = None
    for order in sorted(by_order):
        ray = _univariate(by_order[order], M)
        if ray is not None:
            break
    out = BoundaryPolys(_univariate(diag, R), _univariate(one, S), _univariate(zero, R), ray)
    for name in ("diagonal", "at_one", "at_zero", "ray"):
        if getattr(out, name) is None:
            out.degenerate.append(name)
    return out


def boundary_polys(kind: str, xi: Sequence[int], term_cap: int = DEFAULT_TERM_CAP) -> BoundaryPolys:
    """Specialisations of the contour polynomial of xi . kind = 2pi."""
    return boundary_polys_of(contour_poly(kind, xi, term_cap))


# ------------------------------------------------------------------
# Elimination
# ------------------------------------------------------------------

def eliminate(p: Poly, q: Poly, which: str, strip_common: bool = False) -> Poly:
    """Resultant of p and q with respect to `which` ('r' or 's')."""
    if which not in ("r", "s"):
        raise UsageError(f"Unknown variable {which!r}. Valid variables: ['r', 's']")
    gen, other = (R, S) if which == "r" else (S, R)
    pp, qq = p.reorder(gen, other), q.reorder(gen, other)
    res = pp.resultant(qq)
    if res.is_zero:
        if not strip_common:
            raise EliminationError(f"resultant in {which} vanishes: inputs share a component")
        g = pp.gcd(qq)
        logger.info("[Symbolic] dividing out common factor of degree {}", g.total_degree())
        return eliminate(p.exquo(g.reorder(*GENS)), q.exquo(g.reorder(*GENS)), which)
    res = Poly(res.as_expr(), other, domain=ZZ) if res.gens != (other,) else res
    if res.LC() < 0:
        res = -res
    return res


# ------------------------------------------------------------------
# Real algebraic numbers
# ------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraicNumber:
    """The unique root of a square-free `poly` in [lo, hi]."""
    poly: Poly
    lo: Rational
    hi: Rational

    @property
    def width(self) -> Rational:
        return self.hi - self.lo

    def refine(self, eps) -> "AlgebraicNumber":
        if self.lo == self.hi or self.width <= eps:
            return self
        lo, hi = self.poly.refine_root(self.lo, self.hi, eps=Rational(eps))
        return AlgebraicNumber(self.poly, Rational(lo), Rational(hi))

    def approx(self, digits: int = DEFAULT_DIGITS) -> mpf:
        tight = self.refine(Rational(1, 10 ** (digits + 2)))
        with mp.workdps(digits + GUARD_DIGITS):
            mid = (tight.lo + tight.hi) / 2
            return mpf(int(mid.p)) / int(mid.q)

    def to_record(self, digits: int = DEFAULT_DIGITS) -> dict:
        return {
            "poly": poly_to_json(self.poly),
            "interval": [str(self.lo), str(self.hi)],
            "decimal": mp.nstr(self.approx(digits), digits),
        }


def _on_gen(p: Poly, gen) -> Poly:
    return p if p.gens == (gen,) else Poly(p.all_coeffs(), gen, domain=ZZ)


def isolate_roots(f: Poly, lo=0, hi=1) -> List[AlgebraicNumber]:
    """Isolating intervals of the distinct real roots of f in the open (lo, hi)."""
    if f.is_zero or f.degree() <= 0:
        return []
    g = f.sqf_part()
    lo, hi = Rational(lo), Rational(hi)
    out = []
    for (a, b), _mult in g.intervals(inf=lo, sup=hi):
        a, b = Rational(a), Rational(b)
        if a == b and (a == lo or a == hi):
            continue
        if a == lo and g.eval(lo) == 0:
            continue
        if b == hi and g.eval(hi) == 0:
            continue
        out.append(AlgebraicNumber(g, a, b))
    return sorted(out, key=lambda x: x.lo)


def count_real_roots(f: Poly, lo, hi) -> int:
    """Distinct real roots in (lo, hi], by Sturm sign variations."""
    g = f.sqf_part()
    if g.degree() <= 0:
        return 0
    seq = sturm(g)

    def variations(x) -> int:
        signs = [v for v in (p.eval(x) for p in seq) if v != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))

    return variations(Rational(lo)) - variations(Rational(hi))


def nearest_root(f: Poly, value, radius) -> Optional[AlgebraicNumber]:
    """The root of f in (value - radius, value + radius) closest to value."""
    value, radius = Rational(str(value)), Rational(str(radius))
    roots = isolate_roots(f, value - radius, value + radius)
    if not roots:
        return None
    roots = [x.refine(radius / 1000) for x in roots]
    return min(roots, key=lambda x: abs((x.lo + x.hi) / 2 - value))


def algebraic_equal(x: AlgebraicNumber, y: AlgebraicNumber) -> bool:
    """
    Exact equality: x == y iff gcd(poly_x, poly_y) has a root in the
    intersection of the two isolating intervals.
    """
    lo, hi = max(x.lo, y.lo), min(x.hi, y.hi)
    if lo > hi:
        return False
    gen = x.poly.gen
    g = x.poly.gcd(_on_gen(y.poly, gen))
    if g.degree() <= 0:
        return False
    if lo == hi:
        return g.eval(lo) == 0
    return g.count_roots(lo, hi) > 0


def algebraic_compare(x: AlgebraicNumber, y: AlgebraicNumber) -> int:
    """-1, 0 or 1 as x <, ==, > y."""
    if algebraic_equal(x, y):
        return 0
    eps = max(x.width, y.width)
    while not (x.hi < y.lo or y.hi < x.lo):
        eps = eps / 16 if eps else Rational(1, 10 ** 6)
        x, y = x.refine(eps), y.refine(eps)
    return -1 if x.hi < y.lo else 1


# ------------------------------------------------------------------
# Certificates and serialisation
# ------------------------------------------------------------------

def poly_to_json(p: Poly) -> dict:
    """Dense ascending coefficient arrays: coeffs[i] (or coeffs[i][j] for r^i s^j)."""
    names = [str(g) for g in p.gens]
    if len(p.gens) == 1:
        coeffs = [int(c) for c in reversed(p.all_coeffs())] if not p.is_zero else [0]
        return {"vars": names, "coeffs": coeffs}
    deg_r, deg_s = (max(p.degree(g), 0) for g in p.gens)
    grid = [[0] * (deg_s + 1) for _ in range(deg_r + 1)]
    for (i, j), c in p.terms():
        grid[i][j] = int(c)
    return {"vars": names, "coeffs": grid}


def poly_from_json(record: dict) -> Poly:
    gens = symbols(" ".join(record["vars"]))
    if len(record["vars"]) == 1:
        coeffs = record["coeffs"]
        return Poly(list(reversed(coeffs)), gens, domain=ZZ)
    terms = {}
    for i, row in enumerate(record["coeffs"]):
        for j, c in enumerate(row):
            if c:
                terms[(i, j)] = c
    return Poly.from_dict(terms or {(0, 0): 0}, *gens, domain=ZZ)


@dataclass
class Certificate:
    eta: Tuple[int, ...]
    zeta: Tuple[int, ...]
    p: Poly
    q: Poly
    r_poly: Poly
    s_poly: Poly
    r_root: Optional[AlgebraicNumber]
    s_root: Optional[AlgebraicNumber]
    digits: int

    @property
    def complete(self) -> bool:
        return self.r_root is not None and self.s_root is not None

    def to_record(self) -> dict:
        return {
            "eta": list(self.eta),
            "zeta": list(self.zeta),
            "p": poly_to_json(self.p),
            "q": poly_to_json(self.q),
            "r_poly": poly_to_json(self.r_poly),
            "s_poly": poly_to_json(self.s_poly),
            "r": self.r_root.to_record(self.digits) if self.r_root else None,
            "s": self.s_root.to_record(self.digits) if self.s_root else None,
            "digits": self.digits,
        }

    @classmethod
    def from_record(cls, record: dict) -> "Certificate":
        def root(rec):
            if rec is None:
                return None
            lo, hi = rec["interval"]
            return AlgebraicNumber(poly_from_json(rec["poly"]), Rational(lo), Rational(hi))

        try:
            return cls(
                eta=tuple(record["eta"]), zeta=tuple(record["zeta"]),
                p=poly_from_json(record["p"]), q=poly_from_json(record["q"]),
                r_poly=poly_from_json(record["r_poly"]), s_poly=poly_from_json(record["s_poly"]),
                r_root=root(record["r"]), s_root=root(record["s"]),
                digits=int(record["digits"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PreconditionError(f"malformed certificate record: {exc}") from None


def certify_point(eta: Sequence[int], zeta: Sequence[int], r, s,
                  digits: int = DEFAULT_DIGITS, term_cap: int = DEFAULT_TERM_CAP) -> Certificate:
    """
    Exact values of one intercept: detrig both contours, reduce to square-free
    parts, eliminate each variable and isolate the roots next to (r, s).
    """
    p = contour_poly("alpha", eta, term_cap).sqf_part()
    q = contour_poly("beta", zeta, term_cap).sqf_part()
    logger.info("[Symbolic] certify {} {}: deg p = {}, deg q = {}",
                tuple(eta), tuple(zeta), p.total_degree(), q.total_degree())
    r_poly = eliminate(p, q, "s", strip_common=True)
    s_poly = eliminate(p, q, "r", strip_common=True)
    radius = Rational(1, 10 ** max(digits // 2, 8))
    return Certificate(
        eta=tuple(eta), zeta=tuple(zeta), p=p, q=q,
        r_poly=r_poly, s_poly=s_poly,
        r_root=nearest_root(r_poly, mp.nstr(to_scalar(r), digits), radius),
        s_root=nearest_root(s_poly, mp.nstr(to_scalar(s), digits), radius),
        digits=digits,
    )


def vanishes_at(f: Poly, x: AlgebraicNumber) -> bool:
    """Exact test of f(x) == 0 for univariate f."""
    if f.is_zero:
        return True
    g = x.poly.gcd(_on_gen(f, x.poly.gen))
    if g.degree() <= 0:
        return False
    if x.lo == x.hi:
        return g.eval(x.lo) == 0
    return g.count_roots(x.lo, x.hi) > 0


def confirm_gamma(xi: Sequence[int], cert: Certificate, term_cap: int = DEFAULT_TERM_CAP) -> bool:
    """
    Exact check that xi . gamma = 2pi at a certified point: the detrig
    polynomial of xi . gamma, eliminated against a contour through the point,
    must vanish at both certified coordinates.
    """
    if not cert.complete:
        raise PreconditionError("certificate has no isolated roots to confirm against")
    g = contour_poly("gamma", xi, term_cap).sqf_part()
    for contour in (cert.p, cert.q):
        try:
            r_res = eliminate(g, contour, "s")
            s_res = eliminate(g, contour, "r")
        except EliminationError:
            logger.debug("[Symbolic] gamma {} shares a component with a contour", tuple(xi))
            continue
        return vanishes_at(r_res, cert.r_root) and vanishes_at(s_res, cert.s_root)
    raise EliminationError(f"gamma {tuple(xi)} shares components with both contours")
