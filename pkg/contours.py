"""
contours — the 2pi-contours of eta.alpha and zeta.beta and their intercepts.

For an snec tuple eta the set {f_eta(r, s) = 2pi} inside 0 < s < r < 1 is
the graph s = phi(r) over an interval (a, 1); for an rnec tuple zeta it is
either s = psi(r) over (c, d) or, when zeta is "vertical", the line
r = r_vert. An intercept of the two contours is a candidate pair of radii
(r0, s0) for a compact packing.

All root finding is bisection over brackets whose endpoint signs are known
in closed form, so open endpoints are never evaluated.

Public API:
  eval_f(kind, xi, r, s, digits)
  phi_eval(eta, r, digits) / psi_eval(zeta, r, digits)
  vertical_abscissa(zeta, digits)
  profile(kind, xi, digits)          -> ContourProfile
  trace_contour(kind, xi, samples, digits)
  intercept(pair, digits, ...)       -> InterceptResult
  compute_L(pairs, digits, mapper)   -> InterceptCatalog
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger
from mpmath import mp, mpf

from angles import (
    DEFAULT_DIGITS, GUARD_DIGITS, check_radii, closure_angle_vector, origin_limit_angles, to_scalar,
)
from errors import DomainError, PreconditionError, UsageError
from tuples import AngleCount, CandidatePair, check, dot

FOUND = "found"
NONE = "none"
AMBIGUOUS = "ambiguous"

# Condition names, shared with resolver.py
COND_ENDPOINTS = "a<d"
COND_ORIGIN = "origin-slope"
COND_AT_ONE = "value-at-one"
COND_VERTICAL = "vertical"
COND_RESIDUAL = "residual"


def threshold(digits: int) -> mpf:
    """Gap below which an inequality is called ambiguous."""
    return mpf(10) ** (-(digits // 2))


def _two_pi() -> mpf:
    return 2 * mp.pi


# ------------------------------------------------------------------
# Bisection
# ------------------------------------------------------------------

def bisect_root(fn: Callable[[mpf], mpf], lo: mpf, hi: mpf,
                lo_positive: bool, digits: int) -> mpf:
    """
    Root of fn in (lo, hi) where the sign of fn near lo is known.

    Only midpoints are evaluated. Iterations are capped at 4 * digits,
    which shrinks the bracket by more than 10^-digits relative to its width.
    """
    for _ in range(4 * digits):
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break
        value = fn(mid)
        if value == 0:
            return mid
        if (value > 0) == lo_positive:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ------------------------------------------------------------------
# Evaluation
# ------------------------------------------------------------------

def _f(kind: str, xi: Sequence[int], r, s, digits: int) -> mpf:
    """xi . kind(r, s) on the closure of the domain, skipping zero coordinates."""
    with mp.workdps(digits + GUARD_DIGITS):
        angles = closure_angle_vector(kind, r, s, digits, weights=xi)
        return mp.fsum(n * a for n, a in zip(xi, angles) if n)


def eval_f(kind: str, xi: Sequence[int], r, s, digits: int = DEFAULT_DIGITS) -> mpf:
    """xi . kind(r, s) for 0 < s < r < 1."""
    with mp.workdps(digits + GUARD_DIGITS):
        r, s = to_scalar(r), to_scalar(s)
        check_radii(r, s)
        return _f(kind, xi, r, s, digits)


def _require(name: str, xi) -> None:
    if not check(name, xi):
        raise PreconditionError(f"{tuple(xi)} does not satisfy {name}")


def _alpha_diagonal_count(eta) -> int:
    # f_eta(r, r) as r -> 0 equals (pi/6) * this
    return dot(eta, (6, 2, 2, 3, 3, 2))


def _beta_side_count(zeta) -> int:
    # f_zeta(r, 0+) as r -> 0 equals (pi/6) * this
    return dot(zeta, (6, 2, 0, 3, 0, 0))


def is_vertical(zeta) -> bool:
    return check("rverticalcont", zeta)


def phi_eval(eta: AngleCount, r, digits: int = DEFAULT_DIGITS) -> Optional[mpf]:
    """
    The unique s in (0, r) with f_eta(r, s) = 2pi, or None.

    f_eta is strictly decreasing in s and exceeds 2pi for s <= r/10, so the
    root lies in (r/10, r) whenever f_eta(r, r) < 2pi.
    """
    with mp.workdps(digits + GUARD_DIGITS):
        r = to_scalar(r)
        if not (0 < r < 1):
            raise DomainError(f"phi_eval needs r in (0, 1), got {r}")
        two_pi = _two_pi()
        if _f("alpha", eta, r, r, digits) >= two_pi:
            return None
        return bisect_root(lambda s: eval_f("alpha", eta, r, s, digits) - two_pi,
                           r / 10, r, True, digits)


def _beta_side_limit(zeta, r, digits: int) -> mpf:
    """f_zeta(r, 0+): only coordinates 1, 2, 4 survive."""
    with mp.workdps(digits + GUARD_DIGITS):
        r = to_scalar(r)
        beta = closure_angle_vector("beta", r, r, digits)
        return zeta[0] * beta[0] + zeta[1] * beta[1] + zeta[3] * beta[3]


def psi_eval(zeta: AngleCount, r, digits: int = DEFAULT_DIGITS) -> Optional[mpf]:
    """The unique s in (0, r) with f_zeta(r, s) = 2pi, or None."""
    if is_vertical(zeta):
        raise PreconditionError(f"{tuple(zeta)} is a vertical contour; use vertical_abscissa")
    with mp.workdps(digits + GUARD_DIGITS):
        r = to_scalar(r)
        if not (0 < r < 1):
            raise DomainError(f"psi_eval needs r in (0, 1), got {r}")
        two_pi = _two_pi()
        if _beta_side_limit(zeta, r, digits) >= two_pi:
            return None
        if _f("beta", zeta, r, r, digits) <= two_pi:
            return None
        return bisect_root(lambda s: eval_f("beta", zeta, r, s, digits) - two_pi,
                           mpf(0), r, False, digits)


def vertical_abscissa(zeta: AngleCount, digits: int = DEFAULT_DIGITS) -> mpf:
    """r_vert with zeta1*<r11> + zeta2*pi/3 + zeta4*<r1r> = 2pi."""
    if not is_vertical(zeta):
        raise PreconditionError(f"{tuple(zeta)} is not a vertical contour")
    return _beta_c_endpoint(zeta, digits)


def _beta_c_endpoint(zeta, digits: int) -> mpf:
    with mp.workdps(digits + GUARD_DIGITS):
        if _beta_side_count(zeta) <= 12:
            return mpf(0)
        two_pi = _two_pi()
        return bisect_root(lambda r: _beta_side_limit(zeta, r, digits) - two_pi,
                           mpf(0), mpf(1), True, digits)


# ------------------------------------------------------------------
# Profiles
# ------------------------------------------------------------------

@dataclass
class ContourProfile:
    """
    Endpoint data of one contour.

    alpha: domain (a, 1); origin_slope = lim phi(r)/r when a = 0;
           value_at_one = lim phi(r) as r -> 1.
    beta:  domain (c, d); origin_slope = lim psi(r)/r when c = 0;
           value_at_one = lim psi(r) as r -> 1 when d = 1.
    The *_is_zero / d_is_one flags are decided exactly from integer data.
    """
    kind: str
    xi: AngleCount
    digits: int
    a: Optional[mpf] = None
    c: Optional[mpf] = None
    d: Optional[mpf] = None
    a_is_zero: bool = False
    c_is_zero: bool = False
    d_is_one: bool = False
    vertical: bool = False
    origin_slope: Optional[mpf] = None
    value_at_one: Optional[mpf] = None
    complete: bool = True
    issues: List[str] = field(default_factory=list)

    def to_record(self) -> dict:
        def fmt(x):
            return None if x is None else mp.nstr(x, self.digits)
        return {
            "kind": self.kind,
            "xi": list(self.xi),
            "digits": self.digits,
            "a": fmt(self.a),
            "c": fmt(self.c),
            "d": fmt(self.d),
            "vertical": self.vertical,
            "origin_slope": fmt(self.origin_slope),
            "value_at_one": fmt(self.value_at_one),
            "complete": self.complete,
            "issues": list(self.issues),
        }


def _alpha_profile(eta, digits: int) -> ContourProfile:
    _require("snec", eta)
    prof = ContourProfile("alpha", tuple(eta), digits)
    two_pi = _two_pi()
    diag = _alpha_diagonal_count(eta)

    # ── a: f_eta(r, r) = 2pi, f decreasing along the diagonal ──
    if diag <= 12:
        prof.a, prof.a_is_zero = mpf(0), True
    else:
        prof.a = bisect_root(lambda r: _f("alpha", eta, r, r, digits) - two_pi,
                             mpf(0), mpf(1), True, digits)

    # ── origin slope: sum eta_i * acos(L_i(m)) = 2pi, decreasing in m ──
    if prof.a_is_zero:
        if diag == 12:
            prof.origin_slope = mpf(1)
        else:
            prof.origin_slope = bisect_root(
                lambda m: mp.fsum(n * t for n, t in zip(eta, origin_limit_angles("alpha", m, digits))) - two_pi,
                mpf(0), mpf(1), True, digits)

    # ── value at one: f_eta(1, s) = 2pi ──
    prof.value_at_one = bisect_root(lambda s: _f("alpha", eta, 1, s, digits) - two_pi,
                                    mpf(0), mpf(1), True, digits)
    return prof


def _beta_profile(zeta, digits: int) -> ContourProfile:
    _require("rnec", zeta)
    prof = ContourProfile("beta", tuple(zeta), digits, vertical=is_vertical(zeta))
    two_pi = _two_pi()

    prof.c = _beta_c_endpoint(zeta, digits)
    prof.c_is_zero = _beta_side_count(zeta) <= 12
    if prof.vertical:
        return prof

    # ── d: f_zeta(r, r) = 2pi, decreasing along the diagonal ──
    if sum(zeta) >= 6:
        prof.d, prof.d_is_one = mpf(1), True
    elif dot(zeta, (6, 2, 2, 3, 3, 2)) <= 12:
        prof.d = mpf(0)
        prof.complete = False
        prof.issues.append("empty domain: f_zeta(r, r) <= 2pi near the origin")
    else:
        prof.d = bisect_root(lambda r: _f("beta", zeta, r, r, digits) - two_pi,
                             mpf(0), mpf(1), True, digits)

    # ── origin slope: increasing in m ──
    if prof.c_is_zero:
        if _beta_side_count(zeta) == 12:
            prof.origin_slope = mpf(0)
        else:
            prof.origin_slope = bisect_root(
                lambda m: mp.fsum(n * t for n, t in zip(zeta, origin_limit_angles("beta", m, digits))) - two_pi,
                mpf(0), mpf(1), False, digits)

    # ── value at one, only meaningful when d = 1 ──
    if prof.d_is_one:
        if sum(zeta) == 6:
            prof.value_at_one = mpf(1)
        else:
            prof.value_at_one = bisect_root(
                lambda s: _f("beta", zeta, 1, s, digits) - two_pi,
                mpf(0), mpf(1), False, digits)

    if prof.c is not None and prof.d is not None and prof.d <= prof.c and prof.complete:
        prof.complete = False
        prof.issues.append("bracket failure: d <= c")
    return prof


def profile(kind: str, xi: Sequence[int], digits: int = DEFAULT_DIGITS) -> ContourProfile:
    xi = tuple(xi)
    with mp.workdps(digits + GUARD_DIGITS):
        if kind == "alpha":
            prof = _alpha_profile(xi, digits)
        elif kind == "beta":
            prof = _beta_profile(xi, digits)
        else:
            raise UsageError(f"Unknown contour kind {kind!r}. Valid kinds: ['alpha', 'beta']")
    logger.debug("[Contours] profile {} {}: complete={}", kind, xi, prof.complete)
    return prof


def trace_contour(kind: str, xi: Sequence[int], samples: int = 20,
                  digits: int = DEFAULT_DIGITS) -> List[Tuple[mpf, mpf]]:
    """Points of the contour on a uniform r-grid strictly inside its domain."""
    xi = tuple(xi)
    prof = profile(kind, xi, digits)
    with mp.workdps(digits + GUARD_DIGITS):
        if prof.vertical:
            r = prof.c
            return [(r, r * k / (samples + 1)) for k in range(1, samples + 1)]
        lo = prof.a if kind == "alpha" else prof.c
        hi = mpf(1) if kind == "alpha" else prof.d
        points = []
        for k in range(1, samples + 1):
            r = lo + (hi - lo) * k / (samples + 1)
            s = phi_eval(xi, r, digits) if kind == "alpha" else psi_eval(xi, r, digits)
            if s is not None:
                points.append((r, s))
        return points


# ------------------------------------------------------------------
# Intercepts
# ------------------------------------------------------------------

@dataclass
class InterceptResult:
    pair: CandidatePair
    status: str
    digits: int
    point: Optional[Tuple[mpf, mpf]] = None
    margin: Optional[mpf] = None
    ambiguous_on: List[str] = field(default_factory=list)

    def to_record(self) -> dict:
        def fmt(x):
            return None if x is None else mp.nstr(x, self.digits)
        record = {
            "eta": list(self.pair.eta),
            "zeta": list(self.pair.zeta),
            "status": self.status,
            "r": fmt(self.point[0]) if self.point else None,
            "s": fmt(self.point[1]) if self.point else None,
            "digits": self.digits,
            "margin": fmt(self.margin),
        }
        if self.ambiguous_on:
            record["ambiguous_on"] = list(self.ambiguous_on)
        return record

    @classmethod
    def from_record(cls, record: dict) -> "InterceptResult":
        digits = int(record["digits"])
        with mp.workdps(digits + GUARD_DIGITS):
            point = None
            if record.get("r") is not None:
                point = (mpf(record["r"]), mpf(record["s"]))
            margin = mpf(record["margin"]) if record.get("margin") is not None else None
        return cls(
            pair=CandidatePair(tuple(record["eta"]), tuple(record["zeta"])),
            status=record["status"],
            digits=digits,
            point=point,
            margin=margin,
            ambiguous_on=list(record.get("ambiguous_on", [])),
        )


def _residual_ok(pair: CandidatePair, r, s, digits: int) -> bool:
    bound = mpf(10) ** (-(digits - 10))
    two_pi = _two_pi()
    if abs(eval_f("alpha", pair.eta, r, s, digits) - two_pi) >= bound:
        return False
    return abs(eval_f("beta", pair.zeta, r, s, digits) - two_pi) < bound


def _decide(gaps: Dict[str, mpf], decided: Dict[str, bool], digits: int) -> Tuple[str, mpf, List[str]]:
    """Combine per-condition gaps (positive means the inequality holds)."""
    thr = threshold(digits)
    unclear = []
    margin = None
    for name, gap in gaps.items():
        if name in decided:
            if not decided[name]:
                return NONE, mpf(0), []
            continue
        if gap < -thr:
            return NONE, abs(gap), []
        if gap <= thr:
            unclear.append(name)
        else:
            margin = gap if margin is None else min(margin, gap)
    if unclear:
        return AMBIGUOUS, min(abs(gaps[n]) for n in unclear), unclear
    return FOUND, margin, []


def intercept(pair: CandidatePair, digits: int = DEFAULT_DIGITS,
              eta_profile: Optional[ContourProfile] = None,
              zeta_profile: Optional[ContourProfile] = None,
              decided: Optional[Dict[str, bool]] = None) -> InterceptResult:
    """
    Decide whether the eta- and zeta-contours meet, and where.

    `decided` fixes the truth of named conditions (used after exact
    tie-breaking); those conditions are then not tested numerically.
    """
    pair = CandidatePair(tuple(pair[0]), tuple(pair[1]))
    if digits < 30:
        raise UsageError(f"digits must be >= 30, got {digits}")
    decided = decided or {}
    with mp.workdps(digits + GUARD_DIGITS):
        if eta_profile is None or eta_profile.digits < digits:
            eta_profile = profile("alpha", pair.eta, digits)
        if zeta_profile is None or zeta_profile.digits < digits:
            zeta_profile = profile("beta", pair.zeta, digits)
        if not zeta_profile.complete:
            return InterceptResult(pair, AMBIGUOUS, digits, margin=mpf(0),
                                   ambiguous_on=list(zeta_profile.issues))

        a = eta_profile.a

        # ── vertical zeta: does phi exist at r_vert? ──
        if zeta_profile.vertical:
            r_vert = zeta_profile.c
            gaps = {COND_VERTICAL: r_vert if eta_profile.a_is_zero else r_vert - a}
            status, margin, unclear = _decide(gaps, decided, digits)
            if status != FOUND:
                return InterceptResult(pair, status, digits, margin=margin, ambiguous_on=unclear)
            s = phi_eval(pair.eta, r_vert, digits)
            if s is None:
                return InterceptResult(pair, AMBIGUOUS, digits, margin=mpf(0),
                                       ambiguous_on=[COND_VERTICAL])
            return _finish(pair, r_vert, s, margin, digits)

        # ── general case ──
        c, d = zeta_profile.c, zeta_profile.d
        gaps: Dict[str, mpf] = {}
        gaps[COND_ENDPOINTS] = d if eta_profile.a_is_zero else d - a
        if eta_profile.a_is_zero and zeta_profile.c_is_zero:
            gaps[COND_ORIGIN] = eta_profile.origin_slope - zeta_profile.origin_slope
        if zeta_profile.d_is_one:
            gaps[COND_AT_ONE] = zeta_profile.value_at_one - eta_profile.value_at_one
        status, margin, unclear = _decide(gaps, decided, digits)
        if status != FOUND:
            return InterceptResult(pair, status, digits, margin=margin, ambiguous_on=unclear)

        two_pi = _two_pi()

        def h(r):
            s = phi_eval(pair.eta, r, digits)
            if s is None:
                # numerically on the diagonal: still left of the crossing
                return mpf(1)
            return eval_f("beta", pair.zeta, r, s, digits) - two_pi

        lo = a if a > c else c
        r0 = bisect_root(h, lo, d, True, digits)
        s0 = phi_eval(pair.eta, r0, digits)
        if s0 is None:
            return InterceptResult(pair, AMBIGUOUS, digits, margin=mpf(0),
                                   ambiguous_on=[COND_RESIDUAL])
        return _finish(pair, r0, s0, margin, digits)


def _finish(pair, r, s, margin, digits) -> InterceptResult:
    if not _residual_ok(pair, r, s, digits):
        logger.warning("[Contours] residual check failed for {}", tuple(pair))
        return InterceptResult(pair, AMBIGUOUS, digits, point=(r, s), margin=mpf(0),
                               ambiguous_on=[COND_RESIDUAL])
    return InterceptResult(pair, FOUND, digits, point=(r, s), margin=margin)


# ------------------------------------------------------------------
# Catalog of L
# ------------------------------------------------------------------

@dataclass
class InterceptCatalog:
    results: List[InterceptResult]
    groups: List[List[int]]           # indices into results, found points only
    borderline: List[Tuple[int, int]]  # group pairs whose gap touches the tolerance
    digits: int

    def summary(self) -> dict:
        return {
            "pairs": len(self.results),
            "found_pairs": sum(1 for x in self.results if x.status == FOUND),
            "distinct_points": len(self.groups),
            "ambiguous_pairs": sum(1 for x in self.results if x.status == AMBIGUOUS),
            "borderline_groups": len(self.borderline),
        }


def _profile_job(args):
    kind, xi, digits = args
    return profile(kind, xi, digits)


def _intercept_job(args):
    pair, digits, eta_profile, zeta_profile = args
    return intercept(pair, digits, eta_profile, zeta_profile)


def group_points(results: List[InterceptResult], digits: int) -> Tuple[List[List[int]], List[Tuple[int, int]]]:
    """
    Group found points closer than the tolerance in both coordinates.

    Sweep over points sorted by r; consecutive groups whose gap lies between
    the tolerance and 1000x the tolerance are reported as borderline.
    """
    tol = threshold(digits)
    found = sorted((i for i, x in enumerate(results) if x.status == FOUND),
                   key=lambda i: (results[i].point[0], results[i].point[1]))
    groups: List[List[int]] = []
    for i in found:
        r, s = results[i].point
        placed = False
        for group in reversed(groups):
            gr, gs = results[group[0]].point
            if r - gr > tol:
                break
            if abs(s - gs) <= tol:
                group.append(i)
                placed = True
                break
        if not placed:
            groups.append([i])
    borderline = []
    for gi in range(len(groups)):
        r1, s1 = results[groups[gi][0]].point
        for gj in range(gi + 1, len(groups)):
            r2, s2 = results[groups[gj][0]].point
            if r2 - r1 > 1000 * tol:
                break
            if max(abs(r2 - r1), abs(s2 - s1)) <= 1000 * tol:
                borderline.append((gi, gj))
    return groups, borderline


def compute_L(pairs: Sequence[CandidatePair], digits: int = DEFAULT_DIGITS,
              mapper: Callable = map) -> InterceptCatalog:
    """Intercepts of every pair, profiles computed once per tuple first."""
    pairs = sorted(CandidatePair(tuple(p[0]), tuple(p[1])) for p in pairs)
    etas = sorted({p.eta for p in pairs})
    zetas = sorted({p.zeta for p in pairs})
    logger.info("[Contours] profiling {} eta / {} zeta tuples", len(etas), len(zetas))
    jobs = [("alpha", e, digits) for e in etas] + [("beta", z, digits) for z in zetas]
    profiles = {(p.kind, p.xi): p for p in mapper(_profile_job, jobs)}

    logger.info("[Contours] intercepting {} pairs at {} digits", len(pairs), digits)
    results = list(mapper(_intercept_job, [
        (p, digits, profiles[("alpha", p.eta)], profiles[("beta", p.zeta)]) for p in pairs
    ]))
    with mp.workdps(digits + GUARD_DIGITS):
        groups, borderline = group_points(results, digits)
    catalog = InterceptCatalog(results, groups, borderline, digits)
    logger.info("[Contours] L summary: {}", catalog.summary())
    return catalog
