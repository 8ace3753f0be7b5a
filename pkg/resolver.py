"""
AmbiguityResolver — exact tie-breaking for intercepts numerics cannot settle.

An intercept is ambiguous when one of its deciding inequalities (a < d,
origin slopes, values at r = 1, or r_vert vs a) has a gap inside the
numeric threshold. Each side of such an inequality is a root of a boundary
polynomial of the contour's detrig polynomial, so the resolver:

  1. builds both sides as exact AlgebraicNumbers next to their numeric values
  2. compares them exactly (equal -> the strict inequality fails)
  3. recomputes the intercept at doubled precision with the decided
     conditions fixed, or records a dispute when any step fails

Every decision is appended to the store's ledger. Nothing is ever silently
dropped: unresolved pairs stay ambiguous in the catalog.
"""

from typing import Dict, List, Optional, Tuple

from loguru import logger
from mpmath import mp
from sympy import Poly, Rational, ZZ

from angles import GUARD_DIGITS
from catalog_store import CatalogStore
from contours import (
    AMBIGUOUS, COND_AT_ONE, COND_ENDPOINTS, COND_ORIGIN, COND_VERTICAL, NONE,
    ContourProfile, InterceptCatalog, InterceptResult, group_points, intercept, profile,
)
from errors import Compact3Error
from symbolic import (
    M, R, S, AlgebraicNumber, BoundaryPolys, algebraic_compare, algebraic_equal,
    boundary_polys, certify_point, nearest_root,
)


class Unresolvable(Compact3Error):
    """A tie could not be pinned to exact algebraic numbers."""


_EXACT_CONDITIONS = (COND_ENDPOINTS, COND_VERTICAL, COND_ORIGIN, COND_AT_ONE)


def _rational(value: Rational, gen) -> AlgebraicNumber:
    value = Rational(value)
    return AlgebraicNumber(Poly([value.q, -value.p], gen, domain=ZZ), value, value)


class AmbiguityResolver:
    def __init__(self, store: Optional[CatalogStore] = None, term_cap: int = 5_000_000):
        self.store = store
        self.term_cap = term_cap
        self._boundaries: Dict[Tuple[str, tuple], BoundaryPolys] = {}

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------

    def _boundary(self, kind: str, xi: tuple) -> BoundaryPolys:
        key = (kind, tuple(xi))
        if key not in self._boundaries:
            self._boundaries[key] = boundary_polys(kind, xi, self.term_cap)
        return self._boundaries[key]

    def _root(self, poly: Optional[Poly], value, digits: int, what: str) -> AlgebraicNumber:
        if poly is None:
            raise Unresolvable(f"{what}: boundary polynomial degenerates to zero")
        radius = Rational(1, 10 ** max(digits // 2 - 2, 4))
        root = nearest_root(poly, mp.nstr(value, digits), radius)
        if root is None:
            raise Unresolvable(f"{what}: no root near {mp.nstr(value, 12)}")
        return root

    def _sides(self, cond: str, eta_prof: ContourProfile, zeta_prof: ContourProfile,
               digits: int) -> Tuple[AlgebraicNumber, AlgebraicNumber]:
        """(left, right) such that the condition reads left < right."""
        if cond not in _EXACT_CONDITIONS:
            raise Unresolvable(f"condition {cond!r} has no exact form")
        alpha = self._boundary("alpha", eta_prof.xi)
        beta = self._boundary("beta", zeta_prof.xi)

        def a_side() -> AlgebraicNumber:
            if eta_prof.a_is_zero:
                return _rational(0, R)
            return self._root(alpha.diagonal, eta_prof.a, digits, "a")

        if cond == COND_ENDPOINTS:
            left = a_side()
            right = (_rational(1, R) if zeta_prof.d_is_one
                     else self._root(beta.diagonal, zeta_prof.d, digits, "d"))
            return left, right
        if cond == COND_VERTICAL:
            left = a_side()
            right = self._root(beta.at_zero, zeta_prof.c, digits, "r_vert")
            return left, right
        if cond == COND_ORIGIN:
            if zeta_prof.origin_slope == 0:
                left = _rational(0, M)
            else:
                left = self._root(beta.ray, zeta_prof.origin_slope, digits, "psi slope")
            if eta_prof.origin_slope == 1:
                right = _rational(1, M)
            else:
                right = self._root(alpha.ray, eta_prof.origin_slope, digits, "phi slope")
            return left, right
        if cond == COND_AT_ONE:
            left = self._root(alpha.at_one, eta_prof.value_at_one, digits, "phi(1)")
            right = (_rational(1, S) if zeta_prof.value_at_one == 1
                     else self._root(beta.at_one, zeta_prof.value_at_one, digits, "psi(1)"))
            return left, right
        raise AssertionError(cond)

    def _log(self, action: str, result: InterceptResult, detail: dict) -> None:
        if self.store is not None:
            self.store.append_ledger(action, result.pair.eta, result.pair.zeta, detail)

    # ------------------------------------------------------------------
    # Ambiguous intercepts
    # ------------------------------------------------------------------

    def resolve_one(self, result: InterceptResult) -> InterceptResult:
        if result.status != AMBIGUOUS:
            return result
        digits = result.digits
        pair = result.pair
        logger.info("[Resolver] pair {} ambiguous on {}", tuple(pair), result.ambiguous_on)
        try:
            with mp.workdps(digits + GUARD_DIGITS):
                eta_prof = profile("alpha", pair.eta, digits)
                zeta_prof = profile("beta", pair.zeta, digits)
                decided: Dict[str, bool] = {}
                for cond in result.ambiguous_on:
                    left, right = self._sides(cond, eta_prof, zeta_prof, digits)
                    sign = algebraic_compare(left, right)
                    decided[cond] = sign < 0
                    logger.info("[Resolver]   {}: {}", cond,
                                "equal" if sign == 0 else ("holds" if sign < 0 else "fails"))
        except Compact3Error as exc:
            self._log("dispute", result, {"conditions": result.ambiguous_on, "reason": str(exc)})
            return result

        if not all(decided.values()):
            self._log("resolved-none", result, {"decided": decided})
            return InterceptResult(pair, NONE, digits, margin=mp.mpf(0))

        refined = intercept(pair, 2 * digits, decided=decided)
        if refined.status == AMBIGUOUS:
            self._log("dispute", result, {"decided": decided, "reason": "still ambiguous at doubled precision",
                                          "conditions": refined.ambiguous_on})
            return result
        self._log(f"resolved-{refined.status}", result, {"decided": decided, "digits": refined.digits})
        return refined

    def resolve(self, results: List[InterceptResult]) -> List[InterceptResult]:
        pending = sum(1 for x in results if x.status == AMBIGUOUS)
        if not pending:
            logger.info("[Resolver] nothing ambiguous to resolve")
            return list(results)
        logger.info("[Resolver] resolving {} ambiguous pair(s)", pending)
        return [self.resolve_one(x) for x in results]

    # ------------------------------------------------------------------
    # Borderline point groups
    # ------------------------------------------------------------------

    def same_point(self, a: InterceptResult, b: InterceptResult) -> bool:
        """Exact comparison of two found intercepts via their certificates."""
        digits = max(a.digits, b.digits)
        ca = certify_point(a.pair.eta, a.pair.zeta, a.point[0], a.point[1], digits, self.term_cap)
        cb = certify_point(b.pair.eta, b.pair.zeta, b.point[0], b.point[1], digits, self.term_cap)
        if not (ca.complete and cb.complete):
            raise Unresolvable("certificate without isolated roots")
        return algebraic_equal(ca.r_root, cb.r_root) and algebraic_equal(ca.s_root, cb.s_root)

    def resolve_borderline(self, catalog: InterceptCatalog) -> InterceptCatalog:
        if not catalog.borderline:
            return catalog
        results = catalog.results
        merge: Dict[int, int] = {}
        for gi, gj in catalog.borderline:
            a, b = results[catalog.groups[gi][0]], results[catalog.groups[gj][0]]
            try:
                equal = self.same_point(a, b)
            except Compact3Error as exc:
                self._log("dispute", a, {"other": [list(b.pair.eta), list(b.pair.zeta)],
                                         "reason": str(exc)})
                continue
            self._log("merged" if equal else "distinct", a,
                      {"other": [list(b.pair.eta), list(b.pair.zeta)]})
            if equal:
                merge[gj] = merge.get(gi, gi)

        groups: List[List[int]] = []
        index_of: Dict[int, int] = {}
        for g, members in enumerate(catalog.groups):
            target = merge.get(g)
            if target is not None and target in index_of:
                groups[index_of[target]].extend(members)
            else:
                index_of[g] = len(groups)
                groups.append(list(members))
        logger.info("[Resolver] borderline: {} -> {} groups", len(catalog.groups), len(groups))
        return InterceptCatalog(results, groups, [], catalog.digits)


def resolve_catalog(catalog: InterceptCatalog, store: Optional[CatalogStore] = None,
                    term_cap: int = 5_000_000) -> InterceptCatalog:
    resolver = AmbiguityResolver(store, term_cap)
    results = resolver.resolve(catalog.results)
    with mp.workdps(catalog.digits + GUARD_DIGITS):
        groups, borderline = group_points(results, catalog.digits)
    return resolver.resolve_borderline(InterceptCatalog(results, groups, borderline, catalog.digits))
