"""
Pipeline — runs one CLI subcommand end to end.

Responsibilities:
  - Generates a run_id and writes the run manifest (config + artifacts)
  - Owns the worker pool; library code only ever sees a `mapper`
  - Dispatches the subcommand to its handler and collects artifact paths
  - Runs the published checks for `reproduce`

Library modules stay free of I/O; every file is written through the
CatalogStore here.
"""

import itertools
import random
import uuid
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import Callable, Dict, List, Optional

from loguru import logger
from mpmath import mp, mpf
from sympy import Poly, ZZ

import reference_data as ref
from angles import GUARD_DIGITS, angle_vector, ray_derivative
from catalog_store import CatalogStore
from config import RunConfig
from contours import FOUND, compute_L, intercept, profile, trace_contour
from errors import PreconditionError, UsageError, VerificationFailure
from gamma_search import make_query, search
from packing import (
    build_corona, grow_patch, packing_from_record, packing_to_record, radii_for,
    render_svg, verify,
)
from resolver import resolve_catalog
from symbolic import (
    R, S, Certificate, certify_point, confirm_gamma, contour_poly, eliminate, eval_poly,
    isolate_roots, poly_to_json,
)
from tuples import (
    CandidatePair, brute_force_realizable, classify, decode_cycle, enumerate_K,
    enumerate_snec, parse_tuple, seq_realizable,
)

_CHUNK = 64


def _dash(xi) -> str:
    return "-".join(str(v) for v in xi)


def _example(name: str) -> dict:
    for ex in ref.EXAMPLES:
        if ex["name"] == name:
            return ex
    raise UsageError(f"Unknown example {name!r}. Valid examples: {[e['name'] for e in ref.EXAMPLES]}")


def _check(name: str, expected, observed, ok: bool) -> dict:
    mark = "ok" if ok else "FAILED"
    logger.info("[Reproduce] {:<28} {}", name, mark)
    return {"check": name, "expected": str(expected), "observed": str(observed), "ok": bool(ok)}


class Pipeline:
    def __init__(self, config: RunConfig, store: Optional[CatalogStore] = None):
        self.config = config
        self.store = store or CatalogStore(config.out_dir)
        self.run_id = str(uuid.uuid4())[:12]
        self.artifacts: List[Path] = []
        self._pool: Optional[ProcessPoolExecutor] = None

    # ------------------------------------------------------------------
    # Worker pool
    # ------------------------------------------------------------------

    def mapper(self) -> Callable:
        if self.config.jobs <= 1:
            return map
        if self._pool is None:
            self._pool = ProcessPoolExecutor(max_workers=self.config.jobs)
        return partial(self._pool.map, chunksize=_CHUNK)

    def _close_pool(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    # ------------------------------------------------------------------
    # Entry point
    # ------------------------------------------------------------------

    def run(self, command: str, args) -> dict:
        handlers = self._handlers()
        if command not in handlers:
            raise UsageError(f"Unknown command {command!r}. Valid commands: {sorted(handlers)}")
        logger.info("[Pipeline] run {}: {}", self.run_id, command)
        self.store.init_run(self.run_id, command, self.config.to_record())
        result: dict = {}
        try:
            result = handlers[command](args)
            return result
        finally:
            self._close_pool()
            # partial artifacts are recorded even when the handler raised
            self.store.finish_run(self.run_id, self.artifacts, result)
            logger.info("[Pipeline] {}", self.store.summary())

    def _handlers(self) -> Dict[str, Callable]:
        return {
            "enumerate-s": self._enumerate_s,
            "enumerate-k": self._enumerate_k,
            "intercepts": self._intercepts,
            "profile": self._profile,
            "detrig": self._detrig,
            "eliminate": self._eliminate,
            "certify": self._certify,
            "gamma-search": self._gamma_search,
            "corona": self._corona,
            "grow": self._grow,
            "verify": self._verify,
            "render": self._render,
            "reproduce": self._reproduce,
        }

    def _keep(self, path: Path) -> Path:
        self.artifacts.append(path)
        return path

    # ------------------------------------------------------------------
    # Tuples
    # ------------------------------------------------------------------

    def _enumerate_s(self, args) -> dict:
        tuples = enumerate_snec(args.total_cap)
        self._keep(self.store.write_tuples("snec", tuples, self.config.fmt))
        return {"count": len(tuples)}

    def _enumerate_k(self, args) -> dict:
        pairs = enumerate_K(args.zeta3_cap, self.mapper())
        self._keep(self.store.write_pairs("K", pairs, self.config.fmt))
        return {"count": len(pairs)}

    # ------------------------------------------------------------------
    # Contours
    # ------------------------------------------------------------------

    def _load_pairs(self, source: str):
        if source in ("examples", "examples9"):
            return "L_examples", [CandidatePair(ex["eta"], ex["zeta"]) for ex in ref.EXAMPLES]
        if source == "K":
            return "L", enumerate_K(mapper=self.mapper())
        path = Path(source)
        if not path.exists():
            raise UsageError(f"pairs file not found: {source}")
        return f"L_{path.stem}", [CandidatePair(e, z) for e, z in self.store.read_pairs(source)]

    def _intercepts(self, args) -> dict:
        name, pairs = self._load_pairs(args.pairs)
        catalog = compute_L(pairs, self.config.digits, self.mapper())
        if not args.no_resolve:
            catalog = resolve_catalog(catalog, self.store, self.config.term_cap)
        records = [x.to_record() for x in catalog.results]
        self._keep(self.store.write_catalog(name, records, self.config.fmt))
        summary = catalog.summary()
        summary["ledger"] = {
            action: len(self.store.read_ledger(action))
            for action in ("resolved-none", "resolved-found", "merged", "distinct", "dispute")
        }
        self._keep(self.store.write_summary(name, summary))
        return summary

    def _profile(self, args) -> dict:
        xi = parse_tuple(args.xi)
        digits = self.config.digits
        record = profile(args.kind, xi, digits).to_record()
        record["predicates"] = classify(xi)
        if args.samples:
            record["trace"] = [[mp.nstr(r, digits), mp.nstr(s, digits)]
                               for r, s in trace_contour(args.kind, xi, args.samples, digits)]
        self._keep(self.store.write_record("catalogs", f"profile_{args.kind}_{_dash(xi)}", record))
        return {"complete": record["complete"], "issues": record["issues"]}

    # ------------------------------------------------------------------
    # Symbolic
    # ------------------------------------------------------------------

    def _detrig(self, args) -> dict:
        xi = parse_tuple(args.xi)
        p = contour_poly(args.kind, xi, self.config.term_cap)
        record = {"kind": args.kind, "xi": list(xi), "poly": poly_to_json(p)}
        self._keep(self.store.write_record("certificates", f"detrig_{args.kind}_{_dash(xi)}", record))
        return {"total_degree": p.total_degree(), "terms": len(p.terms())}

    def _eliminate(self, args) -> dict:
        eta, zeta = parse_tuple(args.eta), parse_tuple(args.zeta)
        p = contour_poly("alpha", eta, self.config.term_cap).sqf_part()
        q = contour_poly("beta", zeta, self.config.term_cap).sqf_part()
        res = eliminate(p, q, args.var, strip_common=True)
        digits = self.config.digits
        roots = [mp.nstr(x.approx(digits), digits) for x in isolate_roots(res, 0, 1)]
        record = {"eta": list(eta), "zeta": list(zeta), "eliminated": args.var,
                  "resultant": poly_to_json(res), "roots_in_unit_interval": roots}
        self._keep(self.store.write_record(
            "certificates", f"resultant_{args.var}_{_dash(eta)}_{_dash(zeta)}", record))
        return {"degree": res.degree(), "roots_in_unit_interval": len(roots)}

    def _certify(self, args) -> dict:
        pair = CandidatePair(parse_tuple(args.eta), parse_tuple(args.zeta))
        digits = self.config.digits
        found = intercept(pair, digits)
        if found.status != FOUND:
            raise PreconditionError(f"{tuple(pair)} has no intercept ({found.status})")
        cert = certify_point(pair.eta, pair.zeta, found.point[0], found.point[1],
                             digits, self.config.term_cap)
        self._keep(self.store.write_certificate(pair.eta, pair.zeta, cert.to_record()))
        if not cert.complete:
            raise VerificationFailure(f"no isolated root next to the intercept of {tuple(pair)}")
        return {"r": mp.nstr(cert.r_root.approx(digits), 20), "s": mp.nstr(cert.s_root.approx(digits), 20)}

    # ------------------------------------------------------------------
    # Gamma search
    # ------------------------------------------------------------------

    def _point_from_args(self, args):
        if args.certificate:
            cert = self.store.read_record(args.certificate)
            try:
                return cert["r"]["decimal"], cert["s"]["decimal"]
            except (KeyError, TypeError):
                raise UsageError(f"{args.certificate} holds no certified point") from None
        if args.r is None or args.s is None:
            raise UsageError("gamma-search needs --r and --s, or --certificate")
        return args.r, args.s

    def _gamma_search(self, args) -> dict:
        if args.confirm and not args.certificate:
            raise UsageError("--confirm needs --certificate")
        r, s = self._point_from_args(args)
        cfg = self.config
        query = make_query(r, s, cfg.tolerance, cfg.budget_nodes, cfg.digits)
        outcome = search(query, cfg.jobs)
        record = outcome.to_record()
        with mp.workdps(cfg.digits + GUARD_DIGITS):
            gamma = angle_vector("gamma", query.r, query.s, cfg.digits)
            record["residuals"] = [
                mp.nstr(abs(mp.fsum(n * g for n, g in zip(xi, gamma)) - 2 * mp.pi), 5)
                for xi in outcome.solutions
            ]
        record["r"], record["s"] = str(r), str(s)
        if args.confirm:
            cert = Certificate.from_record(self.store.read_record(args.certificate))
            record["confirmed"] = [confirm_gamma(xi, cert, cfg.term_cap) for xi in outcome.solutions]
        self._keep(self.store.write_record("catalogs", f"gamma_{self.run_id}", record))
        return {"status": outcome.status, "solutions": record["solutions"], "nodes": outcome.nodes,
                "confirmed": record.get("confirmed")}

    # ------------------------------------------------------------------
    # Packings
    # ------------------------------------------------------------------

    def _corona(self, args) -> dict:
        xi = parse_tuple(args.xi)
        digits = self.config.digits
        with mp.workdps(digits + GUARD_DIGITS):
            corona = build_corona(args.centre, decode_cycle(xi), radii_for(args.r, args.s), digits)
        name = f"corona_{args.centre}_{_dash(xi)}"
        self._keep(self.store.write_packing(name, packing_to_record(corona.packing)))
        self._keep(self.store.write_svg(name, render_svg(corona.packing)))
        return {"closes": corona.closes, "residual": mp.nstr(corona.residual, 5)}

    def _grow(self, args) -> dict:
        ex = _example(args.example)
        cfg = self.config
        found = intercept(CandidatePair(ex["eta"], ex["zeta"]), cfg.digits)
        if found.status != FOUND:
            raise VerificationFailure(f"{ex['name']}: intercept {found.status}")
        r0, s0 = found.point
        gamma = search(make_query(r0, s0, cfg.tolerance, cfg.budget_nodes, cfg.digits), cfg.jobs)
        rules = {"small": [ex["eta"]], "mid": [ex["zeta"]],
                 "large": gamma.solutions or [ex["xi"]]}
        with mp.workdps(cfg.digits + GUARD_DIGITS):
            seed = build_corona("small", decode_cycle(ex["eta"]), radii_for(r0, s0), cfg.digits)
            half = mpf(args.size)
            grown = grow_patch(seed.packing, (-half, -half, half, half), rules,
                               cfg.digits, args.max_circles)
            report = verify(grown.packing)
        name = f"grow_{ex['name']}"
        self._keep(self.store.write_packing(name, packing_to_record(grown.packing)))
        self._keep(self.store.write_svg(name, render_svg(grown.packing)))
        result = {**grown.to_record(), "verification": report.to_record()}
        self._keep(self.store.write_record("packings", f"{name}.report", result))
        return result

    def _load_packing(self, path: str):
        return packing_from_record(self.store.read_record(path))

    def _verify(self, args) -> dict:
        report = verify(self._load_packing(args.packing))
        record = report.to_record()
        self._keep(self.store.write_record("packings", f"{Path(args.packing).stem}.verify", record))
        if not report.ok:
            raise VerificationFailure(
                f"{len(report.overlaps)} overlap(s), {len(report.non_compact)} non-compact circle(s)")
        return record

    def _render(self, args) -> dict:
        packing = self._load_packing(args.packing)
        path = self._keep(self.store.write_svg(Path(args.packing).stem,
                                               render_svg(packing, show_tangency=args.tangency)))
        return {"svg": str(path), "circles": len(packing)}

    # ------------------------------------------------------------------
    # Reproduce
    # ------------------------------------------------------------------

    def _reproduce(self, args) -> dict:
        checks: List[dict] = []
        digits = self.config.digits

        snec = enumerate_snec()
        checks.append(_check("snec tuples", len(ref.SNEC_TABLE), len(snec),
                             set(snec) == set(ref.SNEC_TABLE)))

        pairs = enumerate_K(mapper=self.mapper())
        checks.append(_check("|K|", ref.K_SIZE, len(pairs), len(pairs) == ref.K_SIZE))

        brute = brute_force_realizable(7)
        claimed = {xi for xi in itertools.product(range(8), repeat=6)
                   if sum(xi) <= 7 and seq_realizable(xi)}
        mismatches = brute ^ claimed
        checks.append(_check("seq brute force (sum <= 7)", 0, len(mismatches), not mismatches))

        for ex in ref.EXAMPLES:
            checks.extend(self._example_checks(ex, digits))

        bracket = Poly.from_dict(ref.DETRIG_BRACKET["terms"], R, S, domain=ZZ)
        p = contour_poly("alpha", ref.DETRIG_BRACKET["eta"], self.config.term_cap)
        remainder = p.rem(bracket ** 2)
        leftover = 0 if remainder.is_zero else len(remainder.terms())
        checks.append(_check("bracket^2 divides detrig", 0, leftover, remainder.is_zero))

        for label, gen, key in (("sample radii s", S, "s"), ("sample radii r", R, "r")):
            checks.append(self._root_check(label, Poly(ref.SAMPLE_RADII[f"{key}_poly"], gen, domain=ZZ),
                                           ref.SAMPLE_RADII[key], digits))
        checks.append(self._root_check("two-radii root", Poly(ref.TWO_RADII_POLY, R, domain=ZZ),
                                       ref.TWO_RADII_ROOT, digits))
        checks.append(self._ray_derivative_check(200))

        if args.heavy:
            checks.extend(self._heavy_checks(pairs, digits))

        self._keep(self.store.write_record("runs", f"{self.run_id}.reproduce", {"checks": checks}))
        failed = [c["check"] for c in checks if not c["ok"]]
        if failed:
            raise VerificationFailure(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return {"checks": checks}

    def _ray_derivative_check(self, samples: int) -> dict:
        """Closed-form ray derivatives against finite differences at seeded random points."""
        rng = random.Random(self.config.seed)
        worst = mpf(0)
        with mp.workdps(40):
            for _ in range(samples):
                kind = rng.choice(("alpha", "beta"))
                xi = tuple(rng.randint(0, 4) for _ in range(6))
                m, r = mpf(rng.uniform(0.05, 0.95)), mpf(rng.uniform(0.05, 0.95))
                numeric = mp.diff(
                    lambda t: mp.fsum(n * v for n, v in zip(xi, angle_vector(kind, t, m * t, 40))), r)
                error = abs(ray_derivative(kind, xi, m, r, 40) - numeric) / max(1, abs(numeric))
                worst = max(worst, error)
        return _check(f"ray derivative ({samples} samples, seed {self.config.seed})", "< 1e-6",
                      mp.nstr(worst, 3), worst < mpf("1e-6"))

    def _root_check(self, label: str, poly: Poly, expected: str, digits: int) -> dict:
        with mp.workdps(digits + GUARD_DIGITS):
            tol = mpf(ref.EXAMPLE_TOLERANCE)
            target = mpf(expected)
            roots = [x.approx(digits) for x in isolate_roots(poly, 0, 1)]
            near = [x for x in roots if abs(x - target) < tol]
            observed = mp.nstr(near[0], 8) if near else [mp.nstr(x, 8) for x in roots]
        return _check(label, expected, observed, bool(near))

    def _example_checks(self, ex: dict, digits: int) -> List[dict]:
        name = ex["name"]
        result = intercept(CandidatePair(ex["eta"], ex["zeta"]), digits)
        if result.status != FOUND:
            return [_check(f"{name} intercept", "found", result.status, False)]
        out = []
        with mp.workdps(digits + GUARD_DIGITS):
            r0, s0 = result.point
            tol = mpf(ref.EXAMPLE_TOLERANCE)
            close = abs(r0 - mpf(ex["r"])) < tol and abs(s0 - mpf(ex["s"])) < tol
            out.append(_check(f"{name} intercept", f"({ex['r']}, {ex['s']})",
                              f"({mp.nstr(r0, 8)}, {mp.nstr(s0, 8)})", close))
            worst = mpf(0)
            for key, gen, value in (("r_poly", R, r0), ("s_poly", S, s0)):
                coeffs = ex[key]
                poly = Poly(coeffs, gen, domain=ZZ)
                worst = max(worst, abs(eval_poly(poly, value)) / max(abs(c) for c in coeffs))
            out.append(_check(f"{name} stated polynomials", "< 1e-25", mp.nstr(worst, 3),
                              worst < mpf("1e-25")))
        cfg = self.config
        gamma = search(make_query(r0, s0, cfg.tolerance, cfg.budget_nodes, digits), cfg.jobs)
        out.append(_check(f"{name} gamma tuple", ex["xi"], gamma.solutions,
                          tuple(ex["xi"]) in gamma.solutions))
        return out

    def _heavy_checks(self, pairs, digits: int) -> List[dict]:
        out = []
        near = ref.NEAR_ORIGIN
        found = intercept(CandidatePair(near["eta"], near["zeta"]), digits)
        if found.status != FOUND:
            return [_check("near-origin intercept", "found", found.status, False)]
        r0, s0 = found.point
        with mp.workdps(digits + GUARD_DIGITS):
            # the stated s carries nine significant digits
            close = (abs(r0 / mpf(near["r"]) - 1) < mpf("1e-8")
                     and abs(s0 / mpf(near["s"]) - 1) < mpf("1e-8"))
        out.append(_check("near-origin intercept", f"({near['r']}, {near['s']})",
                          f"({mp.nstr(r0, 12)}, {mp.nstr(s0, 12)})", close))
        cert = certify_point(near["eta"], near["zeta"], r0, s0, digits, self.config.term_cap)
        self._keep(self.store.write_certificate(near["eta"], near["zeta"], cert.to_record()))
        for key, gen, root in (("r_poly", R, cert.r_root), ("s_poly", S, cert.s_root)):
            stated = Poly(near[key], gen, domain=ZZ)
            divides = getattr(cert, key).rem(stated).is_zero
            ok = divides and root is not None and stated.count_roots(root.lo, root.hi) > 0
            out.append(_check(f"near-origin {key}", "divides, root shared",
                              "ok" if ok else ("root missing" if divides else "no division"), ok))

        catalog = resolve_catalog(compute_L(pairs, digits, self.mapper()), self.store, self.config.term_cap)
        self._keep(self.store.write_catalog("L", [x.to_record() for x in catalog.results], self.config.fmt))
        summary = catalog.summary()
        self._keep(self.store.write_summary("L", summary))
        out.append(_check("|L|", ref.L_UPPER, summary["distinct_points"],
                          summary["distinct_points"] == ref.L_UPPER))
        return out
