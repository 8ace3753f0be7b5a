"""
gamma_search — which large-circle coronas fit at a given pair of radii?

Given (r, s), find every onec tuple xi with xi . gamma(r, s) = 2pi (up to a
tolerance). Depth-first over the six coordinates, largest angle first, with
the last coordinate solved directly and branches pruned on the remaining
angle budget. A shared node counter enforces the budget across workers.
"""

import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from loguru import logger
from mpmath import mp, mpf

from angles import DEFAULT_DIGITS, GUARD_DIGITS, angle_vector, check_radii, to_scalar
from errors import UsageError
from tuples import AngleCount, check

FOUND = "found"
EXHAUSTED = "exhausted-none"
BUDGET = "budget-exceeded"

DEFAULT_TOLERANCE = "1e-20"
DEFAULT_BUDGET = 10 ** 9

# float slack for pruning; exact acceptance happens in mpmath
_PRUNE_SLACK = 1e-9
_COUNTER_BATCH = 1024


@dataclass
class GammaQuery:
    r: mpf
    s: mpf
    tolerance: mpf
    budget: int = DEFAULT_BUDGET
    digits: int = DEFAULT_DIGITS

    def validate(self) -> None:
        check_radii(self.r, self.s)
        if self.tolerance < mpf(10) ** (-(self.digits - 10)):
            raise UsageError(
                f"tolerance {mp.nstr(self.tolerance, 5)} is below what {self.digits} digits resolve")
        if self.budget < 1:
            raise UsageError(f"node budget must be positive, got {self.budget}")


@dataclass
class GammaOutcome:
    status: str
    solutions: List[AngleCount] = field(default_factory=list)
    nodes: int = 0

    def to_record(self) -> dict:
        return {"status": self.status,
                "solutions": [list(x) for x in self.solutions],
                "nodes": self.nodes}


def gamma_bounds(r, s, digits: int = DEFAULT_DIGITS) -> AngleCount:
    """Componentwise caps floor(2pi / gamma_i); gamma_1 = pi/3 gives 6."""
    with mp.workdps(digits + GUARD_DIGITS):
        gamma = angle_vector("gamma", r, s, digits)
        slack = mpf(10) ** (-(digits // 2))
        return tuple(int(mp.floor(2 * mp.pi / g + slack)) for g in gamma)


class _Counter:
    """Node counter, optionally backed by a shared multiprocessing.Value."""

    def __init__(self, budget: int, shared=None):
        self.budget = budget
        self.shared = shared
        self.local = 0
        self.pending = 0

    def tick(self) -> bool:
        """Count one node; False once the budget is spent."""
        self.local += 1
        if self.shared is None:
            return self.local <= self.budget
        self.pending += 1
        if self.pending >= _COUNTER_BATCH:
            with self.shared.get_lock():
                self.shared.value += self.pending
                total = self.shared.value
            self.pending = 0
            return total <= self.budget
        return True

    def flush(self) -> None:
        if self.shared is not None and self.pending:
            with self.shared.get_lock():
                self.shared.value += self.pending
            self.pending = 0


def _search_branch(gamma_f: List[float], order: List[int], caps: List[int],
                   first_value: Optional[int], counter: _Counter) -> Tuple[List[AngleCount], bool]:
    """DFS in float arithmetic; returns candidate tuples and whether it finished."""
    two_pi = 2 * 3.141592653589793
    n = len(order)
    # max angle still reachable from position k onwards
    reach = [0.0] * (n + 1)
    for k in range(n - 1, -1, -1):
        reach[k] = reach[k + 1] + caps[order[k]] * gamma_f[order[k]]

    found: List[AngleCount] = []
    xi = [0] * 6

    def descend(k: int, remaining: float) -> bool:
        if not counter.tick():
            return False
        idx = order[k]
        g = gamma_f[idx]
        if k == n - 1:
            count = round(remaining / g)
            if 0 <= count <= caps[idx] and abs(remaining - count * g) < _PRUNE_SLACK:
                xi[idx] = count
                found.append(tuple(xi))
                xi[idx] = 0
            return True
        values = range(caps[idx] + 1) if (k > 0 or first_value is None) else (first_value,)
        for v in values:
            rest = remaining - v * g
            if rest < -_PRUNE_SLACK:
                break
            if rest > reach[k + 1] + _PRUNE_SLACK:
                continue
            xi[idx] = v
            if not descend(k + 1, rest):
                xi[idx] = 0
                return False
            xi[idx] = 0
        return True

    return found, descend(0, two_pi)


_shared_counter = None


def _init_worker(shared) -> None:
    global _shared_counter
    _shared_counter = shared


def _branch_job(args):
    gamma_f, order, caps, first_value, budget = args
    counter = _Counter(budget, _shared_counter)
    found, completed = _search_branch(gamma_f, order, caps, first_value, counter)
    counter.flush()
    return found, completed, counter.local


def search(query: GammaQuery, jobs: int = 1) -> GammaOutcome:
    """All onec xi with |xi . gamma(r, s) - 2pi| < tolerance."""
    query.validate()
    digits = query.digits
    with mp.workdps(digits + GUARD_DIGITS):
        gamma = angle_vector("gamma", query.r, query.s, digits)
        caps = list(gamma_bounds(query.r, query.s, digits))
        gamma_f = [float(g) for g in gamma]
        order = sorted(range(6), key=lambda i: -gamma_f[i])
        logger.info("[Gamma] caps {} at r={} s={}", caps, mp.nstr(query.r, 12), mp.nstr(query.s, 12))

        if jobs <= 1:
            counter = _Counter(query.budget)
            candidates, completed = _search_branch(gamma_f, order, caps, None, counter)
            nodes = counter.local
        else:
            shared = multiprocessing.Value("q", 0)
            first = order[0]
            tasks = [(gamma_f, order, caps, v, query.budget) for v in range(caps[first] + 1)]
            with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                     initargs=(shared,)) as pool:
                parts = list(pool.map(_branch_job, tasks))
            candidates = [x for found, _c, _n in parts for x in found]
            completed = all(c for _f, c, _n in parts)
            nodes = sum(n for _f, _c, n in parts)

        two_pi = 2 * mp.pi
        solutions = sorted({
            xi for xi in candidates
            if abs(mp.fsum(n * g for n, g in zip(xi, gamma) if n) - two_pi) < query.tolerance
            and check("onec", xi)
        })

    if not completed:
        logger.warning("[Gamma] budget of {} nodes exceeded after {} nodes", query.budget, nodes)
        return GammaOutcome(BUDGET, solutions, nodes)
    status = FOUND if solutions else EXHAUSTED
    logger.info("[Gamma] {}: {} solution(s), {} nodes", status, len(solutions), nodes)
    return GammaOutcome(status, solutions, nodes)


def make_query(r, s, tolerance=DEFAULT_TOLERANCE, budget: int = DEFAULT_BUDGET,
               digits: int = DEFAULT_DIGITS) -> GammaQuery:
    with mp.workdps(digits + GUARD_DIGITS):
        return GammaQuery(to_scalar(r), to_scalar(s), to_scalar(tolerance), budget, digits)
