import itertools
import math

import pytest
from mpmath import mp, mpf

from angles import angle_vector
from contours import FOUND, intercept
from errors import DomainError, UsageError
from gamma_search import BUDGET, gamma_bounds, make_query, search
from reference_data import EXAMPLES, NEAR_ORIGIN, NEAR_ORIGIN_CAP_PRODUCT
from tuples import CandidatePair, check

DIGITS = 40


def _point(example):
    result = intercept(CandidatePair(example["eta"], example["zeta"]), DIGITS)
    assert result.status == FOUND
    return result.point


@pytest.fixture(scope="module")
def example_one_point():
    return _point(EXAMPLES[0])


def test_example_one_large_corona(example_one_point):
    r0, s0 = example_one_point
    outcome = search(make_query(r0, s0, digits=DIGITS))
    assert outcome.status == FOUND
    assert (0, 0, 2, 4, 0, 4) in outcome.solutions
    assert (6, 0, 0, 0, 0, 0) not in outcome.solutions
    assert all(check("onec", xi) for xi in outcome.solutions)
    assert outcome.solutions == sorted(outcome.solutions)


def test_example_four_large_corona():
    r0, s0 = _point(EXAMPLES[3])
    outcome = search(make_query(r0, s0, digits=DIGITS))
    assert (0, 1, 3, 0, 0, 6) in outcome.solutions


def test_pruned_search_matches_plain_enumeration(example_one_point):
    r0, s0 = example_one_point
    outcome = search(make_query(r0, s0, digits=DIGITS))
    caps = gamma_bounds(r0, s0, DIGITS)
    with mp.workdps(DIGITS + 10):
        gamma = angle_vector("gamma", r0, s0, DIGITS)
        gamma_f = [float(g) for g in gamma]
        plain = set()
        for xi in itertools.product(*(range(c + 1) for c in caps)):
            if abs(sum(n * g for n, g in zip(xi, gamma_f)) - 2 * math.pi) > 1e-9:
                continue
            exact = mp.fsum(n * g for n, g in zip(xi, gamma) if n)
            if abs(exact - 2 * mp.pi) < mpf("1e-20") and check("onec", xi):
                plain.add(xi)
    assert set(outcome.solutions) == plain


def test_tighter_tolerance_keeps_solutions(example_one_point):
    r0, s0 = example_one_point
    loose = search(make_query(r0, s0, "1e-20", digits=DIGITS))
    tight = search(make_query(r0, s0, "1e-28", digits=DIGITS))
    assert loose.solutions == tight.solutions


def test_bounds_start_with_six():
    caps = gamma_bounds("0.438405", "0.299248")
    assert caps[0] == 6
    assert max(caps) <= 13


def test_near_origin_caps_are_astronomical():
    caps = gamma_bounds(NEAR_ORIGIN["r"], NEAR_ORIGIN["s"])
    product = math.prod(caps)
    assert NEAR_ORIGIN_CAP_PRODUCT * 0.7 < product < NEAR_ORIGIN_CAP_PRODUCT * 1.3


def test_budget_is_reported_not_raised():
    outcome = search(make_query(NEAR_ORIGIN["r"], NEAR_ORIGIN["s"], budget=1000))
    assert outcome.status == BUDGET
    assert outcome.nodes >= 1000


def test_query_validation():
    with pytest.raises(DomainError):
        search(make_query("0.2", "0.4"))
    with pytest.raises(UsageError):
        search(make_query("0.5", "0.2", tolerance="1e-45", digits=40))
    with pytest.raises(UsageError):
        search(make_query("0.5", "0.2", budget=0))


def test_parallel_search_matches_serial(example_one_point):
    r0, s0 = example_one_point
    query = make_query(r0, s0, digits=DIGITS)
    serial = search(query)
    parallel = search(query, jobs=2)
    assert parallel.status == serial.status
    assert parallel.solutions == serial.solutions
