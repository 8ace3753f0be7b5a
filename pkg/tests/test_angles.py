from fractions import Fraction

import pytest
from mpmath import mp, mpf

from angles import (
    angle_vector, check_radii, closure_angle_vector, cosine_rule, origin_limit_angles,
    origin_limit_cosines, petal_angle, ray_derivative,
)
from errors import DomainError, UsageError


def test_equal_radii_give_exactly_a_third_of_pi():
    with mp.workdps(60):
        assert petal_angle(1, 1, 1) == +mp.pi / 3
        assert petal_angle("0.3", "0.3", "0.3") == +mp.pi / 3
        assert abs(6 * petal_angle(1, 1, 1) - 2 * mp.pi) < mpf(10) ** -55


def test_cosine_rule_is_exact_on_rationals():
    assert cosine_rule(1, 1, 1) == Fraction(1, 2)
    assert cosine_rule(Fraction(1, 2), 1, 1) == Fraction(1, 9)
    assert cosine_rule(1, Fraction(1, 2), Fraction(1, 2)) == Fraction(7, 9)


def test_petal_angle_matches_cosine_rule():
    with mp.workdps(60):
        angle = petal_angle("0.4", 1, "0.25")
        expected = mp.acos(1 - 2 * mpf("0.25") / ((mpf("1.4")) * mpf("0.65")))
        assert abs(angle - expected) < mpf(10) ** -45


def test_gamma_first_coordinate_is_a_third_of_pi():
    with mp.workdps(60):
        gamma = angle_vector("gamma", "0.438405", "0.299248")
        assert gamma[0] == +mp.pi / 3


def test_alpha_coordinates_follow_pair_order():
    with mp.workdps(60):
        r, s = mpf("0.6"), mpf("0.2")
        alpha = angle_vector("alpha", r, s)
        tol = mpf(10) ** -45
        assert abs(alpha[0] - petal_angle(s, 1, 1)) < tol
        assert abs(alpha[1] - petal_angle(s, r, r)) < tol
        assert abs(alpha[5] - petal_angle(s, r, s)) < tol


def test_zero_weights_skip_coordinates():
    alpha = angle_vector("alpha", "0.6", "0.2", weights=(0, 0, 0, 1, 1, 3))
    assert alpha[0] == 0 and alpha[1] == 0 and alpha[2] == 0
    assert alpha[3] > 0


def test_domain_errors():
    with pytest.raises(DomainError):
        petal_angle(0, 1, 1)
    with pytest.raises(DomainError):
        check_radii(mpf("0.3"), mpf("0.5"))
    with pytest.raises(UsageError):
        angle_vector("delta", "0.5", "0.2")


@pytest.mark.parametrize("kind,r,s", [
    ("alpha", "0.3", "0.5"),
    ("beta", "1.5", "0.2"),
    ("gamma", "0.4", "0.4"),
    ("alpha", "1", "0.5"),
    ("beta", "0.5", "0"),
])
def test_angle_vector_rejects_points_off_the_domain(kind, r, s):
    with pytest.raises(DomainError):
        angle_vector(kind, r, s)


def test_closure_reaches_the_domain_boundary():
    diagonal = closure_angle_vector("alpha", "0.4", "0.4", 30)
    assert abs(diagonal[2] - mp.pi / 3) < mpf(10) ** -25
    assert abs(diagonal[1] - mp.pi / 3) < mpf(10) ** -25
    at_one = closure_angle_vector("beta", 1, "0.3", 30)
    assert abs(at_one[0] - mp.pi / 3) < mpf(10) ** -25


@pytest.mark.parametrize("kind,xi", [
    ("alpha", (1, 0, 0, 1, 1, 0)),
    ("alpha", (0, 2, 1, 2, 3, 1)),
    ("beta", (1, 0, 0, 1, 1, 0)),
    ("beta", (2, 1, 3, 0, 2, 1)),
])
def test_ray_derivative_matches_finite_difference(kind, xi):
    with mp.workdps(60):
        m, r = mpf("0.35"), mpf("0.4")

        def along_ray(t):
            vec = angle_vector(kind, t, m * t, 60)
            return mp.fsum(n * v for n, v in zip(xi, vec))

        numeric = mp.diff(along_ray, r)
        assert abs(ray_derivative(kind, xi, m, r) - numeric) < mpf(10) ** -30


def test_origin_limits_are_rational_for_rational_slopes():
    limits = origin_limit_cosines("alpha", Fraction(1, 2))
    assert all(isinstance(x, Fraction) for x in limits)
    assert limits[3] == Fraction(-1, 3)
    assert limits[5] == Fraction(1, 3)
    beta = origin_limit_cosines("beta", Fraction(1, 3))
    assert beta[4] == Fraction(1, 2)
    assert beta[5] == Fraction(3, 4)


@pytest.mark.parametrize("kind", ["alpha", "beta"])
def test_origin_limits_match_small_radii(kind):
    with mp.workdps(60):
        m = mpf("0.3")
        r = mpf(10) ** -25
        near = angle_vector(kind, r, m * r)
        limit = origin_limit_angles(kind, m)
        for a, b in zip(near, limit):
            assert abs(a - b) < mpf(10) ** -10


def test_petal_angle_symmetry_and_scale_invariance():
    triples = [("0.7", "0.2", "0.45"), ("1", "0.05", "0.9"), ("0.33", "0.6", "0.01")]
    with mp.workdps(60):
        for a, b, c in triples:
            angle = petal_angle(a, b, c)
            assert abs(angle - petal_angle(a, c, b)) < mpf(10) ** -45
            for scale in ("0.001", "3.5", "250"):
                k = mpf(scale)
                scaled = petal_angle(k * mpf(a), k * mpf(b), k * mpf(c))
                assert abs(angle - scaled) < mpf(10) ** -40


def test_alpha_components_exceed_a_third_of_pi():
    third = mp.pi / 3
    for i in range(1, 20):
        for j in range(1, i):
            r, s = mpf(i) / 20, mpf(j) / 20
            alpha = angle_vector("alpha", r, s, 30)
            assert abs(alpha[2] - third) < mpf(10) ** -14
            assert all(alpha[k] > third for k in (0, 1, 3, 4, 5))


def test_small_neighbours_of_a_mid_circle_are_bounded():
    # 35 small petals around a mid circle already exceed a full turn at s = r/10
    for i in range(1, 201):
        r = mpf(i) / 201
        beta = angle_vector("beta", r, r / 10, 30)
        assert 35 * beta[2] > 2 * mp.pi


@pytest.mark.parametrize("kind", ["alpha", "beta"])
def test_sums_decrease_along_rays(kind):
    xi = (1, 0, 2, 1, 1, 0)
    for m in ("0.1", "0.5", "0.9"):
        m = mpf(m)
        values = [mp.fsum(n * v for n, v in zip(xi, angle_vector(kind, t, m * t, 30)))
                  for t in (mpf(k) / 10 for k in range(1, 10))]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert ray_derivative(kind, xi, m, "0.5") < 0


def test_ray_derivative_vanishes_without_varying_petals():
    assert ray_derivative("alpha", (0, 3, 0, 0, 0, 0), "0.5", "0.5") == 0


def test_ray_derivative_on_random_samples(rng):
    for _ in range(1000):
        kind = rng.choice(("alpha", "beta"))
        xi = tuple(rng.randint(0, 4) for _ in range(6))
        with mp.workdps(40):
            m, r = mpf(rng.uniform(0.05, 0.95)), mpf(rng.uniform(0.05, 0.95))

            def along_ray(t):
                return mp.fsum(n * v for n, v in zip(xi, angle_vector(kind, t, m * t, 40)))

            numeric = mp.diff(along_ray, r)
            analytic = ray_derivative(kind, xi, m, r, 40)
            assert abs(analytic - numeric) <= mpf("1e-6") * max(1, abs(numeric)), (kind, xi, m, r)
