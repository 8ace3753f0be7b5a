import xml.etree.ElementTree as ET

import pytest
from mpmath import mp, mpf

from contours import FOUND, eval_f, intercept
from errors import DomainError, PreconditionError
from gamma_search import make_query, search
from packing import (
    Circle, Packing, build_corona, grow_patch, packing_from_record, packing_to_record,
    radii_for, render_svg, tolerance_for, transitions_of, verify,
)
from reference_data import EXAMPLES, SNEC_TABLE
from tuples import CandidatePair, decode_cycle

DIGITS = 40
HEX = (6, 0, 0, 0, 0, 0)


@pytest.fixture(scope="module")
def radii():
    return radii_for("0.6", "0.2")


@pytest.fixture(scope="module")
def example_radii():
    out = {}
    for ex in EXAMPLES:
        result = intercept(CandidatePair(ex["eta"], ex["zeta"]), DIGITS)
        assert result.status == FOUND
        out[ex["name"]] = radii_for(*result.point)
    return out


def test_hexagonal_corona_closes(radii):
    corona = build_corona("large", ("large",) * 6, radii, DIGITS)
    assert corona.closes
    assert abs(corona.residual) < mpf(10) ** -35
    assert len(corona.packing) == 7


def test_wrong_corona_does_not_close(radii):
    corona = build_corona("large", ("large",) * 5, radii, DIGITS)
    assert not corona.closes


@pytest.mark.parametrize("example", EXAMPLES, ids=lambda e: e["name"])
def test_worked_example_coronas_close(example, example_radii):
    radii = example_radii[example["name"]]
    for centre, key in (("small", "eta"), ("mid", "zeta"), ("large", "xi")):
        corona = build_corona(centre, decode_cycle(example[key]), radii, DIGITS)
        assert corona.closes, (centre, example[key])
        report = verify(corona.packing)
        assert report.overlaps == []
        counts, closed = transitions_of(corona.packing, 0)
        assert closed
        assert counts == tuple(example[key])


def test_corona_rejects_unknown_labels(radii):
    with pytest.raises(PreconditionError):
        build_corona("huge", ("large",) * 6, radii, DIGITS)
    with pytest.raises(PreconditionError):
        build_corona("large", (), radii, DIGITS)


def test_radii_domain():
    with pytest.raises(DomainError):
        radii_for("0.2", "0.6")


def test_hexagonal_growth_is_compact(radii):
    seed = build_corona("large", ("large",) * 6, radii, DIGITS).packing
    rules = {"large": [HEX], "mid": [], "small": []}
    grown = grow_patch(seed, (-4, -4, 4, 4), rules, DIGITS)
    assert grown.stalls == []
    assert len(grown.closed) > 7
    assert all(c.label == "large" for c in grown.packing.circles)
    report = verify(grown.packing)
    assert report.overlaps == []
    assert report.interior
    assert report.non_compact == []
    assert report.ok


def test_growth_stops_at_circle_cap(radii):
    seed = build_corona("large", ("large",) * 6, radii, DIGITS).packing
    grown = grow_patch(seed, (-10, -10, 10, 10), {"large": [HEX]}, DIGITS, max_circles=12)
    assert len(grown.packing) <= 12


def test_growth_reports_stalls(radii):
    # a lone small circle whose rules admit no neighbour at all
    seed = Packing([Circle(mpf(0), mpf(0), radii["small"], "small"),
                    Circle(radii["small"] + 1, mpf(0), mpf(1), "large")], radii, DIGITS)
    grown = grow_patch(seed, (-1, -1, 1, 1), {"small": [], "large": [HEX]}, DIGITS)
    assert grown.stalls
    assert grown.stalls[0]["label"] == "small"


def test_verify_finds_overlaps(radii):
    packing = Packing([Circle(mpf(0), mpf(0), mpf(1), "large"),
                       Circle(mpf("1.5"), mpf(0), mpf(1), "large")], radii, DIGITS)
    report = verify(packing)
    assert len(report.overlaps) == 1
    assert not report.ok


def test_verify_reports_the_worst_tangency_residual(radii):
    with mp.workdps(DIGITS + 10):
        nudge = mpf(10) ** -25
        packing = Packing([Circle(mpf(0), mpf(0), mpf(1), "large"),
                           Circle(2 + nudge, mpf(0), mpf(1), "large"),
                           Circle(mpf(0), mpf(-2), mpf(1), "large")], radii, DIGITS)
    report = verify(packing)
    assert report.tangencies == 2
    with mp.workdps(DIGITS + 10):
        assert abs(report.worst_residual - nudge) < mpf(10) ** -35
    assert report.to_record()["worst_residual"] == "1.0e-25"


def test_svg_has_one_circle_per_disc(radii):
    corona = build_corona("large", ("large",) * 6, radii, DIGITS)
    svg = render_svg(corona.packing, show_tangency=True)
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    circles = root.findall(f".//{ns}circle")
    assert len(circles) == 7
    assert {c.get("class") for c in circles} == {"large"}
    # six spokes plus six rim contacts
    assert len(root.findall(f".//{ns}line")) == 12


def test_svg_flips_the_y_axis(radii):
    packing = Packing([Circle(mpf(0), mpf(2), mpf("0.2"), "small")], radii, DIGITS)
    root = ET.fromstring(render_svg(packing))
    circle = root.find(".//{http://www.w3.org/2000/svg}circle")
    assert circle.get("cy") == "-2.000000"
    assert circle.get("class") == "small"


def test_packing_record_roundtrip(radii):
    packing = build_corona("mid", decode_cycle((1, 0, 3, 0, 2, 0)), radii, DIGITS).packing
    record = packing_to_record(packing)
    assert set(record["radii"]) == {"r", "s"}
    back = packing_from_record(record)
    assert len(back) == len(packing)
    with mp.workdps(DIGITS + 10):
        for a, b in zip(back.circles, packing.circles):
            assert a.label == b.label
            assert abs(a.x - b.x) < mpf(10) ** -(DIGITS - 2)


def test_packing_record_needs_both_radii():
    with pytest.raises(PreconditionError):
        packing_from_record({"radii": {"large": "1", "mid": "0.5", "small": "0.2"}, "circles": []})
    with pytest.raises(PreconditionError):
        packing_from_record({"radii": {"r": "0.5"}, "circles": []})
    with pytest.raises(PreconditionError):
        packing_from_record({"radii": {"r": "0.5", "s": "0.2"},
                             "circles": [{"x": "0", "y": "0", "label": "huge"}]})


def test_packing_record_radii_must_lie_in_the_domain():
    with pytest.raises(DomainError):
        packing_from_record({"radii": {"r": "0.2", "s": "0.6"}, "circles": []})


def test_packing_record_reads_radii_r_and_s():
    packing = packing_from_record({
        "radii": {"s": "0.2", "r": "0.6"},
        "circles": [{"x": "0", "y": "0", "label": "large"},
                    {"x": "1.6", "y": "0", "label": "mid"}],
    })
    assert packing.radii["large"] == 1
    assert [float(c.radius) for c in packing.circles] == [1.0, 0.6]
    report = verify(packing)
    assert report.overlaps == []
    assert report.tangencies == 1


@pytest.mark.parametrize("example", EXAMPLES, ids=lambda e: e["name"])
def test_worked_example_growth_verifies(example, example_radii):
    radii = example_radii[example["name"]]
    gamma = search(make_query(radii["mid"], radii["small"], digits=DIGITS))
    rules = {"small": [example["eta"]], "mid": [example["zeta"]],
             "large": gamma.solutions or [example["xi"]]}
    seed = build_corona("small", decode_cycle(example["eta"]), radii, DIGITS).packing
    grown = grow_patch(seed, (-3, -3, 3, 3), rules, DIGITS, max_circles=80)
    assert len(grown.packing) > len(seed)
    report = verify(grown.packing, tol=mpf("1e-9"))
    assert report.overlaps == []
    assert report.ok


def test_two_tangent_neighbours_leave_one_open_sweep():
    # three unit circles close around a small circle of radius 2/sqrt(3) - 1
    with mp.workdps(DIGITS + 20):
        radii = radii_for("0.6", 2 / mp.sqrt(3) - 1)
    corona = build_corona("small", ("large", "large", "large"), radii, DIGITS)
    assert corona.closes
    seed = Packing(corona.packing.circles[:3], radii, DIGITS)
    counts, closed = transitions_of(seed, 0)
    assert not closed
    assert counts == (1, 0, 0, 0, 0, 0)
    rules = {"small": [(3, 0, 0, 0, 0, 0)], "large": [(6, 0, 0, 0, 6, 0)]}
    grown = grow_patch(seed, (-0.5, -0.5, 0.5, 0.5), rules, DIGITS)
    assert grown.closed == [0]
    assert len(grown.packing) == 4
    assert transitions_of(grown.packing, 0) == ((3, 0, 0, 0, 0, 0), True)


def test_corona_closure_matches_the_angle_sum(example_radii, rng):
    points = [(radii["mid"], radii["small"]) for radii in example_radii.values()]
    for _ in range(5):
        r = rng.uniform(0.1, 0.95)
        points.append((mpf(r), mpf(rng.uniform(0.05, 0.95) * r)))
    tol = tolerance_for(DIGITS)
    closing = 0
    for r, s in points:
        radii = radii_for(r, s)
        for eta in SNEC_TABLE:
            corona = build_corona("small", decode_cycle(eta), radii, DIGITS)
            with mp.workdps(DIGITS + 10):
                on_contour = abs(eval_f("alpha", eta, r, s, DIGITS) - 2 * mp.pi) < tol
            assert corona.closes == on_contour, (eta, r, s)
            closing += corona.closes
    assert closing >= len(EXAMPLES)


def test_verify_is_invariant_under_rigid_motions(radii, rng):
    corona = build_corona("large", ("large",) * 6, radii, DIGITS).packing
    circles = corona.circles + [Circle(mpf("0.5"), mpf("0.3"), radii["small"], "small")]
    base = verify(Packing(circles, radii, DIGITS))
    assert base.tangencies == 12
    assert [o[:2] for o in base.overlaps] == [(0, 7)]
    for _ in range(5):
        with mp.workdps(DIGITS + 10):
            theta = mpf(rng.uniform(0, 6.3))
            dx, dy = mpf(rng.uniform(-50, 50)), mpf(rng.uniform(-50, 50))
            cos, sin = mp.cos(theta), mp.sin(theta)
            moved = [Circle(c.x * cos - c.y * sin + dx, c.x * sin + c.y * cos + dy, c.radius, c.label)
                     for c in circles]
        report = verify(Packing(moved, radii, DIGITS))
        assert report.tangencies == base.tangencies
        assert [o[:2] for o in report.overlaps] == [o[:2] for o in base.overlaps]
