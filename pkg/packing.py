"""
packing — circle placements: coronas, patch growth, verification, SVG.

Geometry is carried in mpmath at the working precision; the spatial index
and draw coordinates use floats.

Public API:
  build_corona(centre_label, cycle, radii, digits)   -> Corona
  grow_patch(seed, region, rules, digits, ...)       -> GrowthResult
  verify(packing, tol)                               -> VerificationReport
  render_svg(packing, show_tangency)                 -> str
  packing_to_record / packing_from_record
"""

import heapq
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from mpmath import mp, mpf

from angles import DEFAULT_DIGITS, GUARD_DIGITS, PAIR_LABELS, petal_angle, to_scalar
from errors import DomainError, PreconditionError
from tuples import LABELS, AngleCount

_PAIR_INDEX = {}
for _i, (_b, _c) in enumerate(PAIR_LABELS):
    _PAIR_INDEX[(_b, _c)] = _i
    _PAIR_INDEX[(_c, _b)] = _i

_FILL = {"large": "#d9e4f5", "mid": "#f5dfb8", "small": "#e8b4b4"}


@dataclass
class Circle:
    x: mpf
    y: mpf
    radius: mpf
    label: str


@dataclass
class Packing:
    circles: List[Circle]
    radii: Dict[str, mpf]
    digits: int = DEFAULT_DIGITS

    def __len__(self) -> int:
        return len(self.circles)


def radii_for(r, s) -> Dict[str, mpf]:
    r, s = to_scalar(r), to_scalar(s)
    if not (0 < s < r < 1):
        raise DomainError(f"radii outside 0 < s < r < 1: r={r}, s={s}")
    return {"large": mpf(1), "mid": r, "small": s}


def tolerance_for(digits: int) -> mpf:
    return mpf(10) ** (-(digits // 2))


def _gap(a: Circle, b: Circle) -> mpf:
    return mp.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2) - a.radius - b.radius


# ------------------------------------------------------------------
# Coronas
# ------------------------------------------------------------------

@dataclass
class Corona:
    packing: Packing
    closes: bool
    residual: mpf


def build_corona(centre_label: str, cycle: Sequence[str], radii: Dict[str, mpf],
                 digits: int = DEFAULT_DIGITS) -> Corona:
    """
    Centre circle at the origin, neighbours placed counter-clockwise from
    angle 0 in cycle order, each tangent to the centre and its predecessor.
    """
    if centre_label not in LABELS or any(label not in LABELS for label in cycle):
        raise PreconditionError(f"labels must be among {list(LABELS)}")
    if not cycle:
        raise PreconditionError("corona needs at least one neighbour")
    with mp.workdps(digits + GUARD_DIGITS):
        rc = radii[centre_label]
        circles = [Circle(mpf(0), mpf(0), rc, centre_label)]
        theta = mpf(0)
        n = len(cycle)
        for k, label in enumerate(cycle):
            rk = radii[label]
            circles.append(Circle((rc + rk) * mp.cos(theta), (rc + rk) * mp.sin(theta), rk, label))
            theta += petal_angle(rc, rk, radii[cycle[(k + 1) % n]], digits)
        residual = theta - 2 * mp.pi
        closes = abs(residual) < tolerance_for(digits)
        if not closes:
            logger.debug("[Packing] corona {} around {} misses closure by {}",
                         tuple(cycle), centre_label, mp.nstr(residual, 8))
        return Corona(Packing(circles, dict(radii), digits), closes, residual)


# ------------------------------------------------------------------
# Spatial index
# ------------------------------------------------------------------

class _Grid:
    def __init__(self, cell: float):
        self.cell = cell
        self.cells: Dict[Tuple[int, int], List[int]] = {}

    def _key(self, x, y) -> Tuple[int, int]:
        return int(float(x) // self.cell), int(float(y) // self.cell)

    def add(self, idx: int, c: Circle) -> None:
        self.cells.setdefault(self._key(c.x, c.y), []).append(idx)

    def near(self, x, y) -> List[int]:
        cx, cy = self._key(x, y)
        out = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                out.extend(self.cells.get((cx + dx, cy + dy), ()))
        return out


class _Patch:
    """Mutable packing with tangency bookkeeping used during growth."""

    def __init__(self, packing: Packing, tol: mpf):
        self.circles = list(packing.circles)
        self.radii = packing.radii
        self.digits = packing.digits
        self.tol = tol
        self.grid = _Grid(2.0 * float(max(packing.radii.values())) + 1e-9)
        for i, c in enumerate(self.circles):
            self.grid.add(i, c)

    def tangent_to(self, c: Circle, skip: int = -1) -> List[int]:
        return [j for j in self.grid.near(c.x, c.y)
                if j != skip and abs(_gap(c, self.circles[j])) <= self.tol]

    def overlaps(self, c: Circle) -> bool:
        return any(_gap(c, self.circles[j]) < -self.tol for j in self.grid.near(c.x, c.y))

    def ring(self, centre: Circle, members: List[int]) -> List[int]:
        """Neighbour indices sorted counter-clockwise by angle around centre."""
        return sorted(members, key=lambda j: mp.atan2(self.circles[j].y - centre.y,
                                                      self.circles[j].x - centre.x))

    def gap_is_open(self, centre: Circle, a: Circle, b: Circle, n: int) -> bool:
        """
        True unless a and b are tangent and the counter-clockwise sweep from
        a to b around centre is exactly their petal angle. A ring of two
        tangent neighbours has one closed sweep and one open one.
        """
        if n < 2 or abs(_gap(a, b)) > self.tol:
            return True
        sweep = (mp.atan2(b.y - centre.y, b.x - centre.x)
                 - mp.atan2(a.y - centre.y, a.x - centre.x)) % (2 * mp.pi)
        return abs(sweep - petal_angle(centre.radius, a.radius, b.radius, self.digits)) > self.tol

    def transitions(self, centre: Circle, ring: List[Circle]) -> Tuple[AngleCount, bool]:
        """Counts over consecutive closed sweeps of the ring; closed flag."""
        counts = [0] * 6
        n = len(ring)
        if n == 0:
            return tuple(counts), False
        closed = True
        for k in range(n):
            a, b = ring[k], ring[(k + 1) % n]
            if self.gap_is_open(centre, a, b, n):
                closed = False
            else:
                counts[_PAIR_INDEX[(a.label, b.label)]] += 1
        return tuple(counts), closed


def _feasible(counts: AngleCount, closed: bool, allowed: Sequence[AngleCount]) -> bool:
    for xi in allowed:
        if closed and tuple(counts) == tuple(xi):
            return True
        if not closed and all(c <= x for c, x in zip(counts, xi)):
            return True
    return False


# ------------------------------------------------------------------
# Growth
# ------------------------------------------------------------------

@dataclass
class GrowthResult:
    packing: Packing
    closed: List[int] = field(default_factory=list)
    stalls: List[dict] = field(default_factory=list)

    def to_record(self) -> dict:
        return {"circles": len(self.packing), "closed": len(self.closed), "stalls": list(self.stalls)}


def _ring_state(patch: _Patch, idx: int, extra: Optional[Circle] = None):
    centre = patch.circles[idx]
    members = patch.tangent_to(centre, skip=idx)
    circles = [patch.circles[j] for j in patch.ring(centre, members)]
    if extra is not None:
        circles.append(extra)
        circles.sort(key=lambda c: mp.atan2(c.y - centre.y, c.x - centre.x))
    return circles


def _candidate_ok(patch: _Patch, cand: Circle, rules: Dict[str, List[AngleCount]]) -> bool:
    if patch.overlaps(cand):
        return False
    touching = patch.tangent_to(cand)
    # the new circle's own partial corona
    ring = sorted((patch.circles[j] for j in touching),
                  key=lambda c: mp.atan2(c.y - cand.y, c.x - cand.x))
    counts, closed = patch.transitions(cand, ring)
    if not _feasible(counts, closed, rules.get(cand.label, ())):
        return False
    # every circle it touches, including the one being completed
    for j in touching:
        ring = _ring_state(patch, j, extra=cand)
        counts, closed = patch.transitions(patch.circles[j], ring)
        if not _feasible(counts, closed, rules.get(patch.circles[j].label, ())):
            return False
    return True


def _fill_gap(patch: _Patch, idx: int, rules, digits: int) -> Optional[str]:
    """Place one circle into the first angular gap of circle idx; None when closed."""
    centre = patch.circles[idx]
    ring = _ring_state(patch, idx)
    if not ring:
        return "isolated"
    _counts, closed = patch.transitions(centre, ring)
    if closed:
        return None
    n = len(ring)
    start = next((k for k in range(n)
                  if patch.gap_is_open(centre, ring[k], ring[(k + 1) % n], n)), None)
    if start is None:
        return "no open gap"
    a, b = ring[start], ring[(start + 1) % n]
    base = mp.atan2(a.y - centre.y, a.x - centre.x)

    candidates = []
    for label in LABELS:
        rx = patch.radii[label]
        theta = base + petal_angle(centre.radius, a.radius, rx, digits)
        dist = centre.radius + rx
        cand = Circle(centre.x + dist * mp.cos(theta), centre.y + dist * mp.sin(theta), rx, label)
        if _candidate_ok(patch, cand, rules):
            closes = n > 1 and abs(_gap(cand, b)) <= patch.tol
            candidates.append((0 if closes else 1, LABELS.index(label), cand))
    if not candidates:
        return "no admissible neighbour"
    _rank, _order, chosen = min(candidates, key=lambda t: (t[0], t[1]))
    patch.circles.append(chosen)
    patch.grid.add(len(patch.circles) - 1, chosen)
    return ""


def _inside(c: Circle, region) -> bool:
    x0, y0, x1, y1 = region
    return x0 <= c.x <= x1 and y0 <= c.y <= y1


def grow_patch(seed: Packing, region: Tuple, rules: Dict[str, List[AngleCount]],
               digits: int = DEFAULT_DIGITS, max_circles: int = 5000) -> GrowthResult:
    """
    Complete the coronas of every circle whose centre lies in `region`
    (x0, y0, x1, y1), nearest to the origin first, using only neighbour
    counts admitted by `rules` (label -> allowed AngleCounts).
    """
    with mp.workdps(digits + GUARD_DIGITS):
        region = tuple(to_scalar(v) for v in region)
        patch = _Patch(seed, tolerance_for(digits))
        result = GrowthResult(seed)
        done = set()
        heap = []

        def push(i):
            c = patch.circles[i]
            if i not in done and _inside(c, region):
                key = (round(float(mp.sqrt(c.x ** 2 + c.y ** 2)), 9),
                       round(float(mp.atan2(c.y, c.x)), 9), i)
                heapq.heappush(heap, key)

        for i in range(len(patch.circles)):
            push(i)

        while heap and len(patch.circles) < max_circles:
            _d, _a, idx = heapq.heappop(heap)
            if idx in done:
                continue
            while True:
                before = len(patch.circles)
                outcome = _fill_gap(patch, idx, rules, digits)
                for j in range(before, len(patch.circles)):
                    push(j)
                if outcome is None:
                    result.closed.append(idx)
                    break
                if outcome:
                    c = patch.circles[idx]
                    result.stalls.append({"circle": idx, "label": c.label,
                                          "x": mp.nstr(c.x, 12), "y": mp.nstr(c.y, 12),
                                          "reason": outcome})
                    break
                if len(patch.circles) >= max_circles:
                    break
            done.add(idx)

        result.packing = Packing(patch.circles, dict(seed.radii), digits)
        logger.info("[Packing] grew {} circles: {} closed coronas, {} stalls",
                    len(patch.circles), len(result.closed), len(result.stalls))
        return result


# ------------------------------------------------------------------
# Verification
# ------------------------------------------------------------------

@dataclass
class VerificationReport:
    overlaps: List[Tuple[int, int, str]] = field(default_factory=list)
    tangencies: int = 0
    worst_residual: mpf = mpf(0)    # largest |gap| over tangent pairs
    interior: List[int] = field(default_factory=list)
    non_compact: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.overlaps and not self.non_compact

    def to_record(self) -> dict:
        return {
            "ok": self.ok,
            "overlaps": [list(o) for o in self.overlaps],
            "tangencies": self.tangencies,
            "worst_residual": mp.nstr(self.worst_residual, 5),
            "interior": len(self.interior),
            "non_compact": list(self.non_compact),
        }


def verify(packing: Packing, tol: Optional[mpf] = None) -> VerificationReport:
    """
    Overlaps (penetration beyond tol), tangency count, and compactness of
    interior circles: those whose every potential neighbour lies inside the
    patch's bounding box (margin: own radius plus two largest diameters).
    """
    report = VerificationReport()
    if not packing.circles:
        return report
    with mp.workdps(packing.digits + GUARD_DIGITS):
        tol = tol if tol is not None else tolerance_for(packing.digits)
        patch = _Patch(packing, tol)
        circles = patch.circles
        for i, c in enumerate(circles):
            for j in patch.grid.near(c.x, c.y):
                if j <= i:
                    continue
                gap = _gap(c, circles[j])
                if gap < -tol:
                    report.overlaps.append((i, j, mp.nstr(-gap, 8)))
                elif gap <= tol:
                    report.tangencies += 1
                    report.worst_residual = max(report.worst_residual, abs(gap))

        rmax = max(packing.radii.values())
        x0 = min(c.x - c.radius for c in circles)
        x1 = max(c.x + c.radius for c in circles)
        y0 = min(c.y - c.radius for c in circles)
        y1 = max(c.y + c.radius for c in circles)
        for i, c in enumerate(circles):
            margin = c.radius + 4 * rmax
            if min(c.x - x0, x1 - c.x, c.y - y0, y1 - c.y) < margin:
                continue
            report.interior.append(i)
            _counts, closed = patch.transitions(c, _ring_state(patch, i))
            if not closed:
                report.non_compact.append(i)
    return report


# ------------------------------------------------------------------
# Output
# ------------------------------------------------------------------

def render_svg(packing: Packing, show_tangency: bool = False, padding: float = 0.5) -> str:
    """One <circle> per circle, class = size label; y axis points up."""
    if packing.circles:
        xs0 = min(float(c.x - c.radius) for c in packing.circles) - padding
        xs1 = max(float(c.x + c.radius) for c in packing.circles) + padding
        ys0 = min(float(-c.y - c.radius) for c in packing.circles) - padding
        ys1 = max(float(-c.y + c.radius) for c in packing.circles) + padding
    else:
        xs0, xs1, ys0, ys1 = 0.0, 1.0, 0.0, 1.0
    root = ET.Element("svg", xmlns="http://www.w3.org/2000/svg",
                      version="1.1",
                      viewBox="{:.6f} {:.6f} {:.6f} {:.6f}".format(xs0, ys0, xs1 - xs0, ys1 - ys0))
    style = ET.SubElement(root, "style")
    style.text = " ".join(
        ".{} {{ fill: {}; stroke: #333; stroke-width: 0.01; }}".format(label, _FILL[label])
        for label in LABELS) + " line { stroke: #c00; stroke-width: 0.01; }"
    group = ET.SubElement(root, "g")
    for c in packing.circles:
        ET.SubElement(group, "circle", {"class": c.label,
                                        "cx": "{:.6f}".format(float(c.x)),
                                        "cy": "{:.6f}".format(float(-c.y)),
                                        "r": "{:.6f}".format(float(c.radius))})
    if show_tangency and packing.circles:
        with mp.workdps(packing.digits + GUARD_DIGITS):
            patch = _Patch(packing, tolerance_for(packing.digits))
            lines = ET.SubElement(root, "g")
            for i, c in enumerate(patch.circles):
                for j in patch.tangent_to(c, skip=i):
                    if j > i:
                        d = patch.circles[j]
                        ET.SubElement(lines, "line", {
                            "x1": "{:.6f}".format(float(c.x)), "y1": "{:.6f}".format(float(-c.y)),
                            "x2": "{:.6f}".format(float(d.x)), "y2": "{:.6f}".format(float(-d.y))})
    return ET.tostring(root, encoding="unicode")


def packing_to_record(packing: Packing) -> dict:
    """{"digits", "radii": {"s", "r"}, "circles": [{"x", "y", "label"}]}; the large radius is 1."""
    digits = packing.digits
    return {
        "digits": digits,
        "radii": {"s": mp.nstr(packing.radii["small"], digits),
                  "r": mp.nstr(packing.radii["mid"], digits)},
        "circles": [{"x": mp.nstr(c.x, digits), "y": mp.nstr(c.y, digits), "label": c.label}
                    for c in packing.circles],
    }


def packing_from_record(record: dict) -> Packing:
    digits = int(record.get("digits", DEFAULT_DIGITS))
    with mp.workdps(digits + GUARD_DIGITS):
        stated = record.get("radii") or {}
        if "r" not in stated or "s" not in stated:
            raise PreconditionError("packing record needs radii 'r' and 's'")
        radii = radii_for(mpf(stated["r"]), mpf(stated["s"]))
        try:
            circles = [Circle(mpf(c["x"]), mpf(c["y"]), radii[c["label"]], c["label"])
                       for c in record["circles"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise PreconditionError(f"malformed circle in packing record: {exc}") from exc
    return Packing(circles, radii, digits)


def transitions_of(packing: Packing, index: int) -> Tuple[AngleCount, bool]:
    """Neighbour counts around one circle and whether its corona is closed."""
    with mp.workdps(packing.digits + GUARD_DIGITS):
        patch = _Patch(packing, tolerance_for(packing.digits))
        return patch.transitions(patch.circles[index], _ring_state(patch, index))
