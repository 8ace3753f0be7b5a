"""
tuples — angle-count tuples, their admissibility predicates, enumeration.

An AngleCount xi is a 6-tuple of non-negative ints; xi[i] counts how often
the neighbour pair PAIR_LABELS[i] (see angles.py) occurs consecutively in a
circle's cyclic neighbour sequence. Realizability (seq) is decided on the
tiny multigraph with vertices large / mid / small: coordinates 1-3 are
loops, 4-6 the edges large-mid, large-small, mid-small. A cyclic sequence
exists iff that multigraph has an Eulerian circuit.

Public API:
  seq_realizable(xi) / decode_cycle(xi) / encode_cycle(cycle)
  predicate(name) / check(name, xi) / classify(xi)
  srdisjunct(eta, zeta)
  enumerate_snec(total_cap) / enumerate_K(...)
  brute_force_realizable(max_length) / all_cycles(xi, limit)
"""

import itertools
from functools import lru_cache
from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx
from loguru import logger

from angles import PAIR_LABELS
from errors import PreconditionError, UsageError

AngleCount = Tuple[int, int, int, int, int, int]
NeighborCycle = Tuple[str, ...]

LABELS = ("large", "mid", "small")

_PAIR_INDEX = {}
for _i, (_b, _c) in enumerate(PAIR_LABELS):
    _PAIR_INDEX[(_b, _c)] = _i
    _PAIR_INDEX[(_c, _b)] = _i


class CandidatePair(NamedTuple):
    eta: AngleCount
    zeta: AngleCount


def dot(xi: Sequence[int], w: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(xi, w))


def _check_shape(xi) -> AngleCount:
    xi = tuple(int(v) for v in xi)
    if len(xi) != 6 or any(v < 0 for v in xi):
        raise PreconditionError(f"angle count must be 6 non-negative ints, got {xi}")
    return xi


# ------------------------------------------------------------------
# Realizability
# ------------------------------------------------------------------

def _multigraph(xi: AngleCount) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for count, (b, c) in zip(xi, PAIR_LABELS):
        for _ in range(count):
            g.add_edge(b, c)
    return g


@lru_cache(maxsize=None)
def seq_realizable(xi: AngleCount) -> bool:
    """True iff some cyclic label sequence has transition counts exactly xi."""
    xi = _check_shape(xi)
    if sum(xi) == 0:
        return False
    return nx.is_eulerian(_multigraph(xi))


def decode_cycle(xi: AngleCount) -> NeighborCycle:
    """
    One cyclic neighbour sequence realizing xi.

    Deterministic: the circuit starts at the first of large / mid / small
    that carries an edge.
    """
    xi = _check_shape(xi)
    if not seq_realizable(xi):
        raise PreconditionError(f"{xi} is not realizable as a neighbour cycle")
    g = _multigraph(xi)
    source = next(label for label in LABELS if g.has_node(label))
    return tuple(u for u, _v, _k in nx.eulerian_circuit(g, source=source, keys=True))


def encode_cycle(cycle: Sequence[str]) -> AngleCount:
    counts = [0] * 6
    n = len(cycle)
    for i in range(n):
        counts[_PAIR_INDEX[(cycle[i], cycle[(i + 1) % n])]] += 1
    return tuple(counts)


def brute_force_realizable(max_length: int) -> set:
    """Every AngleCount produced by some cyclic sequence of length <= max_length."""
    found = set()
    for n in range(1, max_length + 1):
        for cycle in itertools.product(LABELS, repeat=n):
            found.add(encode_cycle(cycle))
    return found


def _canonical_rotation(cycle: Tuple[str, ...]) -> Tuple[str, ...]:
    return min(cycle[i:] + cycle[:i] for i in range(len(cycle)))


def all_cycles(xi: AngleCount, limit: int = 256) -> List[NeighborCycle]:
    """
    Distinct cyclic arrangements realizing xi, one canonical rotation each.

    Depth-first over the remaining transition counts; stops after `limit`
    arrangements.
    """
    xi = _check_shape(xi)
    if not seq_realizable(xi):
        return []
    n = sum(xi)
    first = decode_cycle(xi)[0]
    seen = set()
    out: List[NeighborCycle] = []

    def walk(path: List[str], remaining: List[int]) -> None:
        if len(out) >= limit:
            return
        if len(path) == n:
            closing = _PAIR_INDEX[(path[-1], path[0])]
            if remaining[closing] == 1 and sum(remaining) == 1:
                key = _canonical_rotation(tuple(path))
                if key not in seen:
                    seen.add(key)
                    out.append(key)
            return
        for label in LABELS:
            idx = _PAIR_INDEX[(path[-1], label)]
            if remaining[idx]:
                remaining[idx] -= 1
                path.append(label)
                walk(path, remaining)
                path.pop()
                remaining[idx] += 1

    walk([first], list(xi))
    return sorted(out)


# ------------------------------------------------------------------
# Predicates
# ------------------------------------------------------------------

def _mod2(xi) -> bool:
    return all(dot(xi, w) % 2 == 0 for w in ((2, 0, 0, 1, 1, 0),
                                             (0, 2, 0, 1, 0, 1),
                                             (0, 0, 2, 0, 1, 1)))


def _sbounds(xi) -> bool:
    return dot(xi, (1, 1, 1, 1, 1, 1)) < 6 and dot(xi, (6, 6, 2, 6, 3, 3)) > 12


def _snonhex(xi) -> bool:
    return dot(xi, (1, 1, 0, 1, 1, 1)) != 0


def _rbounds(xi) -> bool:
    return (dot(xi, (1, 1, 0, 1, 0, 0)) < 6
            and dot(xi, (6, 2, 2, 3, 3, 2)) > 12
            and dot(xi, (2, 2, 0, 2, 1, 1)) <= 12)


def _rnonhex(xi) -> bool:
    return dot(xi, (1, 0, 1, 1, 1, 1)) != 0


def _rfewlargeneighbors(xi) -> bool:
    if dot(xi, (2, 0, 0, 1, 1, 0)) > 0:
        return dot(xi, (2, 2, 0, 2, 1, 1)) < 12
    return True


def _rverticalcont(xi) -> bool:
    return dot(xi, (0, 0, 1, 0, 1, 1)) == 0


def _rboundsextra(xi) -> bool:
    return xi[2] < 35


def _ononhex(xi) -> bool:
    return dot(xi, (0, 1, 1, 1, 1, 1)) != 0 and xi[0] < 6


def _seq(xi) -> bool:
    return seq_realizable(tuple(xi))


def _snec(xi) -> bool:
    return _sbounds(xi) and _snonhex(xi) and _mod2(xi) and _seq(xi)


def _rnec(xi) -> bool:
    return (_rbounds(xi) and _rnonhex(xi) and _mod2(xi)
            and _rfewlargeneighbors(xi) and _seq(xi))


def _onec(xi) -> bool:
    return _ononhex(xi) and _mod2(xi) and _seq(xi)


_PREDICATES = {
    "seq": _seq,
    "mod2": _mod2,
    "sbounds": _sbounds,
    "snonhex": _snonhex,
    "snec": _snec,
    "rbounds": _rbounds,
    "rnonhex": _rnonhex,
    "rfewlargeneighbors": _rfewlargeneighbors,
    "rnec": _rnec,
    "rverticalcont": _rverticalcont,
    "rboundsextra": _rboundsextra,
    "ononhex": _ononhex,
    "onec": _onec,
}

PREDICATE_NAMES = tuple(_PREDICATES)


def predicate(name: str) -> Callable[[AngleCount], bool]:
    """Look up a named predicate."""
    try:
        return _PREDICATES[name]
    except KeyError:
        raise UsageError(
            f"Unknown predicate {name!r}. Valid predicates: {list(_PREDICATES)}"
        ) from None


def check(name: str, xi: Sequence[int]) -> bool:
    return predicate(name)(_check_shape(xi))


def classify(xi: Sequence[int]) -> dict:
    xi = _check_shape(xi)
    return {name: fn(xi) for name, fn in _PREDICATES.items()}


def srdisjunct(eta: Sequence[int], zeta: Sequence[int]) -> bool:
    """At least one of the two coronas touches a large circle."""
    w = (1, 0, 0, 1, 1, 0)
    return dot(eta, w) != 0 or dot(zeta, w) != 0


# ------------------------------------------------------------------
# Enumeration
# ------------------------------------------------------------------

def _bounded_tuples(total_cap: int) -> Iterable[AngleCount]:
    """All 6-tuples with coordinate sum <= total_cap, lexicographic."""
    for xi in itertools.product(range(total_cap + 1), repeat=6):
        if sum(xi) <= total_cap:
            yield xi


def enumerate_snec(total_cap: int = 5) -> List[AngleCount]:
    """
    All snec tuples, scanning coordinate sums up to total_cap.

    sbounds forces the sum below 6, so any total_cap >= 5 gives the same set.
    """
    found = sorted(xi for xi in _bounded_tuples(total_cap) if _snec(xi))
    logger.info("[Tuples] snec scan (sum <= {}): {} tuples", total_cap, len(found))
    return found


def _zeta_box(zeta3: int) -> Iterable[AngleCount]:
    """rnec candidates with a fixed third coordinate."""
    for z1, z2, z4 in itertools.product(range(6), repeat=3):
        k = z1 + z2 + z4
        if k >= 6:
            continue
        rest = 12 - 2 * k
        for z5 in range(rest + 1):
            for z6 in range(rest - z5 + 1):
                yield (z1, z2, zeta3, z4, z5, z6)


def _rnec_slice(zeta3: int) -> List[AngleCount]:
    return [z for z in _zeta_box(zeta3) if _rnec(z)]


def enumerate_rnec(zeta3_cap: int = 34, mapper: Callable = map) -> List[AngleCount]:
    """All rnec tuples with zeta3 <= zeta3_cap (rboundsextra at the default)."""
    found: List[AngleCount] = []
    for part in mapper(_rnec_slice, range(zeta3_cap + 1)):
        found.extend(part)
    found.sort()
    logger.info("[Tuples] rnec scan (zeta3 <= {}): {} tuples", zeta3_cap, len(found))
    return found


def enumerate_K(zeta3_cap: int = 34, mapper: Callable = map,
                etas: Optional[List[AngleCount]] = None) -> List[CandidatePair]:
    """
    K = {(eta, zeta) : snec(eta), rnec(zeta), rboundsextra(zeta), srdisjunct}.

    Sorted lexicographically by (eta, zeta).
    """
    etas = etas if etas is not None else enumerate_snec()
    zetas = enumerate_rnec(zeta3_cap, mapper)
    pairs = [CandidatePair(eta, zeta)
             for eta in etas for zeta in zetas
             if srdisjunct(eta, zeta)]
    logger.info("[Tuples] K: {} pairs ({} eta x {} zeta)", len(pairs), len(etas), len(zetas))
    return pairs


def parse_tuple(text: str) -> AngleCount:
    """Parse '0,0,0,1,1,3' or '(0, 0, 0, 1, 1, 3)' or '0 0 0 1 1 3'."""
    cleaned = text.strip().strip("()[]").replace(",", " ")
    try:
        return _check_shape(int(v) for v in cleaned.split())
    except ValueError as exc:
        raise UsageError(f"cannot parse angle count {text!r}: {exc}") from None
