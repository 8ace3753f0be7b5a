import itertools

import networkx as nx
import pytest

from errors import PreconditionError, UsageError
from reference_data import EXAMPLES, K_SIZE, SNEC_TABLE
from tuples import (
    PREDICATE_NAMES, all_cycles, brute_force_realizable, check, classify, decode_cycle,
    encode_cycle, enumerate_K, enumerate_snec, parse_tuple, predicate, seq_realizable,
    srdisjunct,
)


def test_snec_enumeration_matches_table():
    found = enumerate_snec()
    assert len(found) == 55
    assert set(found) == set(SNEC_TABLE)
    assert found == sorted(found)


def test_larger_scan_finds_nothing_new():
    assert enumerate_snec(total_cap=7) == enumerate_snec(total_cap=5)


def test_seq_agrees_with_brute_force_up_to_seven():
    brute = brute_force_realizable(7)
    claimed = {xi for xi in itertools.product(range(8), repeat=6)
               if sum(xi) <= 7 and seq_realizable(xi)}
    assert brute == claimed


@pytest.mark.parametrize("xi,expected", [
    ((0, 0, 0, 1, 0, 0), False),   # odd degrees
    ((1, 1, 0, 0, 0, 0), False),   # two disconnected loops
    ((6, 0, 0, 0, 0, 0), True),
    ((0, 0, 0, 2, 0, 0), True),
    ((0, 0, 0, 1, 1, 1), True),
    ((0, 0, 0, 0, 0, 0), False),
])
def test_seq_examples(xi, expected):
    assert seq_realizable(xi) is expected


@pytest.mark.parametrize("xi", SNEC_TABLE)
def test_decoded_cycle_reencodes(xi):
    cycle = decode_cycle(xi)
    assert len(cycle) == sum(xi)
    assert encode_cycle(cycle) == xi


def _tuples_up_to(total, length=6):
    if length == 0:
        yield ()
        return
    for v in range(total + 1):
        for rest in _tuples_up_to(total - v, length - 1):
            yield (v,) + rest


def test_every_realizable_tuple_reencodes():
    realizable = 0
    for xi in _tuples_up_to(12):
        if not seq_realizable(xi):
            continue
        realizable += 1
        cycle = decode_cycle(xi)
        assert len(cycle) == sum(xi)
        assert encode_cycle(cycle) == xi
    assert realizable > len(SNEC_TABLE)


def test_decode_rejects_unrealizable():
    with pytest.raises(PreconditionError):
        decode_cycle((1, 1, 0, 0, 0, 0))


def test_all_cycles_are_distinct_arrangements():
    xi = (0, 0, 2, 4, 0, 4)
    cycles = all_cycles(xi)
    assert len(cycles) > 1
    assert len(set(cycles)) == len(cycles)
    for cycle in cycles:
        assert encode_cycle(cycle) == xi
        rotations = {cycle[i:] + cycle[:i] for i in range(len(cycle))}
        assert min(rotations) == cycle


def test_all_cycles_of_unrealizable_is_empty():
    assert all_cycles((0, 0, 0, 1, 0, 0)) == []


@pytest.mark.parametrize("example", EXAMPLES, ids=lambda e: e["name"])
def test_worked_examples_satisfy_their_predicates(example):
    assert check("snec", example["eta"])
    assert check("rnec", example["zeta"])
    assert check("rboundsextra", example["zeta"])
    assert check("onec", example["xi"])
    assert srdisjunct(example["eta"], example["zeta"])


def test_hexagonal_large_corona_is_excluded():
    flags = classify((6, 0, 0, 0, 0, 0))
    assert flags["seq"] and flags["mod2"]
    assert not flags["ononhex"]
    assert not flags["onec"]


def test_classify_covers_every_predicate():
    assert set(classify((0, 0, 0, 1, 1, 3))) == set(PREDICATE_NAMES)


def test_unknown_predicate():
    with pytest.raises(UsageError, match="Valid predicates"):
        predicate("hexagonal")


def test_srdisjunct_needs_a_large_neighbour():
    assert not srdisjunct((0, 0, 1, 0, 0, 0), (0, 1, 0, 0, 0, 2))
    assert srdisjunct((0, 0, 1, 0, 0, 0), (0, 0, 0, 2, 0, 0))


@pytest.mark.parametrize("text", ["0,0,0,1,1,3", "(0, 0, 0, 1, 1, 3)", "0 0 0 1 1 3", "[0,0,0,1,1,3]"])
def test_parse_tuple_formats(text):
    assert parse_tuple(text) == (0, 0, 0, 1, 1, 3)


@pytest.mark.parametrize("text", ["0,0,1", "a,b,c,d,e,f", "0,0,0,1,1,-3"])
def test_parse_tuple_rejects(text):
    with pytest.raises(UsageError):
        parse_tuple(text)


def test_small_k_slice_is_consistent():
    pairs = enumerate_K(zeta3_cap=3)
    assert pairs == sorted(pairs)
    for ex in EXAMPLES:
        assert (ex["eta"], ex["zeta"]) in pairs
    for eta, zeta in pairs[::97]:
        assert check("snec", eta)
        assert check("rnec", zeta)
        assert srdisjunct(eta, zeta)


@pytest.mark.slow
def test_k_has_published_size():
    assert len(enumerate_K()) == K_SIZE


def test_mod2_is_even_vertex_degrees():
    for xi in itertools.product(range(3), repeat=6):
        graph = nx.MultiGraph()
        graph.add_nodes_from(("large", "mid", "small"))
        edges = [("large", "large"), ("mid", "mid"), ("small", "small"),
                 ("large", "mid"), ("large", "small"), ("mid", "small")]
        for (u, v), n in zip(edges, xi):
            graph.add_edges_from([(u, v)] * n)
        even = all(d % 2 == 0 for _node, d in graph.degree())
        assert check("mod2", xi) is even, xi
