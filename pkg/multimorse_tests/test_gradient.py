import pytest
from hypothesis import given, settings

from multimorse.core.complex import build_complex, extend_filtration
from multimorse.core.gradient import (
    DiscreteGradient,
    compute_discrete_gradient,
    format_gradient_dump,
    stats_line,
    verify_compatibility,
    verify_gradient_acyclic,
    vertex_batches,
)
from multimorse.core.morse import betti_numbers_f2, extract_morse_complex, simplicial_lefschetz
from multimorse.errors import IllegalPairingError

from .conftest import A, AB, ABC, AC, B, BC, C
from .strategies import filtered_complexes


def test_triangle_gradient(t1):
    c, mf = t1
    g = compute_discrete_gradient(c, mf)
    assert g.pairs() == [(AC, ABC)]
    assert g.criticals == {A, B, C, AB, BC}
    assert g.critical_counts() == [3, 2]
    assert len(g) == len(c)


def test_edge_gradient(e1):
    c, mf = e1
    g = compute_discrete_gradient(c, mf)
    assert g.pairs() == [(B, AB)]
    assert g.criticals == {A}


def test_single_vertex_gradient():
    c = build_complex(1, [])
    g = compute_discrete_gradient(c, extend_filtration(c, [(4, 2)]))
    assert g.criticals == {(0,)}
    assert g.pairs() == []


def test_parallel_matches_sequential():
    c = build_complex(9, [(0, 1, 3), (1, 3, 4), (1, 2, 4), (2, 4, 5), (3, 4, 6), (4, 6, 7), (4, 5, 7), (5, 7, 8)])
    values = [(3, 1), (0, 4), (7, 2), (5, 8), (1, 0), (8, 6), (2, 7), (6, 3), (4, 5)]
    mf = extend_filtration(c, values)
    assert compute_discrete_gradient(c, mf, workers=3) == compute_discrete_gradient(c, mf, workers=1)


def test_one_vertex_batch_per_worker():
    ordered = [4, 0, 6, 1, 8, 3, 7, 2, 5]
    batches = vertex_batches(ordered, 3)
    assert batches == [[4, 0, 6], [1, 8, 3], [7, 2, 5]]
    assert len(vertex_batches(ordered, 4)) == 4
    assert sum(vertex_batches(ordered, 4), []) == ordered
    assert vertex_batches(ordered[:2], 5) == [[4], [0]]


def test_triangle_gradient_is_valid(t1):
    c, mf = t1
    g = compute_discrete_gradient(c, mf)
    assert verify_gradient_acyclic(g, c)
    assert verify_compatibility(g, mf)


def test_closed_v_path_is_detected():
    c = build_complex(3, [(0, 1), (1, 2), (0, 2)])
    g = DiscreteGradient.from_pairs([((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))])
    assert not verify_gradient_acyclic(g, c)


def test_incompatible_pair_is_detected(e1):
    c, mf = e1
    g = DiscreteGradient.from_pairs([(A, AB)], [B])
    assert verify_gradient_acyclic(g, c)
    assert not verify_compatibility(g, mf)


def test_illegal_pairs_raise(t1):
    c, _ = t1
    with pytest.raises(IllegalPairingError):
        DiscreteGradient.from_pairs([(A, AB), (A, AC)])
    with pytest.raises(IllegalPairingError):
        DiscreteGradient.from_pairs([(A, AB)], [A])
    with pytest.raises(IllegalPairingError):
        verify_gradient_acyclic(DiscreteGradient.from_pairs([(A, BC)]), c)


def test_gradient_equality_ignores_insertion_order():
    first = DiscreteGradient.from_pairs([(B, AB), (C, AC)], [A])
    second = DiscreteGradient.from_pairs([(C, AC), (B, AB)], [A])
    assert first == second


def test_stats_line():
    assert stats_line(7, 5) == "cells=7 criticals=5 compression=1.40"
    assert stats_line(3, 1) == "cells=3 criticals=1 compression=3.00"
    assert "nan" in stats_line(0, 0)


def test_gradient_dump(t1):
    c, mf = t1
    assert format_gradient_dump(compute_discrete_gradient(c, mf)) == [
        "P 0 2 | 0 1 2",
        "C 0",
        "C 1",
        "C 2",
        "C 0 1",
        "C 1 2",
    ]


@settings(max_examples=500, deadline=None)
@given(filtered_complexes())
def test_gradient_is_valid_and_preserves_homology(data):
    c, mf = data
    g = compute_discrete_gradient(c, mf)
    assert verify_gradient_acyclic(g, c)
    assert verify_compatibility(g, mf)
    assert len(g) == len(c)
    assert set(g.pairing) | set(g.criticals) == set(c)
    critical_chi = sum((-1) ** k * n for k, n in enumerate(g.critical_counts()))
    assert critical_chi == c.euler_characteristic()

    original = simplicial_lefschetz(c, mf)
    morse = extract_morse_complex(g, c, mf)
    top = max(original.dim, morse.dim)
    assert betti_numbers_f2(morse, top) == betti_numbers_f2(original, top)
    assert morse.grades_monotone()
