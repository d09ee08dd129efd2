from collections import Counter

import pytest
from hypothesis import given, settings

from multimorse.core.complex import build_complex, extend_filtration
from multimorse.core.gradient import compute_discrete_gradient
from multimorse.core.morse import extract_morse_complex, simplicial_lefschetz
from multimorse.core.oracle import (
    build_global_indexing,
    enumerate_separatrices,
    grade_poset,
    lower_star_f,
    matching_global,
    matching_lower_stars,
    rank_invariant_bruteforce,
    run_oracle_battery,
    verify_partition_equivalence,
)
from multimorse.errors import OracleGuardError

from .conftest import A, AB, ABC, AC, B, BC, C
from .strategies import filtered_complexes, tiny_filtered_complexes


def test_global_indexing_of_triangle(t1):
    c, mf = t1
    J = build_global_indexing(c, mf)
    assert J.J[A] == 0
    assert len(J) == 7
    position = J.J
    for s in c:
        for t in c:
            if set(s) < set(t):
                assert position[s] < position[t]


def test_global_indexing_follows_grades():
    c = build_complex(3, [])
    mf = extend_filtration(c, [(0, 0), (1, 1), (2, -1)])
    order = build_global_indexing(c, mf).order
    assert order.index((0,)) < order.index((1,))
    assert order.index((0,)) < order.index((2,))


def test_lower_star_by_grade(t1):
    c, mf = t1
    assert sorted(lower_star_f(c, mf, AC)) == [(0, 1, 2), AC]
    assert lower_star_f(c, mf, AB) == [AB]
    assert lower_star_f(c, mf, A) == [A]


def test_matching_on_triangle(t1):
    c, mf = t1
    J = build_global_indexing(c, mf)
    g = matching_global(c, mf, J)
    assert g.pairs() == [(AC, ABC)]
    assert g.criticals == {A, B, C, AB, BC}
    assert g == compute_discrete_gradient(c, mf)
    assert Counter(matching_lower_stars(c, mf, J)) == Counter(
        frozenset(s) for s in [{A}, {B}, {AB}, {C}, {BC}, {AC, ABC}]
    )


def test_matching_on_edge(e1):
    c, mf = e1
    g = matching_global(c, mf, build_global_indexing(c, mf))
    assert g.pairs() == [(B, AB)]
    assert g.criticals == {A}


def test_matching_on_single_vertex():
    c = build_complex(1, [])
    mf = extend_filtration(c, [(3, 3)])
    g = matching_global(c, mf, build_global_indexing(c, mf))
    assert g.criticals == {(0,)}


def test_partition_equivalence_examples(t1, e1, circle):
    for c, mf in (t1, e1, circle):
        assert verify_partition_equivalence(c, mf)


def test_separatrix_enumeration(circle, t1):
    c, mf = circle
    g = compute_discrete_gradient(c, mf)
    assert enumerate_separatrices(g, (1, 2), (0,)) == 2

    c, mf = t1
    g = compute_discrete_gradient(c, mf)
    assert enumerate_separatrices(g, AB, A) == 1
    assert enumerate_separatrices(g, BC, A) == 0


def test_grade_poset_of_triangle(t1):
    c, mf = t1
    poset = grade_poset(mf.grade(s) for s in c)
    assert poset == [(0.0, 5.0), (1.0, 4.0), (1.0, 5.0), (2.0, 3.0), (2.0, 4.0), (2.0, 5.0)]


def test_grade_poset_adds_joins():
    assert grade_poset([(0, 1), (1, 0)]) == [(0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]


def test_rank_invariant_of_triangle(t1):
    c, mf = t1
    original = simplicial_lefschetz(c, mf)
    morse = extract_morse_complex(compute_discrete_gradient(c, mf), c, mf)
    poset = [cell.grade for cell in original.cells]

    full = rank_invariant_bruteforce(original, grades=poset, top_dim=2)
    reduced = rank_invariant_bruteforce(morse, grades=poset, top_dim=2)
    assert full[(0, (1.0, 4.0), (2.0, 5.0))] == 1
    assert full[(0, (1.0, 4.0), (1.0, 4.0))] == 1
    assert full[(0, (2.0, 5.0), (2.0, 5.0))] == 1
    assert full[(1, (2.0, 4.0), (2.0, 4.0))] == 0
    assert full == reduced


def test_rank_invariant_of_circle(circle):
    c, mf = circle
    ranks = rank_invariant_bruteforce(simplicial_lefschetz(c, mf))
    assert ranks[(1, (2.0, 2.0), (2.0, 2.0))] == 1
    assert ranks[(0, (0.0, 0.0), (1.0, 1.0))] == 1
    assert ranks[(0, (1.0, 1.0), (1.0, 1.0))] == 1


def test_rank_invariant_guard(t1):
    c, mf = t1
    with pytest.raises(OracleGuardError):
        rank_invariant_bruteforce(simplicial_lefschetz(c, mf), max_cells=5)


def test_rank_invariant_frame(t1):
    c, mf = t1
    df = rank_invariant_bruteforce(simplicial_lefschetz(c, mf)).to_frame()
    assert list(df.columns) == ["dim", "u", "v", "rank"]
    assert (df["rank"] >= 0).all()


def test_battery_on_edge(e1):
    c, mf = e1
    report = run_oracle_battery(c, mf)
    assert set(report.status) == {"pass"}
    assert "matching_equivalence" in set(report.property)


def test_battery_skips_slices_for_three_parameters():
    c = build_complex(3, [(0, 1, 2)])
    mf = extend_filtration(c, [(0, 2, 1), (1, 0, 2), (2, 1, 0)])
    report = run_oracle_battery(c, mf).set_index("property")
    assert report.loc["slice_invariance", "status"] == "skipped"
    assert (report.drop("slice_invariance").status == "pass").all()


@settings(max_examples=500, deadline=None)
@given(filtered_complexes())
def test_local_gradient_matches_global_matching(data):
    c, mf = data
    J = build_global_indexing(c, mf)
    assert matching_global(c, mf, J) == compute_discrete_gradient(c, mf)
    assert verify_partition_equivalence(c, mf)


@settings(max_examples=100, deadline=None)
@given(tiny_filtered_complexes())
def test_rank_invariant_survives_reduction(data):
    c, mf = data
    original = simplicial_lefschetz(c, mf)
    morse = extract_morse_complex(compute_discrete_gradient(c, mf), c, mf)
    poset = [cell.grade for cell in original.cells]
    top = max(original.dim, morse.dim)
    assert rank_invariant_bruteforce(original, grades=poset, top_dim=top) == rank_invariant_bruteforce(
        morse, grades=poset, top_dim=top
    )


@settings(max_examples=100, deadline=None)
@given(tiny_filtered_complexes())
def test_separatrix_parity_matches_enumeration(data):
    c, mf = data
    g = compute_discrete_gradient(c, mf)
    morse = extract_morse_complex(g, c, mf)
    for tau_id, faces in enumerate(morse.facets):
        tau = morse.cells[tau_id]
        for sigma_id in morse.cells_of_dim(tau.dim - 1):
            parity = enumerate_separatrices(g, tau.key, morse.cells[sigma_id].key) % 2
            assert parity == (sigma_id in faces)
