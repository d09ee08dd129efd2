import math

import numpy as np
import pytest
from hypothesis import given, settings

from multimorse.core.complex import (
    build_complex,
    extend_filtration,
    facets,
    join,
    make_injective,
    precedes,
    star,
    strictly_precedes,
)
from multimorse.errors import ComplexError, InjectivityError, SimplexNotFoundError

from .conftest import A, AB, ABC, AC, B, BC, C
from .strategies import filtered_complexes


def test_triangle_is_face_closed(t1):
    c, _ = t1
    assert c.counts() == [3, 3, 1]
    assert len(c) == 7
    assert c.dim == 2
    assert set(c) == {A, B, C, AB, AC, BC, ABC}
    assert c.euler_characteristic() == 1
    assert sorted(c.simplices_of_dim(1)) == [AB, AC, BC]
    assert c.simplices_of_dim(3) == []


def test_duplicate_tops_are_merged():
    c = build_complex(3, [(0, 1), (1, 0), (0, 1, 2), (2, 1, 0)])
    assert len(c) == 7


def test_isolated_vertices_belong_to_the_complex():
    c = build_complex(4, [(0, 1)])
    assert c.counts() == [4, 1]
    assert c.incident(3) == ((3,),)


def test_empty_complex():
    c = build_complex(0, [])
    assert len(c) == 0
    assert c.dim == -1


@pytest.mark.parametrize("tops", [[(0, 0, 1)], [(0, 3)], [(-1, 0)]])
def test_invalid_tops_raise(tops):
    with pytest.raises(ComplexError):
        build_complex(3, tops)


def test_star_of_shared_vertex():
    c = build_complex(4, [(0, 1, 2), (1, 2, 3)])
    assert sorted(star(c, (1,))) == sorted([(1,), (0, 1), (1, 2), (1, 3), (0, 1, 2), (1, 2, 3)])
    assert sorted(star(c, (1, 2))) == [(0, 1, 2), (1, 2), (1, 2, 3)]


def test_star_of_missing_simplex():
    c = build_complex(3, [(0, 1)])
    with pytest.raises(SimplexNotFoundError):
        star(c, (1, 2))
    with pytest.raises(KeyError):
        c.star((0, 2))


def test_facets_and_cofacets(t1):
    c, _ = t1
    assert facets(ABC) == [BC, AC, AB]
    assert facets(A) == []
    assert sorted(c.cofacets(A)) == [AB, AC]
    assert c.cofacets(ABC) == ()


def test_grade_order():
    assert precedes((0, 1), (0, 1))
    assert strictly_precedes((0, 1), (1, 1))
    assert not precedes((0, 5), (1, 4)) and not precedes((1, 4), (0, 5))
    assert join((0, 5), (1, 4)) == (1, 5)


def test_max_extension(t1):
    _, mf = t1
    assert mf.grade(AB) == (1, 5)
    assert mf.grade(AC) == (2, 5)
    assert mf.grade(BC) == (2, 4)
    assert mf.grade(ABC) == (2, 5)
    assert mf.vertex_grade(1) == (1, 4)
    assert mf.n_params == 2


def test_non_injective_values_are_rejected():
    c = build_complex(3, [(0, 1, 2)])
    with pytest.raises(InjectivityError):
        extend_filtration(c, [(0, 1), (0, 2), (1, 3)])


def test_auto_perturb_replaces_values_by_ranks():
    c = build_complex(3, [(0, 1, 2)])
    mf = extend_filtration(c, [(0, 1), (0, 2), (1, 3)], auto_perturb=True)
    np.testing.assert_array_equal(mf.values[:, 0], [0, 1, 2])
    np.testing.assert_array_equal(mf.values[:, 1], [0, 1, 2])


def test_make_injective_breaks_ties_by_vertex_id():
    np.testing.assert_array_equal(make_injective([[5.0], [1.0], [5.0]])[:, 0], [1, 0, 2])


def test_non_finite_values_are_rejected():
    c = build_complex(3, [(0, 1)])
    with pytest.raises(ComplexError, match="non-finite"):
        extend_filtration(c, [(0, 1), (math.nan, 2), (2, 3)])


def test_filtration_row_count_must_match():
    c = build_complex(3, [(0, 1)])
    with pytest.raises(InjectivityError):
        extend_filtration(c, [(0, 1), (1, 0)])


@settings(max_examples=100, deadline=None)
@given(filtered_complexes())
def test_filtration_is_monotone_and_stars_are_indexed(data):
    c, mf = data
    for simplex in c:
        for face in facets(simplex):
            assert face in c
            assert precedes(mf.grade(face), mf.grade(simplex))
        for v in simplex:
            assert simplex in c.incident(v)
    assert sum(len(c.incident(v)) for v in range(c.vertex_count)) == sum(len(s) for s in c)
