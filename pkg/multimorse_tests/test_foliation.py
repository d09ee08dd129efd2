import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from multimorse.core.complex import build_complex, extend_filtration
from multimorse.core.foliation import (
    Slice,
    compute_extremes,
    compute_persistence_space,
    generate_slices,
    push_to_slice,
)
from multimorse.core.gradient import compute_discrete_gradient
from multimorse.core.morse import LefschetzComplex, extract_morse_complex, simplicial_lefschetz
from multimorse.core.persistence import same_positive_persistence
from multimorse.errors import ConfigError

from .strategies import filtered_complexes


def test_extremes(t1, e1):
    assert compute_extremes(t1[1]) == ((0.0, 3.0), (2.0, 5.0))
    assert compute_extremes(e1[1]) == ((0.0, 0.0), (1.0, 1.0))
    c = build_complex(1, [])
    assert compute_extremes(extend_filtration(c, [(1, 2)])) == ((1.0, 2.0), (1.0, 2.0))


def test_extremes_need_two_parameters():
    c = build_complex(2, [(0, 1)])
    with pytest.raises(ConfigError):
        compute_extremes(extend_filtration(c, [(0, 1, 2), (1, 0, 3)]))


def test_single_slice_of_triangle():
    (s,) = generate_slices((0, 3), (2, 5), 1)
    assert s.lam == pytest.approx(math.pi / 4)
    assert s.direction == pytest.approx((math.sqrt(2) / 2, math.sqrt(2) / 2))
    assert s.b == pytest.approx((-1.5, 1.5))


def test_slice_angles_use_midpoints():
    slices = generate_slices((0, 0), (1, 1), 2)
    assert len(slices) == 4
    assert sorted({round(s.lam, 12) for s in slices}) == pytest.approx([math.pi / 8, 3 * math.pi / 8])


def test_degenerate_box_collapses_base_points():
    slices = generate_slices((1, 2), (1, 2), 3)
    assert len(slices) == 9
    for j in range(3):
        row = slices[3 * j:3 * j + 3]
        assert row[0].b == pytest.approx(row[1].b)
        assert row[1].b == pytest.approx(row[2].b)


def test_zero_slices_is_an_error():
    with pytest.raises(ConfigError):
        generate_slices((0, 0), (1, 1), 0)


@given(st.integers(1, 6), st.floats(-5, 5), st.floats(-5, 5), st.floats(0, 3), st.floats(0, 3))
def test_base_points_lie_on_antidiagonal(omega, x, y, dx, dy):
    for s in generate_slices((x, y), (x + dx, y + dy), omega):
        assert abs(s.b[0] + s.b[1]) <= 1e-12
        assert min(s.direction) > 0


def test_push_examples():
    diagonal = Slice(lam=math.pi / 4, b=(-2.5, 2.5))
    assert push_to_slice(np.array([[1.0, 4.0]]), diagonal)[0] == pytest.approx(3.5)
    origin = Slice(lam=math.pi / 4, b=(0.0, 0.0))
    assert push_to_slice(np.array([[1.0, 1.0]]), origin)[0] == pytest.approx(1.0)
    other = Slice(lam=0.3, b=(0.4, -0.4))
    assert push_to_slice(np.array([[0.4, -0.4]]), other)[0] == pytest.approx(0.0)


def test_push_is_monotone(t1):
    c, mf = t1
    m = simplicial_lefschetz(c, mf)
    for s in generate_slices((0, 3), (2, 5), 3):
        phi = push_to_slice(m.grade_array(), s)
        for i, faces in enumerate(m.facets):
            assert all(phi[j] <= phi[i] for j in faces)


def test_triangle_persistence_space(t1):
    c, mf = t1
    original = simplicial_lefschetz(c, mf)
    morse = extract_morse_complex(compute_discrete_gradient(c, mf), c, mf)
    extremes = compute_extremes(mf)

    full = compute_persistence_space(original, 1, extremes=extremes)
    reduced = compute_persistence_space(morse, 1, extremes=extremes)
    assert len(full) == len(reduced) == 1

    (_, diagram), = full.entries
    (positive,) = diagram.positive()
    assert positive.dim == 0 and math.isinf(positive.death)
    assert positive.birth == pytest.approx(2.5)
    assert same_positive_persistence(diagram, reduced.entries[0][1])


def test_morse_triangle_on_shifted_slice(t1):
    c, mf = t1
    morse = extract_morse_complex(compute_discrete_gradient(c, mf), c, mf)
    phi = push_to_slice(morse.grade_array(), Slice(lam=math.pi / 4, b=(-2.5, 2.5)))
    by_key = {cell.key: value for cell, value in zip(morse.cells, phi)}
    assert by_key[(0,)] == pytest.approx(2.5)
    assert by_key[(1,)] == pytest.approx(3.5)
    assert by_key[(0, 1)] == pytest.approx(3.5)
    assert by_key[(2,)] == pytest.approx(4.5)
    assert by_key[(1, 2)] == pytest.approx(4.5)


def test_space_frame_and_timings(t1):
    c, mf = t1
    space = compute_persistence_space(simplicial_lefschetz(c, mf), 2)
    df = space.to_frame()
    assert len(space) == 4
    assert df["lambda"].notna().all()
    assert set(df["dim"]) == {0, 1}
    assert space.timings.total >= space.timings.line_extraction >= 0


def test_empty_complex_gives_empty_diagrams():
    space = compute_persistence_space(LefschetzComplex.from_cells([], {}), 3)
    assert len(space) == 9
    assert all(len(diagram) == 0 for _, diagram in space.entries)
    assert space.to_frame().empty


def test_parallel_slices_keep_order(t1):
    c, mf = t1
    m = simplicial_lefschetz(c, mf)
    serial = compute_persistence_space(m, 3, workers=1)
    parallel = compute_persistence_space(m, 3, workers=2)
    assert [s for s, _ in serial.entries] == [s for s, _ in parallel.entries]
    assert serial.to_frame().equals(parallel.to_frame())


@settings(max_examples=60, deadline=None)
@given(filtered_complexes(n_params=st.just(2)))
def test_slice_wise_invariance(data):
    c, mf = data
    extremes = compute_extremes(mf)
    full = compute_persistence_space(simplicial_lefschetz(c, mf), 3, extremes=extremes)
    reduced = compute_persistence_space(
        extract_morse_complex(compute_discrete_gradient(c, mf), c, mf), 3, extremes=extremes
    )
    for (s, a), (t, b) in zip(full.entries, reduced.entries):
        assert s == t
        assert same_positive_persistence(a, b)
