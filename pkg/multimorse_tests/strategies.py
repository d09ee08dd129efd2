"""Random filtered complexes for the property tests."""
from itertools import combinations

import numpy as np
from hypothesis import strategies as st

from multimorse.core.complex import build_complex, extend_filtration


def grid_triangles(rows, cols):
    def vid(i, j):
        return i * cols + j

    out = []
    for i in range(rows - 1):
        for j in range(cols - 1):
            out.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            out.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return out


def torus_triangles(n_u, n_v):
    def vid(i, j):
        return (i % n_u) * n_v + (j % n_v)

    out = []
    for i in range(n_u):
        for j in range(n_v):
            out.append((vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)))
            out.append((vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)))
    return out


@st.composite
def injective_values(draw, vertex_count, n_params):
    columns = [draw(st.permutations(range(vertex_count))) for _ in range(n_params)]
    return np.asarray(columns, dtype=float).T.reshape(vertex_count, n_params)


@st.composite
def top_simplices(draw, max_vertices=16):
    """Subsets of a triangulated grid, a small torus, or of the 4-cliques on six vertices."""
    kind = draw(st.sampled_from(["grid", "torus", "clique"]))
    if kind == "grid":
        rows = draw(st.integers(2, 4))
        cols = draw(st.integers(2, 4))
        vertex_count, pool = rows * cols, grid_triangles(rows, cols)
    elif kind == "torus":
        n_u = draw(st.integers(3, 4))
        n_v = 3
        vertex_count, pool = n_u * n_v, torus_triangles(n_u, n_v)
    else:
        vertex_count = 6
        pool = list(combinations(range(6), 4)) + list(combinations(range(6), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pool), max_size=len(pool)))
    return vertex_count, [t for t, k in zip(pool, keep) if k]


@st.composite
def filtered_complexes(draw, n_params=st.sampled_from([2, 3])):
    vertex_count, tops = draw(top_simplices())
    c = build_complex(vertex_count, tops)
    n = draw(n_params)
    mf = extend_filtration(c, draw(injective_values(vertex_count, n)))
    return c, mf


@st.composite
def tiny_filtered_complexes(draw, n_params=st.sampled_from([2, 3])):
    """At most 5 vertices and 60 simplices, for the rank-invariant oracle."""
    vertex_count = draw(st.integers(1, 5))
    pool = [s for k in (2, 3, 4) for s in combinations(range(vertex_count), k)]
    tops = draw(st.lists(st.sampled_from(pool), max_size=6)) if pool else []
    c = build_complex(vertex_count, tops)
    n = draw(n_params)
    mf = extend_filtration(c, draw(injective_values(vertex_count, n)))
    return c, mf
