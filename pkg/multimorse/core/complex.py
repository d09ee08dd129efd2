"""Simplicial complexes with precomputed stars, and multiparameter vertex filtrations.

Simplices are plain tuples of vertex ids in ascending order. Stars and cofacet
lists are built once at construction; afterwards a complex is read-only and can
be shared across workers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np
from dagster import get_dagster_logger

from ..errors import ComplexError, InjectivityError, SimplexNotFoundError

log = get_dagster_logger(__name__)

Simplex = tuple[int, ...]
Multigrade = tuple[float, ...]


def precedes(u: Multigrade, v: Multigrade) -> bool:
    """Component-wise order u ⪯ v. Incomparable grades give False both ways."""
    return all(a <= b for a, b in zip(u, v))


def strictly_precedes(u: Multigrade, v: Multigrade) -> bool:
    return u != v and precedes(u, v)


def join(u: Multigrade, v: Multigrade) -> Multigrade:
    return tuple(max(a, b) for a, b in zip(u, v))


def dim(simplex: Simplex) -> int:
    return len(simplex) - 1


def facets(simplex: Simplex) -> list[Simplex]:
    if len(simplex) == 1:
        return []
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


@dataclass
class SimplicialComplex:
    vertex_count: int
    simplices: list[list[Simplex]]
    _members: set = field(repr=False)
    _star_index: dict = field(repr=False)
    _cofacets: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, simplex) -> bool:
        return simplex in self._members

    def __iter__(self) -> Iterator[Simplex]:
        for layer in self.simplices:
            yield from layer

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        if 0 <= k < len(self.simplices):
            return self.simplices[k]
        return []

    def facets(self, simplex: Simplex) -> list[Simplex]:
        return facets(simplex)

    def cofacets(self, simplex: Simplex) -> tuple[Simplex, ...]:
        return self._cofacets.get(simplex, ())

    def incident(self, vertex: int) -> tuple[Simplex, ...]:
        """Star index entry: every simplex containing the vertex, itself included."""
        return self._star_index[vertex]

    def star(self, simplex: Simplex) -> list[Simplex]:
        if simplex not in self._members:
            raise SimplexNotFoundError(f"simplex {simplex} is not in the complex")
        anchor = min(simplex, key=lambda v: len(self._star_index[v]))
        wanted = set(simplex)
        return [tau for tau in self._star_index[anchor] if wanted.issubset(tau)]

    def counts(self) -> list[int]:
        return [len(layer) for layer in self.simplices]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.counts()))


def build_complex(vertex_count: int, top_simplices: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Face-closes the given simplices. Every id below vertex_count is a vertex."""
    if vertex_count < 0:
        raise ComplexError(f"vertex count must be non-negative, got {vertex_count}")

    members: set[Simplex] = {(v,) for v in range(vertex_count)}
    for top in top_simplices:
        top = tuple(int(v) for v in top)
        if not top:
            continue
        if len(set(top)) != len(top):
            raise ComplexError(f"duplicate vertex in simplex {top}")
        bad = [v for v in top if v < 0 or v >= vertex_count]
        if bad:
            raise ComplexError(f"vertex id {bad[0]} out of range [0, {vertex_count}) in simplex {top}")
        top = tuple(sorted(top))
        if top in members:
            continue
        for k in range(2, len(top) + 1):
            members.update(combinations(top, k))

    top_dim = max((len(s) for s in members), default=0) - 1
    layers: list[list[Simplex]] = [[] for _ in range(top_dim + 1)]
    for simplex in members:
        layers[len(simplex) - 1].append(simplex)
    for layer in layers:
        layer.sort()

    star_index: dict[int, list[Simplex]] = {v: [] for v in range(vertex_count)}
    cofacets: dict[Simplex, list[Simplex]] = {}
    for layer in layers:
        for simplex in layer:
            for v in simplex:
                star_index[v].append(simplex)
            for face in facets(simplex):
                cofacets.setdefault(face, []).append(simplex)

    return SimplicialComplex(
        vertex_count=vertex_count,
        simplices=layers,
        _members=members,
        _star_index={v: tuple(s) for v, s in star_index.items()},
        _cofacets={s: tuple(c) for s, c in cofacets.items()},
    )


def star(c: SimplicialComplex, simplex: Simplex) -> list[Simplex]:
    return c.star(simplex)


@dataclass
class MultiFiltration:
    """Vertex values f (one row per vertex) and their max-extension to every simplex."""

    values: np.ndarray
    grades: dict

    @property
    def n_params(self) -> int:
        return self.values.shape[1]

    def grade(self, simplex: Simplex) -> Multigrade:
        return self.grades[simplex]

    def vertex_grade(self, vertex: int) -> Multigrade:
        return self.grades[(vertex,)]


def _non_injective_components(values: np.ndarray) -> list[int]:
    return [i for i in range(values.shape[1]) if len(np.unique(values[:, i])) != values.shape[0]]


def make_injective(values) -> np.ndarray:
    """Replaces each component by its rank, ties broken by ascending vertex id."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    ranked = np.empty_like(values)
    ids = np.arange(values.shape[0])
    for i in range(values.shape[1]):
        order = np.lexsort((ids, values[:, i]))
        ranked[order, i] = np.arange(values.shape[0], dtype=float)
    return ranked


def extend_filtration(c: SimplicialComplex, values, auto_perturb: bool = False) -> MultiFiltration:
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if values.shape[0] != c.vertex_count:
        raise InjectivityError(f"filtration has {values.shape[0]} vertex rows, complex has {c.vertex_count} vertices")
    if values.shape[1] < 1:
        raise InjectivityError("filtration needs at least one parameter")
    if not np.isfinite(values).all():
        raise ComplexError("filtration has non-finite vertex values")

    clashes = _non_injective_components(values)
    if clashes:
        if not auto_perturb:
            raise InjectivityError(
                f"filtration component(s) {[i + 1 for i in clashes]} are not injective on vertices "
                "(rerun with --auto-perturb to replace values by ranks)"
            )
        log.warning(f"Components {[i + 1 for i in clashes]} have ties; replacing vertex values by ranks")
        values = make_injective(values)

    grades: dict[Simplex, Multigrade] = {}
    for layer in c.simplices:
        if not layer:
            continue
        vertex_rows = np.asarray(layer, dtype=np.int64)
        maxima = values[vertex_rows].max(axis=1)
        for simplex, row in zip(layer, maxima.tolist()):
            grades[simplex] = tuple(row)
    assert all(precedes(grades[f], grades[s]) for s in grades if len(s) > 1 for f in facets(s)), "extension is not monotone"
    return MultiFiltration(values=values, grades=grades)
