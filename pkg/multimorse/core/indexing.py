"""Well-extensible vertex indexing and the index-based lower-star decomposition."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from ..errors import InjectivityError
from .complex import Multigrade, MultiFiltration, Simplex, SimplicialComplex


@dataclass(frozen=True)
class VertexIndexing:
    rank: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.rank)

    def simplex_index(self, simplex: Simplex) -> int:
        return max(self.rank[v] for v in simplex)

    def lex_key(self, simplex: Simplex) -> tuple[int, ...]:
        """Vertex ranks in decreasing order."""
        return tuple(sorted((self.rank[v] for v in simplex), reverse=True))

    def sort_key(self, simplex: Simplex) -> tuple[int, tuple[int, ...]]:
        # faces are shorter than their cofaces, so they always sort first
        return (len(simplex), self.lex_key(simplex))

    def top_vertex(self, simplex: Simplex) -> int:
        return max(simplex, key=lambda v: self.rank[v])

    def vertices_in_order(self) -> list[int]:
        return sorted(range(len(self.rank)), key=self.rank.__getitem__)


@dataclass(frozen=True)
class LevelSet:
    owner: int
    grade: Multigrade
    simplices: tuple[Simplex, ...]

    def __len__(self) -> int:
        return len(self.simplices)

    def __contains__(self, simplex) -> bool:
        return simplex in self.simplices


def compute_indexing(mf: MultiFiltration) -> VertexIndexing:
    """Ranks vertices by their first filtration component."""
    first = mf.values[:, 0]
    if len(np.unique(first)) != len(first):
        raise InjectivityError("first filtration component has duplicate vertex values")
    order = np.argsort(first, kind="stable")
    rank = np.empty(len(first), dtype=np.int64)
    rank[order] = np.arange(len(first))
    return VertexIndexing(rank=tuple(rank.tolist()))


def index_lower_star(v: int, idx: VertexIndexing, c: SimplicialComplex) -> list[Simplex]:
    """Cofaces of v whose highest-ranked vertex is v."""
    own = idx.rank[v]
    low = [tau for tau in c.incident(v) if idx.simplex_index(tau) == own]
    low.sort(key=idx.sort_key)
    return low


def split_index_lower_star(
    v: int, low: Iterable[Simplex], mf: MultiFiltration, idx: VertexIndexing
) -> list[LevelSet]:
    groups: dict[Multigrade, list[Simplex]] = {}
    for simplex in low:
        groups.setdefault(mf.grade(simplex), []).append(simplex)
    return [
        LevelSet(owner=v, grade=grade, simplices=tuple(sorted(groups[grade], key=idx.sort_key)))
        for grade in sorted(groups)
    ]


def decompose(
    c: SimplicialComplex,
    mf: MultiFiltration,
    idx: VertexIndexing,
    vertices: Sequence[int] | None = None,
) -> Iterator[LevelSet]:
    """Yields every level set, vertices in rank order unless an explicit order is given."""
    for v in idx.vertices_in_order() if vertices is None else vertices:
        yield from split_index_lower_star(v, index_lower_star(v, idx, c), mf, idx)


def format_level_set(level_set: LevelSet) -> str:
    grade = ",".join(repr(float(x)) for x in level_set.grade)
    cells = ",".join("(" + ",".join(str(v) for v in s) + ")" for s in level_set.simplices)
    return f"v={level_set.owner} grade={grade} cells={cells}"
