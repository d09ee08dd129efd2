"""Homotopy expansion of a single level set.

Ord0 holds cells with no undeclared facet inside the level set, Ord1 cells with
exactly one. Both are binary heaps keyed by the caller's comparator; stale
entries (cells declared after insertion) are skipped when popped.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable

from .complex import Simplex, SimplicialComplex, facets
from .indexing import LevelSet


@dataclass
class ExpansionResult:
    pairs: list[tuple[Simplex, Simplex]] = field(default_factory=list)
    criticals: list[Simplex] = field(default_factory=list)


def homotopy_expansion(c: SimplicialComplex, level_set: LevelSet, order: Callable) -> ExpansionResult:
    members = set(level_set.simplices)
    keys = {s: order(s) for s in members}
    if len(set(keys.values())) != len(members):
        raise ValueError(f"comparator is not total on the level set at grade {level_set.grade}")

    declared: set[Simplex] = set()
    result = ExpansionResult()
    ord0: list = []
    ord1: list = []

    def undeclared_facets(tau: Simplex) -> list[Simplex]:
        return [s for s in facets(tau) if s in members and s not in declared]

    def add_cofacets(sigma: Simplex) -> None:
        for tau in c.cofacets(sigma):
            if tau in members and tau not in declared and len(undeclared_facets(tau)) == 1:
                heapq.heappush(ord1, (keys[tau], tau))

    for tau in level_set.simplices:
        count = len(undeclared_facets(tau))
        if count == 0:
            heapq.heappush(ord0, (keys[tau], tau))
        elif count == 1:
            heapq.heappush(ord1, (keys[tau], tau))

    while ord0 or ord1:
        while ord1:
            _, tau = heapq.heappop(ord1)
            if tau in declared:
                continue
            free = undeclared_facets(tau)
            if not free:
                heapq.heappush(ord0, (keys[tau], tau))
                continue
            sigma = free[0]
            result.pairs.append((sigma, tau))
            declared.add(sigma)
            declared.add(tau)
            add_cofacets(sigma)
            add_cofacets(tau)

        while ord0:
            _, tau = heapq.heappop(ord0)
            if tau in declared:
                continue
            result.criticals.append(tau)
            declared.add(tau)
            add_cofacets(tau)
            break

    return result
