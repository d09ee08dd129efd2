"""Local discrete gradient computation and its validity checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import networkx as nx
import numpy as np
from dagster import get_dagster_logger
from joblib import Parallel, delayed

from ..errors import IllegalPairingError
from .complex import MultiFiltration, Simplex, SimplicialComplex, facets
from .expansion import ExpansionResult, homotopy_expansion
from .indexing import VertexIndexing, compute_indexing, index_lower_star, split_index_lower_star

log = get_dagster_logger(__name__)


def _canonical(simplex: Simplex) -> tuple[int, Simplex]:
    return (len(simplex), simplex)


@dataclass(frozen=True)
class DiscreteGradient:
    """Pairing map in both directions plus the set of unpaired simplices."""

    pairing: Mapping[Simplex, Simplex]
    criticals: frozenset

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Simplex, Simplex]], criticals: Iterable[Simplex] = ()) -> "DiscreteGradient":
        pairing: dict[Simplex, Simplex] = {}
        for sigma, tau in pairs:
            for s in (sigma, tau):
                if s in pairing:
                    raise IllegalPairingError(f"simplex {s} appears in two vectors")
            pairing[sigma] = tau
            pairing[tau] = sigma
        criticals = frozenset(criticals)
        clash = next((s for s in criticals if s in pairing), None)
        if clash is not None:
            raise IllegalPairingError(f"simplex {clash} is both paired and critical")
        return cls(pairing=pairing, criticals=criticals)

    @classmethod
    def from_results(cls, results: Iterable[ExpansionResult]) -> "DiscreteGradient":
        pairs: list[tuple[Simplex, Simplex]] = []
        criticals: list[Simplex] = []
        for result in results:
            pairs.extend(result.pairs)
            criticals.extend(result.criticals)
        return cls.from_pairs(pairs, criticals)

    def __len__(self) -> int:
        return len(self.pairing) + len(self.criticals)

    def is_critical(self, simplex: Simplex) -> bool:
        return simplex in self.criticals

    def upper(self, simplex: Simplex) -> Simplex | None:
        """The cofacet the simplex is paired with, if it is the tail of a vector."""
        other = self.pairing.get(simplex)
        if other is not None and len(other) > len(simplex):
            return other
        return None

    def pairs(self) -> list[tuple[Simplex, Simplex]]:
        lowers = sorted((s for s, t in self.pairing.items() if len(t) > len(s)), key=_canonical)
        return [(s, self.pairing[s]) for s in lowers]

    def critical_list(self) -> list[Simplex]:
        return sorted(self.criticals, key=_canonical)

    def critical_counts(self) -> list[int]:
        counts: list[int] = []
        for s in self.criticals:
            while len(counts) < len(s):
                counts.append(0)
            counts[len(s) - 1] += 1
        return counts


def _process_vertices(
    c: SimplicialComplex, mf: MultiFiltration, idx: VertexIndexing, vertices: Sequence[int]
) -> list[ExpansionResult]:
    results = []
    for v in vertices:
        low = index_lower_star(v, idx, c)
        for level_set in split_index_lower_star(v, low, mf, idx):
            results.append(homotopy_expansion(c, level_set, idx.sort_key))
    return results


def vertex_batches(ordered: Sequence[int], workers: int) -> list[list[int]]:
    """One contiguous batch per worker, in vertex order."""
    return [chunk.tolist() for chunk in np.array_split(np.asarray(ordered, dtype=np.int64), workers) if len(chunk)]


def compute_discrete_gradient(c: SimplicialComplex, mf: MultiFiltration, workers: int = 1) -> DiscreteGradient:
    idx = compute_indexing(mf)
    ordered = idx.vertices_in_order()

    if workers <= 1 or len(ordered) < 2 * workers:
        buffers = [_process_vertices(c, mf, idx, ordered)]
    else:
        batches = vertex_batches(ordered, workers)
        buffers = Parallel(n_jobs=workers)(delayed(_process_vertices)(c, mf, idx, batch) for batch in batches)

    gradient = DiscreteGradient.from_results(result for buffer in buffers for result in buffer)
    log.info(f"Gradient: {len(c)} cells, {len(gradient.criticals)} critical, {len(gradient.pairing) // 2} vectors")
    return gradient


def _check_pairing(g: DiscreteGradient, c: SimplicialComplex) -> None:
    for sigma, tau in g.pairs():
        if sigma not in c or tau not in c:
            raise IllegalPairingError(f"vector ({sigma}, {tau}) uses a simplex outside the complex")
        if len(tau) != len(sigma) + 1 or not set(sigma).issubset(tau):
            raise IllegalPairingError(f"{sigma} is not a facet of {tau}")


def verify_gradient_acyclic(g: DiscreteGradient, c: SimplicialComplex) -> bool:
    """True iff no V-path closes up. Illegal vectors raise instead of returning False."""
    _check_pairing(g, c)
    layers: dict[int, nx.DiGraph] = {}
    for sigma, tau in g.pairs():
        graph = layers.setdefault(len(sigma), nx.DiGraph())
        graph.add_edge(sigma, tau)
        for face in facets(tau):
            if face != sigma:
                graph.add_edge(tau, face)
    return all(nx.is_directed_acyclic_graph(graph) for graph in layers.values())


def verify_compatibility(g: DiscreteGradient, mf: MultiFiltration) -> bool:
    return all(mf.grade(sigma) == mf.grade(tau) for sigma, tau in g.pairs())


def stats_line(cell_count: int, critical_count: int) -> str:
    compression = cell_count / critical_count if critical_count else float("nan")
    return f"cells={cell_count} criticals={critical_count} compression={compression:.2f}"


def format_gradient_dump(g: DiscreteGradient) -> list[str]:
    def show(s: Simplex) -> str:
        return " ".join(str(v) for v in s)

    lines = [f"P {show(sigma)} | {show(tau)}" for sigma, tau in g.pairs()]
    lines.extend(f"C {show(s)}" for s in g.critical_list())
    return lines
