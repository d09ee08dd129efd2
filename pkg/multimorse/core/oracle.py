"""Brute-force reference implementations used to verify the fast pipeline.

Everything here is quadratic or worse and only meant for small inputs. The
battery in `run_oracle_battery` skips a check (and says so) when the input is
above that check's size guard.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Callable, Iterable, Optional, Sequence

import networkx as nx
import numpy as np
import pandas as pd
from dagster import get_dagster_logger

from ..errors import ComplexError, GradientCycleError, OracleGuardError
from .complex import Multigrade, MultiFiltration, Simplex, SimplicialComplex, facets, join, precedes
from .expansion import homotopy_expansion
from .foliation import compute_extremes, compute_persistence_space
from .gradient import DiscreteGradient, compute_discrete_gradient, verify_compatibility, verify_gradient_acyclic
from .indexing import LevelSet, VertexIndexing, compute_indexing, decompose
from .morse import LefschetzComplex, betti_numbers_f2, boundary_matrix, extract_morse_complex, gf2_nullspace, gf2_rank, simplicial_lefschetz
from .persistence import same_positive_persistence

log = get_dagster_logger(__name__)

MATCHING_GUARD = 2000
SEPARATRIX_GUARD = 40
RANK_INVARIANT_GUARD = 60
RANK_INVARIANT_MAX_CELLS = 500


@dataclass(frozen=True)
class GlobalIndexing:
    order: tuple[Simplex, ...]

    @property
    def J(self) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.order)}

    def __len__(self) -> int:
        return len(self.order)


def build_global_indexing(
    c: SimplicialComplex, mf: MultiFiltration, idx: Optional[VertexIndexing] = None
) -> GlobalIndexing:
    """Topological order of (facet relation) ∪ (strict grade order), ties broken by
    (simplex index, dimension, lex key)."""
    idx = idx or compute_indexing(mf)
    simplices = list(c)
    graph = nx.DiGraph()
    graph.add_nodes_from(simplices)
    for s in simplices:
        for face in facets(s):
            graph.add_edge(face, s)

    if simplices:
        grades = np.asarray([mf.grade(s) for s in simplices], dtype=float)
        below = (grades[:, None, :] <= grades[None, :, :]).all(axis=2)
        differs = (grades[:, None, :] != grades[None, :, :]).any(axis=2)
        for i, j in zip(*np.nonzero(below & differs)):
            graph.add_edge(simplices[i], simplices[j])

    try:
        order = nx.lexicographical_topological_sort(
            graph, key=lambda s: (idx.simplex_index(s), len(s), idx.lex_key(s))
        )
        return GlobalIndexing(order=tuple(order))
    except nx.NetworkXUnfeasible as err:
        raise ComplexError("facet and grade relations contain a cycle; the filtration is not monotone") from err


def lower_star_f(c: SimplicialComplex, mf: MultiFiltration, sigma: Simplex) -> list[Simplex]:
    grade = mf.grade(sigma)
    return [tau for tau in c.star(sigma) if precedes(mf.grade(tau), grade)]


def _global_level_sets(c: SimplicialComplex, mf: MultiFiltration, J: GlobalIndexing, order: Callable):
    classified: set[Simplex] = set()
    for sigma in J.order:
        if sigma in classified:
            continue
        members = sorted(lower_star_f(c, mf, sigma), key=order)
        classified.update(members)
        yield sigma, LevelSet(owner=sigma[-1], grade=mf.grade(sigma), simplices=tuple(members))


def matching_lower_stars(c: SimplicialComplex, mf: MultiFiltration, J: GlobalIndexing) -> list[frozenset]:
    order = compute_indexing(mf).sort_key
    return [frozenset(ls.simplices) for _, ls in _global_level_sets(c, mf, J, order)]


def matching_global(
    c: SimplicialComplex, mf: MultiFiltration, J: GlobalIndexing, order: Optional[Callable] = None
) -> DiscreteGradient:
    order = order or compute_indexing(mf).sort_key
    results = [homotopy_expansion(c, ls, order) for _, ls in _global_level_sets(c, mf, J, order)]
    return DiscreteGradient.from_results(results)


def verify_partition_equivalence(c: SimplicialComplex, mf: MultiFiltration) -> bool:
    idx = compute_indexing(mf)
    local = Counter(frozenset(ls.simplices) for ls in decompose(c, mf, idx))
    J = build_global_indexing(c, mf, idx)
    global_sets = matching_lower_stars(c, mf, J)
    if local != Counter(global_sets):
        return False

    for level_set in global_sets:
        owners = [s for s in level_set if frozenset(lower_star_f(c, mf, s)) == level_set]
        if len(owners) != 1:
            return False
        common = tuple(sorted(reduce(lambda acc, s: acc & set(s), level_set, set(next(iter(level_set))))))
        if owners[0] != common:
            return False
    return True


def enumerate_separatrices(g: DiscreteGradient, tau: Simplex, sigma: Simplex) -> int:
    """Number of distinct V-paths from a facet of tau down to sigma, by exhaustive search."""
    count = 0
    stack = [(face, (face,)) for face in facets(tau)]
    while stack:
        node, path = stack.pop()
        if node == sigma:
            count += 1
            continue
        up = g.upper(node)
        if up is None or g.is_critical(node):
            continue
        for nxt in facets(up):
            if nxt == node:
                continue
            if nxt in path:
                raise GradientCycleError(f"closed V-path through {nxt}")
            stack.append((nxt, path + (nxt,)))
    return count


def grade_poset(grades: Iterable[Multigrade]) -> list[Multigrade]:
    """Realized grades closed under component-wise max, sorted."""
    closure = set(tuple(float(x) for x in g) for g in grades)
    frontier = set(closure)
    while frontier:
        fresh = {join(u, v) for u in frontier for v in closure} - closure
        closure |= fresh
        frontier = fresh
    return sorted(closure)


@dataclass
class RankInvariant:
    ranks: dict[tuple[int, Multigrade, Multigrade], int] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, Multigrade, Multigrade]) -> int:
        return self.ranks[key]

    def __eq__(self, other) -> bool:
        return isinstance(other, RankInvariant) and self.ranks == other.ranks

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {"dim": k, "u": ",".join(repr(x) for x in u), "v": ",".join(repr(x) for x in v), "rank": r}
            for (k, u, v), r in sorted(self.ranks.items())
        ]
        df = pd.DataFrame(rows, columns=["dim", "u", "v", "rank"])
        return df.astype({"dim": "int64", "u": "string", "v": "string", "rank": "int64"})


def _sublevel(m: LefschetzComplex, grade: Multigrade) -> frozenset:
    return frozenset(i for i, cell in enumerate(m.cells) if precedes(cell.grade, grade))


def rank_invariant_bruteforce(
    m: LefschetzComplex,
    grades: Optional[Sequence[Multigrade]] = None,
    top_dim: Optional[int] = None,
    max_cells: int = RANK_INVARIANT_MAX_CELLS,
) -> RankInvariant:
    """rank of H_k(Λ^u) -> H_k(Λ^v) for every k and comparable u ⪯ v of the grade poset.

    Uses rank ι = rank[Z(u) | B(v)] - rank B(v), with cycles of Λ^u and boundaries
    of Λ^v written in the coordinates of all k-cells of m.
    """
    if len(m) > max_cells:
        raise OracleGuardError(f"rank invariant oracle limited to {max_cells} cells, got {len(m)}")
    m.check_boundary()
    poset = grade_poset(grades if grades is not None else (cell.grade for cell in m.cells))
    top = m.dim if top_dim is None else max(top_dim, m.dim)
    sublevels = {u: _sublevel(m, u) for u in poset}

    cycles_cache: dict = {}
    boundaries_cache: dict = {}
    rank_cache: dict = {}

    def cycles(k: int, cells: frozenset) -> np.ndarray:
        key = (k, cells)
        if key not in cycles_cache:
            ids = m.cells_of_dim(k)
            keep = [p for p, i in enumerate(ids) if i in cells]
            basis = np.zeros((len(ids), 0), dtype=np.uint8)
            if keep:
                d = boundary_matrix(m, k).data[:, keep]
                kernel = gf2_nullspace(d)
                basis = np.zeros((len(ids), kernel.shape[1]), dtype=np.uint8)
                basis[keep, :] = kernel
            cycles_cache[key] = basis
        return cycles_cache[key]

    def boundaries(k: int, cells: frozenset) -> np.ndarray:
        key = (k, cells)
        if key not in boundaries_cache:
            ids = m.cells_of_dim(k + 1)
            keep = [p for p, i in enumerate(ids) if i in cells]
            d = boundary_matrix(m, k + 1).data
            boundaries_cache[key] = d[:, keep] if keep else np.zeros((len(m.cells_of_dim(k)), 0), dtype=np.uint8)
        return boundaries_cache[key]

    result = RankInvariant()
    for k in range(top + 1):
        for u, v in product(poset, repeat=2):
            if not precedes(u, v):
                continue
            key = (k, sublevels[u], sublevels[v])
            if key not in rank_cache:
                z = cycles(k, sublevels[u])
                b = boundaries(k, sublevels[v])
                rank_cache[key] = gf2_rank(np.hstack([z, b])) - gf2_rank(b) if z.shape[1] else 0
            result.ranks[(k, u, v)] = rank_cache[key]
    return result


def _row(prop: str, ok: Optional[bool], detail: str = "") -> dict:
    status = "skipped" if ok is None else ("pass" if ok else "fail")
    return {"property": prop, "status": status, "detail": detail}


def run_oracle_battery(
    c: SimplicialComplex,
    mf: MultiFiltration,
    workers: int = 1,
    omega: int = 2,
) -> pd.DataFrame:
    """Pass/fail/skipped report over every verification property."""
    rows = []
    size = len(c)

    def guarded(prop: str, guard: int, check: Callable[[], tuple[bool, str]]):
        if size > guard:
            log.warning(f"Skipping {prop}: {size} simplices above guard {guard}")
            rows.append(_row(prop, None, f"|S|={size} > {guard}"))
            return
        ok, detail = check()
        rows.append(_row(prop, ok, detail))

    g = compute_discrete_gradient(c, mf, workers=workers)
    acyclic = verify_gradient_acyclic(g, c)
    rows.append(_row("gradient_acyclic", acyclic))
    rows.append(_row("gradient_compatible", verify_compatibility(g, mf)))
    rows.append(_row("partition_totality", len(g) == size, f"{len(g)} classified of {size}"))
    critical_chi = sum((-1) ** k * n for k, n in enumerate(g.critical_counts()))
    rows.append(_row("euler_invariant", critical_chi == c.euler_characteristic(),
                     f"critical={critical_chi} complex={c.euler_characteristic()}"))

    if not acyclic:
        rows.append(_row("morse_extraction", False, "gradient has a closed V-path"))
        return pd.DataFrame(rows, columns=["property", "status", "detail"])

    original = simplicial_lefschetz(c, mf)
    morse = extract_morse_complex(g, c, mf, workers=workers)
    top = max(original.dim, morse.dim)
    betti_s = betti_numbers_f2(original, top)
    betti_m = betti_numbers_f2(morse, top)
    rows.append(_row("betti_invariance", betti_s == betti_m, f"original={betti_s} morse={betti_m}"))
    rows.append(_row("morse_grades_monotone", morse.grades_monotone()))

    def matching_check():
        J = build_global_indexing(c, mf)
        other = matching_global(c, mf, J)
        return other == g, f"{len(other.criticals)} vs {len(g.criticals)} criticals"

    guarded("matching_equivalence", MATCHING_GUARD, matching_check)
    guarded("partition_equivalence", MATCHING_GUARD, lambda: (verify_partition_equivalence(c, mf), ""))

    def separatrix_check():
        for tau_id, faces in enumerate(morse.facets):
            tau = morse.cells[tau_id]
            if tau.dim == 0:
                continue
            incident = set(faces)
            for sigma_id in morse.cells_of_dim(tau.dim - 1):
                parity = enumerate_separatrices(g, tau.key, morse.cells[sigma_id].key) % 2
                if parity != (sigma_id in incident):
                    return False, f"{tau.key} -> {morse.cells[sigma_id].key}"
        return True, ""

    guarded("separatrix_parity", SEPARATRIX_GUARD, separatrix_check)

    def rank_check():
        poset = [cell.grade for cell in original.cells]
        a = rank_invariant_bruteforce(original, grades=poset, top_dim=top)
        b = rank_invariant_bruteforce(morse, grades=poset, top_dim=top)
        return a == b, f"{len(a.ranks)} entries"

    guarded("rank_invariant_invariance", RANK_INVARIANT_GUARD, rank_check)

    if mf.n_params == 2:
        extremes = compute_extremes(mf)
        full = compute_persistence_space(original, omega, extremes=extremes, workers=workers)
        reduced = compute_persistence_space(morse, omega, extremes=extremes, workers=workers)
        mismatched = [
            s for (s, a), (_, b) in zip(full.entries, reduced.entries) if not same_positive_persistence(a, b)
        ]
        rows.append(_row("slice_invariance", not mismatched, f"{len(full)} slices, {len(mismatched)} mismatched"))
    else:
        rows.append(_row("slice_invariance", None, f"needs 2 parameters, got {mf.n_params}"))

    report = pd.DataFrame(rows, columns=["property", "status", "detail"])
    log.info(f"Oracle battery: {(report.status == 'pass').sum()} pass, {(report.status == 'fail').sum()} fail, "
             f"{(report.status == 'skipped').sum()} skipped")
    return report
