"""Persistence space of a bifiltration, approximated slice by slice."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from dagster import get_dagster_logger
from joblib import Parallel, delayed

from ..errors import ConfigError
from .complex import Multigrade, MultiFiltration
from .morse import LefschetzComplex
from .persistence import DIAGRAM_COLUMNS, PersistenceDiagram, filtered_boundary, filtration_order, reduce_and_pair

log = get_dagster_logger(__name__)


@dataclass(frozen=True)
class Slice:
    """Line through b (on the antidiagonal) with unit direction (cos lam, sin lam)."""

    lam: float
    b: tuple[float, float]

    @property
    def direction(self) -> tuple[float, float]:
        return (math.cos(self.lam), math.sin(self.lam))


@dataclass
class PhaseTimings:
    """Wall-clock seconds per phase, summed over slices."""

    line_extraction: float = 0.0
    building_pers_input: float = 0.0
    computing_persistence: float = 0.0
    reindexing_pers_output: float = 0.0
    total: float = 0.0

    def add(self, other: "PhaseTimings") -> None:
        self.building_pers_input += other.building_pers_input
        self.computing_persistence += other.computing_persistence
        self.reindexing_pers_output += other.reindexing_pers_output


@dataclass
class PersistenceSpace:
    entries: list[tuple[Slice, PersistenceDiagram]] = field(default_factory=list)
    timings: PhaseTimings = field(default_factory=PhaseTimings)

    def __len__(self) -> int:
        return len(self.entries)

    def to_frame(self) -> pd.DataFrame:
        frames = [diagram.to_frame() for _, diagram in self.entries if len(diagram)]
        if not frames:
            return PersistenceDiagram().to_frame()
        return pd.concat(frames, ignore_index=True)[DIAGRAM_COLUMNS]


def _require_bifiltration(n_params: int) -> None:
    if n_params != 2:
        raise ConfigError(f"slicing needs exactly 2 filtration parameters, got {n_params}")


def compute_extremes(mf: MultiFiltration) -> tuple[Multigrade, Multigrade]:
    _require_bifiltration(mf.n_params)
    if mf.values.shape[0] == 0:
        return (0.0, 0.0), (0.0, 0.0)
    lo = mf.values.min(axis=0)
    hi = mf.values.max(axis=0)
    return tuple(float(x) for x in lo), tuple(float(x) for x in hi)


def _complex_extremes(m: LefschetzComplex) -> tuple[Multigrade, Multigrade]:
    if len(m) == 0:
        return (0.0, 0.0), (0.0, 0.0)
    _require_bifiltration(m.n_params)
    grades = m.grade_array()
    return tuple(float(x) for x in grades.min(axis=0)), tuple(float(x) for x in grades.max(axis=0))


def _project(u: Sequence[float], direction: tuple[float, float]) -> tuple[float, float]:
    t = (u[0] + u[1]) / (direction[0] + direction[1])
    return (u[0] - t * direction[0], u[1] - t * direction[1])


def generate_slices(c: Multigrade, C: Multigrade, omega: int) -> list[Slice]:
    if omega < 1:
        raise ConfigError(f"slice count per axis must be at least 1, got {omega}")
    slices = []
    for j in range(omega):
        lam = (math.pi / 2) * (j + 0.5) / omega
        direction = (math.cos(lam), math.sin(lam))
        lo = _project((c[0], C[1]), direction)
        hi = _project((C[0], c[1]), direction)
        for i in range(omega):
            s = (i + 0.5) / omega
            b1 = lo[0] + s * (hi[0] - lo[0])
            slices.append(Slice(lam=lam, b=(b1, -b1)))
    return slices


def push_to_slice(grades: np.ndarray, s: Slice) -> np.ndarray:
    grades = np.asarray(grades, dtype=float).reshape(-1, 2)
    m = np.asarray(s.direction)
    b = np.asarray(s.b)
    return m.min() * ((grades - b) / m).max(axis=1)


def _run_slices(m: LefschetzComplex, grades: np.ndarray, slices: Sequence[Slice]):
    out = []
    for s in slices:
        timings = PhaseTimings()
        start = time.perf_counter()
        phi = push_to_slice(grades, s)
        fb = filtered_boundary(m, filtration_order(m, phi), phi)
        built = time.perf_counter()
        diagram = reduce_and_pair(fb)
        reduced = time.perf_counter()
        diagram.slice = s
        done = time.perf_counter()
        timings.building_pers_input = built - start
        timings.computing_persistence = reduced - built
        timings.reindexing_pers_output = done - reduced
        out.append((s, diagram, timings))
    return out


def compute_persistence_space(
    m: LefschetzComplex,
    omega: int,
    extremes: Optional[tuple[Multigrade, Multigrade]] = None,
    workers: int = 1,
) -> PersistenceSpace:
    """One diagram per slice, in (lambda, b) order.

    Pass `extremes` to slice two complexes over the same bifiltration by the same lines.
    """
    started = time.perf_counter()
    if extremes is None:
        extremes = _complex_extremes(m)
    if len(m):
        _require_bifiltration(m.n_params)
    slices = generate_slices(extremes[0], extremes[1], omega)
    space = PersistenceSpace()
    space.timings.line_extraction = time.perf_counter() - started

    if len(m) == 0:
        space.entries = [(s, PersistenceDiagram(slice=s)) for s in slices]
    else:
        grades = m.grade_array()
        if workers > 1 and len(slices) > 1:
            chunks = [list(chunk) for chunk in np.array_split(np.arange(len(slices)), min(workers, len(slices)))]
            parts = Parallel(n_jobs=workers)(
                delayed(_run_slices)(m, grades, [slices[i] for i in chunk]) for chunk in chunks
            )
            results = [item for part in parts for item in part]
        else:
            results = _run_slices(m, grades, slices)
        for s, diagram, timings in results:
            space.entries.append((s, diagram))
            space.timings.add(timings)

    space.timings.total = time.perf_counter() - started
    log.info(f"Persistence space: {len(space)} slices over {len(m)} cells in {space.timings.total:.3f}s")
    return space
