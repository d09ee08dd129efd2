"""Input readers, text dumps, and DataFrame conversions for the lake tables."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
import pandas as pd
from dagster import get_dagster_logger

from .config import FORMATS, PipelineConfig
from .core.complex import MultiFiltration, SimplicialComplex, build_complex, extend_filtration
from .core.gradient import DiscreteGradient
from .core.morse import Cell, LefschetzComplex
from .errors import ConfigError, ParseError

log = get_dagster_logger(__name__)

AXES = {"x": 0, "y": 1, "z": 2}


def _data_lines(path: Path) -> Iterator[tuple[int, list[str]]]:
    """(line number, tokens) for every non-blank line, `#` comments stripped."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ParseError(f"cannot read input: {err.strerror or err}", path) from err
    except UnicodeDecodeError as err:
        raise ParseError("input is not valid UTF-8", path) from err
    for number, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield number, tokens


def _numbers(tokens: Sequence[str], cast, path, line: int, what: str) -> list:
    try:
        numbers = [cast(t) for t in tokens]
    except ValueError as err:
        raise ParseError(f"malformed {what}: {' '.join(tokens)}", path, line) from err
    if cast is float and not np.isfinite(numbers).all():
        raise ParseError(f"non-finite value in {what}: {' '.join(tokens)}", path, line)
    return numbers


def parse_coords(coords: str) -> list[int]:
    columns = []
    for name in coords.split(","):
        name = name.strip().lower()
        if name not in AXES:
            raise ConfigError(f"unknown coordinate {name!r} in --coords; use x, y or z")
        columns.append(AXES[name])
    if not columns:
        raise ConfigError("--coords selects no coordinate")
    return columns


def read_off(path, coords: str = "x,y") -> tuple[int, list[tuple[int, ...]], np.ndarray]:
    """ASCII OFF. Polygons are fan-triangulated; the selected coordinates become f."""
    columns = parse_coords(coords)
    lines = _data_lines(path)

    header = next(lines, None)
    if header is None or not header[1][0].upper().endswith("OFF"):
        raise ParseError("missing OFF header", path, header[0] if header else 1)
    counts = header[1][1:]
    if not counts:
        entry = next(lines, None)
        if entry is None:
            raise ParseError("missing vertex/face counts", path)
        number, counts = entry
    else:
        number = header[0]
    counts = _numbers(counts, int, path, number, "counts line")
    if len(counts) < 2:
        raise ParseError("counts line needs vertex and face counts", path, number)
    n_vertices, n_faces = counts[0], counts[1]

    coordinates = []
    for _ in range(n_vertices):
        entry = next(lines, None)
        if entry is None:
            raise ParseError(f"expected {n_vertices} vertices, file ended after {len(coordinates)}", path)
        number, tokens = entry
        if len(tokens) < 3:
            raise ParseError(f"vertex line has {len(tokens)} coordinates, expected 3", path, number)
        xyz = _numbers(tokens[:3], float, path, number, "vertex line")
        coordinates.append(xyz)

    triangles: list[tuple[int, ...]] = []
    for _ in range(n_faces):
        entry = next(lines, None)
        if entry is None:
            raise ParseError(f"expected {n_faces} faces", path)
        number, tokens = entry
        ids = _numbers(tokens, int, path, number, "face line")
        size = ids[0]
        if size < 1 or len(ids) < size + 1:
            raise ParseError(f"face declares {size} vertices but lists {len(ids) - 1}", path, number)
        face = ids[1:size + 1]
        bad = [v for v in face if v < 0 or v >= n_vertices]
        if bad:
            raise ParseError(f"vertex id {bad[0]} out of range", path, number)
        if size <= 3:
            triangles.append(tuple(face))
        else:
            triangles.extend((face[0], face[i], face[i + 1]) for i in range(1, size - 1))

    values = np.asarray(coordinates, dtype=float).reshape(n_vertices, -1)[:, columns] if n_vertices else np.zeros((0, len(columns)))
    log.info(f"Read OFF {Path(path).name}: {n_vertices} vertices, {n_faces} faces")
    return n_vertices, triangles, values


def write_off(path, vertices, faces: Iterable[Sequence[int]]) -> None:
    vertices = np.asarray(vertices, dtype=float)
    faces = [list(f) for f in faces]
    lines = ["OFF", f"{len(vertices)} {len(faces)} 0"]
    lines.extend(" ".join(repr(float(x)) for x in row) for row in vertices)
    lines.extend(" ".join(str(v) for v in [len(f), *f]) for f in faces)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_generic(path) -> tuple[int, list[tuple[int, ...]], np.ndarray]:
    """`n_vertices n_top n_params`, then vertex value lines, then top-simplex lines."""
    lines = _data_lines(path)
    header = next(lines, None)
    if header is None:
        raise ParseError("empty input", path)
    number, tokens = header
    counts = _numbers(tokens, int, path, number, "header")
    if len(counts) != 3 or min(counts) < 0:
        raise ParseError("header must be `n_vertices n_top n_params`", path, number)
    n_vertices, n_top, n_params = counts

    rows = []
    for _ in range(n_vertices):
        entry = next(lines, None)
        if entry is None:
            raise ParseError(f"expected {n_vertices} vertex lines, got {len(rows)}", path)
        number, tokens = entry
        if len(tokens) != n_params:
            raise ParseError(f"vertex line has {len(tokens)} values, expected {n_params}", path, number)
        rows.append(_numbers(tokens, float, path, number, "vertex line"))

    tops = []
    for _ in range(n_top):
        entry = next(lines, None)
        if entry is None:
            raise ParseError(f"expected {n_top} simplex lines, got {len(tops)}", path)
        number, tokens = entry
        ids = _numbers(tokens, int, path, number, "simplex line")
        bad = [v for v in ids if v < 0 or v >= n_vertices]
        if bad:
            raise ParseError(f"vertex id {bad[0]} out of range [0, {n_vertices})", path, number)
        tops.append(tuple(ids))

    extra = next(lines, None)
    if extra is not None:
        raise ParseError("unexpected trailing data", path, extra[0])
    return n_vertices, tops, np.asarray(rows, dtype=float).reshape(n_vertices, n_params)


def read_filtration(path, vertex_count: int) -> np.ndarray:
    rows = []
    width = None
    for number, tokens in _data_lines(path):
        if width is None:
            width = len(tokens)
        elif len(tokens) != width:
            raise ParseError(f"line has {len(tokens)} values, previous lines have {width}", path, number)
        rows.append(_numbers(tokens, float, path, number, "filtration line"))
    if len(rows) != vertex_count:
        raise ParseError(f"filtration lists {len(rows)} vertices, complex has {vertex_count}", path)
    return np.asarray(rows, dtype=float).reshape(vertex_count, width or 0)


def load_input(cfg: PipelineConfig) -> tuple[SimplicialComplex, MultiFiltration]:
    if cfg.input_format not in FORMATS:
        raise ConfigError(f"unknown format {cfg.input_format!r}; expected one of {', '.join(FORMATS)}")
    if not cfg.input_path:
        raise ConfigError("no input file given (set MULTIMORSE_INPUT or pass a path)")
    if cfg.input_format == "off":
        n_vertices, tops, values = read_off(cfg.input_path, cfg.coords)
    else:
        n_vertices, tops, values = read_generic(cfg.input_path)
    if cfg.filtration_path:
        values = read_filtration(cfg.filtration_path, n_vertices)

    c = build_complex(n_vertices, tops)
    mf = extend_filtration(c, values, auto_perturb=cfg.auto_perturb)
    log.info(f"Loaded {cfg.dataset}: {len(c)} simplices, dim {c.dim}, {mf.n_params} parameters")
    return c, mf


def write_lines(path, lines: Iterable[str]) -> None:
    text = "\n".join(lines)
    Path(path).write_text(text + "\n" if text else "", encoding="utf-8")


# --- LAKE TABLES ---

def _show(simplex: Sequence[int]) -> str:
    return " ".join(str(v) for v in simplex)


def _parse(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split()) if isinstance(text, str) and text else ()


def _grade_columns(n_params: int) -> list[str]:
    return [f"g{i + 1}" for i in range(n_params)]


def complex_to_frame(c: SimplicialComplex, mf: MultiFiltration) -> pd.DataFrame:
    names = _grade_columns(mf.n_params)
    rows = [(len(s) - 1, _show(s), *mf.grade(s)) for s in c]
    df = pd.DataFrame(rows, columns=["dim", "vertices", *names])
    return df.astype({"dim": "int64", "vertices": "string", **{n: "float64" for n in names}})


def complex_from_frame(df: pd.DataFrame) -> tuple[SimplicialComplex, MultiFiltration]:
    names = [col for col in df.columns if col.startswith("g") and col[1:].isdigit()]
    names.sort(key=lambda col: int(col[1:]))
    vertices = df[df["dim"] == 0].copy()
    vertices["id"] = [_parse(v)[0] for v in vertices["vertices"]]
    vertices = vertices.sort_values("id")
    c = build_complex(len(vertices), (_parse(v) for v in df["vertices"]))
    mf = extend_filtration(c, vertices[names].to_numpy(dtype=float))
    return c, mf


def gradient_to_frame(g: DiscreteGradient) -> pd.DataFrame:
    rows = [("pair", _show(s), _show(t)) for s, t in g.pairs()]
    rows.extend(("critical", _show(s), "") for s in g.critical_list())
    return pd.DataFrame(rows, columns=["kind", "lower", "upper"]).astype("string")


def gradient_from_frame(df: pd.DataFrame) -> DiscreteGradient:
    pairs = [(_parse(r.lower), _parse(r.upper)) for r in df.itertuples() if r.kind == "pair"]
    criticals = [_parse(r.lower) for r in df.itertuples() if r.kind == "critical"]
    return DiscreteGradient.from_pairs(pairs, criticals)


def morse_to_frames(m: LefschetzComplex) -> tuple[pd.DataFrame, pd.DataFrame]:
    names = _grade_columns(m.n_params)
    cells = pd.DataFrame(
        [(i, _show(cell.key), cell.dim, *cell.grade) for i, cell in enumerate(m.cells)],
        columns=["id", "key", "dim", *names],
    ).astype({"id": "int64", "key": "string", "dim": "int64", **{n: "float64" for n in names}})
    incidences = pd.DataFrame(
        [(i, j) for i, faces in enumerate(m.facets) for j in faces], columns=["tau", "sigma"]
    ).astype("int64")
    return cells, incidences


def morse_from_frames(cells: pd.DataFrame, incidences: pd.DataFrame) -> LefschetzComplex:
    names = sorted((col for col in cells.columns if col.startswith("g") and col[1:].isdigit()), key=lambda col: int(col[1:]))
    cells = cells.sort_values("id")
    keys = {int(r.id): _parse(r.key) for r in cells.itertuples()}
    grades = cells[names].to_numpy(dtype=float)
    members = [
        Cell(key=keys[int(i)], dim=int(d), grade=tuple(float(x) for x in row))
        for i, d, row in zip(cells["id"], cells["dim"], grades)
    ]
    faces: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for tau, sigma in zip(incidences["tau"], incidences["sigma"]):
        faces.setdefault(keys[int(tau)], []).append(keys[int(sigma)])
    return LefschetzComplex.from_cells(members, faces)
