"""Command-line pipeline: gradient, Morse complex, persistence space, verification."""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from dagster import get_dagster_logger

from .benchmarks import PeakMemory
from .config import FORMATS, MODES, MORSE_MODES, PipelineConfig
from .core.foliation import PhaseTimings, compute_extremes, compute_persistence_space
from .core.gradient import compute_discrete_gradient, format_gradient_dump, stats_line
from .core.indexing import compute_indexing, decompose, format_level_set
from .core.morse import extract_morse_complex, format_morse_dump, simplicial_lefschetz
from .core.oracle import rank_invariant_bruteforce, run_oracle_battery
from .errors import MultimorseError, VerificationError
from .formats import load_input, write_lines

log = get_dagster_logger(__name__)

TIMING_COLUMNS = [
    "stage", "reduction_time", "line_extraction", "building_pers_input",
    "computing_persistence", "reindexing_pers_output", "foliations_time", "total", "peak_mb",
]


def _ms(seconds: float) -> float:
    return round(seconds * 1000.0, 3)


def _timing_row(stage: str, reduction: float, phases: Optional[PhaseTimings] = None, peak_mb: float = float("nan")) -> dict:
    phases = phases or PhaseTimings()
    return {
        "stage": stage,
        "reduction_time": _ms(reduction),
        "line_extraction": _ms(phases.line_extraction),
        "building_pers_input": _ms(phases.building_pers_input),
        "computing_persistence": _ms(phases.computing_persistence),
        "reindexing_pers_output": _ms(phases.reindexing_pers_output),
        "foliations_time": _ms(phases.total),
        "total": _ms(reduction + phases.total),
        "peak_mb": peak_mb,
    }


def run_pipeline(cfg: PipelineConfig) -> int:
    """Runs the configured stages and writes their artifacts to `cfg.out_dir`. Returns the exit code."""
    out = Path(cfg.out_dir)
    try:
        c, mf = load_input(cfg)
        cfg.validate_for(mf.n_params)
        workers = cfg.resolved_workers()
        out.mkdir(parents=True, exist_ok=True)
        timings = []

        with PeakMemory(cfg.track_memory) as gradient_peak:
            start = time.perf_counter()
            g = compute_discrete_gradient(c, mf, workers=workers)
            reduction = time.perf_counter() - start
        peak = gradient_peak.mb
        write_lines(out / "gradient.txt", format_gradient_dump(g))
        write_lines(out / "stats.txt", [stats_line(len(c), len(g.criticals))])

        if cfg.dump_decomposition:
            write_lines(out / "decomposition.txt", (format_level_set(ls) for ls in decompose(c, mf, compute_indexing(mf))))

        if cfg.mode in MORSE_MODES:
            with PeakMemory(cfg.track_memory) as morse_peak:
                start = time.perf_counter()
                morse = extract_morse_complex(g, c, mf, workers=workers)
                reduction += time.perf_counter() - start
            peak = max(peak, morse_peak.mb) if cfg.track_memory else peak
            write_lines(out / "morse.txt", format_morse_dump(morse))

        if cfg.mode == "space":
            extremes = compute_extremes(mf)
            space = compute_persistence_space(morse, cfg.slices, extremes=extremes, workers=workers)
            space.to_frame().to_csv(out / "diagrams.csv", index=False)
            timings.append(_timing_row("reduced", reduction, space.timings, peak))
            if cfg.include_original:
                original = compute_persistence_space(simplicial_lefschetz(c, mf), cfg.slices, extremes=extremes, workers=workers)
                original.to_frame().to_csv(out / "diagrams_original.csv", index=False)
                timings.append(_timing_row("original", 0.0, original.timings))
        else:
            timings.append(_timing_row("reduced", reduction, peak_mb=peak))

        if cfg.mode == "rank-invariant":
            original = simplicial_lefschetz(c, mf)
            poset = [cell.grade for cell in original.cells]
            top = max(original.dim, morse.dim)
            frames = [rank_invariant_bruteforce(morse, grades=poset, top_dim=top).to_frame().assign(complex="morse")]
            if cfg.include_original:
                frames.append(rank_invariant_bruteforce(original, grades=poset, top_dim=top).to_frame().assign(complex="original"))
            table = pd.concat(frames, ignore_index=True)
            table[["complex", "dim", "u", "v", "rank"]].to_csv(out / "rank_invariant.csv", index=False)

        pd.DataFrame(timings, columns=TIMING_COLUMNS).to_csv(out / "timings.csv", index=False)

        if cfg.mode == "verify" or cfg.verify:
            report = run_oracle_battery(c, mf, workers=workers, omega=cfg.slices)
            report.to_csv(out / "verify_report.csv", index=False)
            failed = report.loc[report.status == "fail", "property"].tolist()
            if failed:
                raise VerificationError(f"verification failed: {', '.join(failed)}")

        log.info(f"Wrote artifacts for {cfg.dataset} to {out}")
        return 0
    except MultimorseError as err:
        log.error(str(err))
        return err.exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multimorse",
        description="Discrete Morse reduction and slice-wise persistence of multiparameter filtrations.",
    )
    parser.add_argument("input", nargs="?", default=None, help="complex file (defaults to $MULTIMORSE_INPUT)")
    parser.add_argument("--format", dest="input_format", choices=FORMATS, default="generic")
    parser.add_argument("--coords", default="x,y", help="OFF coordinates forming the filtration, e.g. x,y")
    parser.add_argument("--filtration", dest="filtration_path", default=None, help="per-vertex values file")
    parser.add_argument("--mode", choices=MODES, default="gradient")
    parser.add_argument("--slices", type=int, default=10, help="samples per axis; omega**2 slices in total")
    parser.add_argument("--auto-perturb", action="store_true", help="replace tied vertex values by ranks")
    parser.add_argument("--workers", type=int, default=None, help="0 = all cores")
    parser.add_argument("--out", dest="out_dir", default="out")
    parser.add_argument("--dump-decomposition", action="store_true")
    parser.add_argument("--verify", action="store_true", help="also run the oracle battery")
    parser.add_argument("--include-original", action="store_true", help="also process the unreduced complex")
    parser.add_argument("--track-memory", action="store_true", help="record the peak traced heap of the reduction in timings.csv")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = vars(build_parser().parse_args(argv))
    verbose = args.pop("verbose")
    level = logging.INFO if verbose else logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger("dagster").setLevel(level)

    overrides = {k: v for k, v in args.items() if v is not None}
    if "input" in overrides:
        overrides["input_path"] = overrides.pop("input")
    return run_pipeline(PipelineConfig(**overrides))


if __name__ == "__main__":
    sys.exit(main())
