import pandas as pd
from dagster import asset, MaterializeResult, AssetExecutionContext

from ..config import PipelineConfig
from ..core.foliation import compute_extremes, compute_persistence_space
from ..core.morse import simplicial_lefschetz
from ..core.oracle import rank_invariant_bruteforce, run_oracle_battery
from ..errors import OracleGuardError
from ..formats import complex_from_frame, morse_from_frames
from .utils import lake_path, load_table, save_and_vacuum


def _load_morse(dataset: str):
    return morse_from_frames(
        load_table("Silver", dataset, "morse_cells"),
        load_table("Silver", dataset, "morse_incidences"),
    )


# ==============================================================================
# ASSET 1: PERSISTENCE SPACE (Foliation)
# ==============================================================================
@asset(
    deps=["morse_complex_silver"],
    group_name="gold",
    compute_kind="pandas",
    description="Slices the bifiltration into omega² lines and stores one persistence diagram per slice, plus phase timings."
)
def persistence_space_gold(context: AssetExecutionContext, config: PipelineConfig):
    c, mf = complex_from_frame(load_table("Bronze", config.dataset, "simplices"))
    if mf.n_params != 2:
        context.log.warning(f"⚠️ {config.dataset} has {mf.n_params} parameters; slicing needs 2. Skipping.")
        return MaterializeResult(metadata={"Status": "skipped"})

    morse = _load_morse(config.dataset)
    extremes = compute_extremes(mf)
    workers = config.resolved_workers()
    context.log.info(f"🔪 Slicing {len(morse)} Morse cells along {config.slices ** 2} lines...")

    outputs = {"reduced": compute_persistence_space(morse, config.slices, extremes=extremes, workers=workers)}
    if config.include_original:
        outputs["original"] = compute_persistence_space(simplicial_lefschetz(c, mf), config.slices, extremes=extremes, workers=workers)

    timing_rows = []
    for stage, space in outputs.items():
        save_and_vacuum(space.to_frame(), lake_path("Gold", config.dataset, f"diagrams_{stage}"), context)
        t = space.timings
        timing_rows.append({
            "stage": stage,
            "line_extraction": t.line_extraction,
            "building_pers_input": t.building_pers_input,
            "computing_persistence": t.computing_persistence,
            "reindexing_pers_output": t.reindexing_pers_output,
            "total": t.total,
        })
    save_and_vacuum(pd.DataFrame(timing_rows), lake_path("Gold", config.dataset, "timings"), context)

    reduced = outputs["reduced"]
    positive = sum(len(diagram.positive()) for _, diagram in reduced.entries)
    return MaterializeResult(metadata={
        "Slices": len(reduced),
        "Positive Pairs": positive,
        "Foliation Seconds": round(reduced.timings.total, 4),
    })


# ==============================================================================
# ASSET 2: RANK INVARIANT (Guarded Oracle)
# ==============================================================================
@asset(
    deps=["morse_complex_silver"],
    group_name="gold",
    compute_kind="pandas",
    description="Brute-force rank invariant of the Morse complex over the realized grade poset (small inputs only)."
)
def rank_invariant_gold(context: AssetExecutionContext, config: PipelineConfig):
    c, mf = complex_from_frame(load_table("Bronze", config.dataset, "simplices"))
    original = simplicial_lefschetz(c, mf)
    morse = _load_morse(config.dataset)

    try:
        ranks = rank_invariant_bruteforce(
            morse, grades=[cell.grade for cell in original.cells], top_dim=max(original.dim, morse.dim)
        )
    except OracleGuardError as e:
        context.log.warning(f"⚠️ {e}. Skipping.")
        return MaterializeResult(metadata={"Status": "skipped"})

    df = ranks.to_frame()
    save_and_vacuum(df, lake_path("Gold", config.dataset, "rank_invariant"), context)
    return MaterializeResult(metadata={"Entries": len(df), "Nonzero": int((df["rank"] > 0).sum())})


# ==============================================================================
# ASSET 3: ORACLE REPORT
# ==============================================================================
@asset(
    deps=["filtered_complex_bronze"],
    group_name="gold",
    compute_kind="pandas",
    description="Runs the verification battery against the brute-force oracles and stores the pass/fail report."
)
def oracle_report_gold(context: AssetExecutionContext, config: PipelineConfig):
    c, mf = complex_from_frame(load_table("Bronze", config.dataset, "simplices"))
    report = run_oracle_battery(c, mf, workers=config.resolved_workers(), omega=min(config.slices, 3))

    failed = report.loc[report.status == "fail", "property"].tolist()
    if failed:
        context.log.warning(f"   ⚠️ WARNING: Failed properties: {failed}")
    else:
        context.log.info("✅ All oracle properties hold")

    save_and_vacuum(report.astype("string"), lake_path("Gold", config.dataset, "oracle_report"), context)
    return MaterializeResult(metadata={
        "Passed": int((report.status == "pass").sum()),
        "Failed": len(failed),
        "Skipped": int((report.status == "skipped").sum()),
    })
