from dagster import asset, MaterializeResult, AssetExecutionContext

from ..config import PipelineConfig
from ..core.gradient import compute_discrete_gradient, stats_line, verify_compatibility, verify_gradient_acyclic
from ..core.morse import betti_numbers_f2, extract_morse_complex
from ..errors import VerificationError
from ..formats import complex_from_frame, gradient_from_frame, gradient_to_frame, morse_to_frames
from .utils import lake_path, load_table, save_and_vacuum


# ==============================================================================
# ASSET 1: DISCRETE GRADIENT
# ==============================================================================
@asset(
    deps=["filtered_complex_bronze"],
    group_name="silver",
    compute_kind="python",
    description="Computes the local discrete gradient (one task per vertex batch) and validates it."
)
def discrete_gradient_silver(context: AssetExecutionContext, config: PipelineConfig):
    c, mf = complex_from_frame(load_table("Bronze", config.dataset, "simplices"))
    workers = config.resolved_workers()

    context.log.info(f"⚙️ Reducing {len(c)} simplices with {workers} worker(s)...")
    g = compute_discrete_gradient(c, mf, workers=workers)

    if not verify_gradient_acyclic(g, c) or not verify_compatibility(g, mf):
        raise VerificationError(f"❌ Gradient for {config.dataset} failed validation")

    save_and_vacuum(gradient_to_frame(g), lake_path("Silver", config.dataset, "gradient"), context)

    stats = stats_line(len(c), len(g.criticals))
    context.log.info(f"📉 {stats}")
    return MaterializeResult(metadata={
        "Cells": len(c),
        "Criticals": len(g.criticals),
        "Critical Counts": str(g.critical_counts()),
        "Stats": stats,
    })


# ==============================================================================
# ASSET 2: MORSE COMPLEX
# ==============================================================================
@asset(
    deps=["discrete_gradient_silver"],
    group_name="silver",
    compute_kind="python",
    description="Extracts the Morse complex by counting separatrices mod 2; stores cells and incidences."
)
def morse_complex_silver(context: AssetExecutionContext, config: PipelineConfig):
    c, mf = complex_from_frame(load_table("Bronze", config.dataset, "simplices"))
    g = gradient_from_frame(load_table("Silver", config.dataset, "gradient"))

    morse = extract_morse_complex(g, c, mf, workers=config.resolved_workers())
    cells, incidences = morse_to_frames(morse)
    save_and_vacuum(cells, lake_path("Silver", config.dataset, "morse_cells"), context)
    save_and_vacuum(incidences, lake_path("Silver", config.dataset, "morse_incidences"), context)

    betti = betti_numbers_f2(morse)
    context.log.info(f"🧮 Betti numbers over F2: {betti}")
    return MaterializeResult(metadata={
        "Cells": len(morse),
        "Incidences": len(incidences),
        "Betti": str(betti),
    })
