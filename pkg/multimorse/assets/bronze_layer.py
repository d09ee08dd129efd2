from dagster import asset, MaterializeResult, AssetExecutionContext

from ..config import PipelineConfig
from ..formats import complex_to_frame, load_input
from .utils import lake_path, save_and_vacuum


# ==============================================================================
# ASSET: FILTERED COMPLEX (Ingestion)
# ==============================================================================
@asset(
    group_name="bronze",
    compute_kind="python",
    description="Reads an OFF or generic complex, extends the vertex filtration to every simplex, and stores the simplex table."
)
def filtered_complex_bronze(context: AssetExecutionContext, config: PipelineConfig):
    context.log.info(f"📥 Loading {config.input_path} ({config.input_format})...")
    c, mf = load_input(config)

    df = complex_to_frame(c, mf)
    save_and_vacuum(df, lake_path("Bronze", config.dataset, "simplices"), context)

    context.log.info(f"✅ {config.dataset}: {len(c)} simplices up to dimension {c.dim}")
    return MaterializeResult(metadata={
        "Vertices": c.vertex_count,
        "Simplices": len(c),
        "Dimension": c.dim,
        "Parameters": mf.n_params,
        "Counts": str(c.counts()),
    })
