import os
from pathlib import Path
from deltalake import write_deltalake, DeltaTable
from dagster import AssetExecutionContext
import pandas as pd

# Layer folders under the lake root, one sub-folder per dataset
LAYERS = ("Bronze", "Silver", "Gold")


def lake_root() -> Path:
    return Path(os.getenv("MULTIMORSE_LAKE_ROOT") or os.getenv("LAKE_ROOT") or "lake")


def lake_path(layer: str, dataset: str, table: str) -> Path:
    if layer not in LAYERS:
        raise ValueError(f"unknown lake layer {layer!r}")
    return lake_root() / layer / dataset / table


def load_table(layer: str, dataset: str, table: str) -> pd.DataFrame:
    path = lake_path(layer, dataset, table)
    try:
        return DeltaTable(str(path)).to_pandas()
    except Exception as e:
        raise Exception(f"❌ Missing {layer} table {path}. Materialize the upstream asset first! Error: {e}")


def save_and_vacuum(
    df: pd.DataFrame,
    path: Path,
    context: AssetExecutionContext,
    mode: str = "overwrite",
    schema_mode: str = "overwrite"
):
    """
    Writes a DataFrame as a Delta table, then vacuums the replaced files.
    """
    context.log.info(f"  💾 Saving {len(df)} rows to {path}")
    path.parent.mkdir(parents=True, exist_ok=True)

    write_deltalake(
        str(path),
        df,
        mode=mode,
        schema_mode=schema_mode
    )

    try:
        dt = DeltaTable(str(path))
        dt.vacuum(retention_hours=0, enforce_retention_duration=False, dry_run=False)
        context.log.info(f"  🧹 Vacuumed {path.name}")
    except Exception as v_err:
        context.log.warning(f"  ⚠️ Vacuum failed for {path.name}: {v_err}")
