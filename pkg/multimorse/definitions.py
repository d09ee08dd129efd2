from dagster import Definitions, load_assets_from_modules
from multimorse.assets import bronze_layer, silver_layer, gold_layer

# Load assets from all layers
bronze_assets = load_assets_from_modules([bronze_layer])
silver_assets = load_assets_from_modules([silver_layer])
gold_assets = load_assets_from_modules([gold_layer])

defs = Definitions(
    assets=[
        *bronze_assets,
        *silver_assets,
        *gold_assets,
    ],
)
