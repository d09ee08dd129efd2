import shutil
import sys

from dotenv import load_dotenv

load_dotenv()

from multimorse.assets.utils import LAYERS, lake_root  # noqa: E402


def reset_lake(datasets=None):
    """Deletes the Bronze/Silver/Gold outputs, either entirely or for the named datasets."""
    root = lake_root()
    print(f"💣 STARTING LAKE RESET ON: {root}")

    for layer in LAYERS:
        targets = [root / layer] if not datasets else [root / layer / name for name in datasets]
        for target in targets:
            if not target.exists():
                print(f"   ℹ️ {target.relative_to(root)} was already empty.")
                continue
            try:
                shutil.rmtree(target)
                print(f"      ✅ {target.relative_to(root)} deleted.")
            except Exception as e:
                print(f"      ❌ Failed to delete {target}: {e}")

    print("\n✨ RESET COMPLETE.")
    print("🚀 Materialize filtered_complex_bronze (or run `multimorse`) to rebuild.")


if __name__ == "__main__":
    names = sys.argv[1:]
    scope = ", ".join(names) if names else "ALL datasets"
    confirm = input(f"⚠️  ARE YOU SURE you want to delete Bronze/Silver/Gold data for {scope}? (y/n): ")
    if confirm.lower() == "y":
        reset_lake(names)
    else:
        print("❌ Reset cancelled.")
