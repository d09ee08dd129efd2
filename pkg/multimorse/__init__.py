from pathlib import Path
from dotenv import load_dotenv

__version__ = "0.1.0"

# Repo-level .env supplies MULTIMORSE_* defaults; real env vars win
load_dotenv(dotenv_path=Path(__file__).resolve().parent.parent / ".env", override=False)
