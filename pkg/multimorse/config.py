import os
from pathlib import Path
from typing import Optional

from dagster import Config
from joblib import cpu_count

from .errors import ConfigError

# --- CONFIGURATION ---
MODES = ("gradient", "morse", "space", "rank-invariant", "verify")
FORMATS = ("off", "generic")

# Modes that need the Morse complex downstream of the gradient
MORSE_MODES = ("morse", "space", "rank-invariant", "verify")


class PipelineConfig(Config):
    """Run configuration shared by the CLI and the Dagster assets."""

    input_path: str = os.getenv("MULTIMORSE_INPUT", "")
    input_format: str = "generic"
    coords: str = "x,y"
    filtration_path: Optional[str] = None
    mode: str = "gradient"
    slices: int = 10
    auto_perturb: bool = False
    workers: int = int(os.getenv("MULTIMORSE_WORKERS", "0"))
    out_dir: str = "out"
    dump_decomposition: bool = False
    verify: bool = False
    include_original: bool = False
    track_memory: bool = False

    @property
    def dataset(self) -> str:
        return Path(self.input_path).stem or "dataset"

    def resolved_workers(self) -> int:
        return self.workers if self.workers > 0 else max(1, cpu_count())

    def validate_for(self, n_params: int) -> None:
        """Checks the mode-specific requirements once the parameter count is known."""
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {', '.join(MODES)}")
        if self.input_format not in FORMATS:
            raise ConfigError(f"unknown format {self.input_format!r}; expected one of {', '.join(FORMATS)}")
        if self.slices < 1:
            raise ConfigError(f"--slices must be at least 1, got {self.slices}")
        if self.workers < 0:
            raise ConfigError(f"--workers must be non-negative, got {self.workers}")
        if self.mode == "space" and n_params != 2:
            raise ConfigError(f"mode=space needs a bifiltration, input has {n_params} parameters")
