# skein_config.py
from __future__ import annotations

import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional

from skein_errors import DomainError

# ─────────────────────────────────────────────────────────────────────────────
# Base paths
# ─────────────────────────────────────────────────────────────────────────────
BASE_DIR = Path(__file__).parent
DATA_DIR = BASE_DIR / "data"
DEFAULT_CACHE_PATH = DATA_DIR / "skein_cache.json"

# ─────────────────────────────────────────────────────────────────────────────
# Reduction defaults
# ─────────────────────────────────────────────────────────────────────────────
DEFAULT_BUDGET = 10**6          # elementary moves per reduction
DEFAULT_WINDOW_FACTOR = 4       # initial solver window = 4p in core and wedge index
WINDOW_RETRIES = 3              # window doublings after the first attempt
DEFAULT_SEED = 0

# Largest |index| accepted for any atom in parsed input
MAX_ATOM_INDEX = 2000

# Bump whenever printed forms or reduction conventions change; stale caches are dropped.
ARTIFACT_VERSION = "skein-lens/1.0"

# ─────────────────────────────────────────────────────────────────────────────
# CLI options
# ─────────────────────────────────────────────────────────────────────────────
OUTPUT_FORMATS = ("text", "json", "csv")
DEFAULT_FORMAT = "text"
COMMAND_FORMATS = {"table": "csv"}   # per-command default when no flag or env var is set
DEFAULT_N_MAX = 3
DEFAULT_W_MAX = 1

# Every flag has an environment twin; explicit flags win.
ENV_VARS: Dict[str, str] = {
    "p": "SKEIN_P",
    "q": "SKEIN_Q",
    "output_format": "SKEIN_FORMAT",
    "budget": "SKEIN_BUDGET",
    "window": "SKEIN_WINDOW",
    "cache_path": "SKEIN_CACHE",
    "seed": "SKEIN_SEED",
}


def _env_int(name: str, default: Optional[int]) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw.strip())
    except ValueError:
        warnings.warn(f"Ignoring malformed {name}={raw!r}; using {default}")
        return default


def window_for(p: int, override: Optional[int] = None) -> int:
    """Initial solver window bound for L(p, q)."""
    if override is not None:
        return override
    return DEFAULT_WINDOW_FACTOR * max(p, 1)


# ─────────────────────────────────────────────────────────────────────────────
# Run configuration
# ─────────────────────────────────────────────────────────────────────────────

@dataclass
class RunConfig:
    """Resolved settings for one CLI invocation."""
    command: str
    p: Optional[int] = None
    q: Optional[int] = None
    budget: int = DEFAULT_BUDGET
    window: Optional[int] = None
    output_format: str = DEFAULT_FORMAT
    cache_path: Optional[Path] = None
    seed: int = DEFAULT_SEED
    extras: Dict[str, object] = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        if self.budget <= 0:
            raise DomainError(f"step budget must be positive, got {self.budget}")
        if self.window is not None and self.window <= 0:
            raise DomainError(f"window bound must be positive, got {self.window}")
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError(
                f"unknown output format {self.output_format!r}; choose from {', '.join(OUTPUT_FORMATS)}"
            )
        return self

    @classmethod
    def resolve(
        cls,
        command: str,
        p: Optional[int] = None,
        q: Optional[int] = None,
        budget: Optional[int] = None,
        window: Optional[int] = None,
        output_format: Optional[str] = None,
        cache_path: Optional[str] = None,
        seed: Optional[int] = None,
        **extras,
    ) -> "RunConfig":
        """
        Merge explicit values over environment overrides over defaults.

        Args:
            command: CLI verb
            p, q, budget, window, output_format, cache_path, seed: explicit flag
                values, None when the flag was not given

        Returns:
            A validated RunConfig
        """
        env_cache = os.getenv(ENV_VARS["cache_path"])
        cfg = cls(
            command=command,
            p=p if p is not None else _env_int(ENV_VARS["p"], None),
            q=q if q is not None else _env_int(ENV_VARS["q"], None),
            budget=budget if budget is not None else _env_int(ENV_VARS["budget"], DEFAULT_BUDGET),
            window=window if window is not None else _env_int(ENV_VARS["window"], None),
            output_format=(
                output_format
                or os.getenv(ENV_VARS["output_format"])
                or COMMAND_FORMATS.get(command, DEFAULT_FORMAT)
            ),
            cache_path=Path(cache_path) if cache_path else (Path(env_cache) if env_cache else None),
            seed=seed if seed is not None else _env_int(ENV_VARS["seed"], DEFAULT_SEED),
            extras=dict(extras),
        )
        return cfg.validate()
