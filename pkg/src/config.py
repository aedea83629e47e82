"""Configuration management for cusplab.

Config values are loaded with this priority (highest wins):
  1. Command-line flags
  2. JSON config file (--config)
  3. Environment variables (from .env or shell)
  4. Defaults defined in CONFIG_REGISTRY
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from dotenv import load_dotenv

from construction import ConstructionParams
from core import PrecisionConfig
from core.errors import ConfigInvalid

log = logging.getLogger("cusplab.config")

# Project root is one level up from src/
PROJECT_ROOT = Path(__file__).parent.parent
ENV_FILE = PROJECT_ROOT / ".env"
PARAMS_FILE = "params.json"


@dataclass(frozen=True)
class ConfigParam:
    """Definition of a single configuration parameter."""

    key: str  # dict key, e.g. "samples"
    env_var: str  # env var name, e.g. "CUSP_SAMPLES"
    default: str | None  # default as string (None = no default)
    type: str  # "str" | "int" | "float" | "bool"
    group: str
    description: str


# fmt: off
CONFIG_REGISTRY: list[ConfigParam] = [
    # --- Construction ---
    ConfigParam("d", "CUSP_D", "2", "int", "Construction",
                "Dimension parameter: X = SL(d+1,Z)\\SL(d+1,R)"),
    ConfigParam("M", "CUSP_M", "2.0", "float", "Construction",
                "Height threshold M"),
    ConfigParam("N", "CUSP_N", "4", "int", "Construction",
                "Block length N"),
    ConfigParam("K", "CUSP_K", None, "int", "Construction",
                "Number of seeds (default ⌊e^{dN}/13⌋)"),
    ConfigParam("K_sub", "CUSP_K_SUB", "8", "int", "Construction",
                "Symbols used by m-level builds"),
    ConfigParam("m", "CUSP_M_LEVEL", "2", "int", "Construction",
                "Word length of the m-level build"),
    ConfigParam("c0", "CUSP_C0", "1.5", "float", "Construction",
                "Metric comparison constant c₀"),
    ConfigParam("eta0", "CUSP_ETA0", "0.5", "float", "Construction",
                "Radius η₀ where the metric comparison holds"),
    ConfigParam("delta", "CUSP_DELTA", None, "float", "Construction",
                "Working injectivity radius δ (default 0.9·min{1/8M, η₀})"),
    ConfigParam("eta", "CUSP_ETA", None, "float", "Construction",
                "Separation scale η (default δ/2)"),
    ConfigParam("nprime", "CUSP_NPRIME", "10", "int", "Construction",
                "Connector length N′"),
    ConfigParam("allow_d1", "CUSP_ALLOW_D1", "false", "bool", "Construction",
                "Permit d = 1 (outside the measure lemma's hypothesis)"),

    # --- Numerics ---
    ConfigParam("precision_bits", "CUSP_PRECISION_BITS", "128", "int", "Numerics",
                "Mantissa bits of the working precision"),
    ConfigParam("det_tol", "CUSP_DET_TOL", "1e-20", "float", "Numerics",
                "Allowed |det − 1| drift before renormalizing"),
    ConfigParam("tol", "CUSP_TOL", "1e-9", "float", "Numerics",
                "Relative width of the Boundary band around height thresholds"),
    ConfigParam("gamma_box", "CUSP_GAMMA_BOX", "1", "int", "Numerics",
                "Offset box for quotient-distance candidates"),
    ConfigParam("seed", "CUSP_SEED", "42", "int", "Numerics",
                "Root RNG seed"),

    # --- Experiments ---
    ConfigParam("samples", "CUSP_SAMPLES", "10000", "int", "Experiments",
                "Monte Carlo samples for scan-an"),
    ConfigParam("scan_mode", "CUSP_SCAN_MODE", "montecarlo", "str", "Experiments",
                "Parameter-cube sampler: grid or montecarlo"),
    ConfigParam("resolution", "CUSP_RESOLUTION", "8", "int", "Experiments",
                "Per-axis grid resolution of the seed search inside a cube"),
    ConfigParam("l_min", "CUSP_L_MIN", "-10", "int", "Experiments",
                "First orbit time of shadowing checks"),
    ConfigParam("l_max", "CUSP_L_MAX", "10", "int", "Experiments",
                "Last orbit time of shadowing checks"),
    ConfigParam("shadow_eps", "CUSP_SHADOW_EPS", "1e-4", "float", "Experiments",
                "Displacement size of shadow-batch draws"),
    ConfigParam("draws", "CUSP_DRAWS", "1000", "int", "Experiments",
                "Random displacements drawn by shadow-batch"),
    ConfigParam("pair_cap", "CUSP_PAIR_CAP", "10000", "int", "Experiments",
                "Max sampled pairs per verification"),
    ConfigParam("nprime_min", "CUSP_NPRIME_MIN", "1", "int", "Experiments",
                "First N′ tried by find-nprime"),
    ConfigParam("nprime_max", "CUSP_NPRIME_MAX", "60", "int", "Experiments",
                "Last N′ tried by find-nprime"),
    ConfigParam("connector_pairs", "CUSP_CONNECTOR_PAIRS", "100", "int", "Experiments",
                "Seed pairs used by find-nprime"),
    ConfigParam("connector_starts", "CUSP_CONNECTOR_STARTS", "8", "int", "Experiments",
                "Start points per connector search"),
    ConfigParam("connector_budget", "CUSP_CONNECTOR_BUDGET", "25", "int", "Experiments",
                "Newton steps per connector start"),
    ConfigParam("build_budget", "CUSP_BUILD_BUDGET", "10000", "int", "Experiments",
                "Max number of points an m-level build may create"),
    ConfigParam("entropy_eps", "CUSP_ENTROPY_EPS", "0.1", "float", "Experiments",
                "ε of the entropy accounting"),

    # --- Output ---
    ConfigParam("out", "CUSP_OUT", str(PROJECT_ROOT / "runs" / "default"), "str", "Output",
                "Run directory (events.jsonl, summary.csv, state.db, cusplab.log)"),
    ConfigParam("format", "CUSP_FORMAT", "jsonl", "str", "Output",
                "Report printed to stdout: jsonl or csv"),
    ConfigParam("workers", "CUSP_WORKERS", "1", "int", "Output",
                "Worker processes (1 runs inline)"),
    ConfigParam("quiet", "CUSP_QUIET", "false", "bool", "Output",
                "Disable progress bars"),
    ConfigParam("log_level", "CUSP_LOG_LEVEL", "INFO", "str", "Output",
                "Logging level"),
]
# fmt: on

# Build a lookup for quick access
_REGISTRY_BY_KEY = {p.key: p for p in CONFIG_REGISTRY}

FORMATS = ("jsonl", "csv")
SCAN_MODES = ("grid", "montecarlo")


def _convert(raw: Any, type_str: str) -> str | int | float | bool | None:
    """Convert a raw value to the appropriate Python type."""
    if raw is None:
        return None
    if type_str == "int":
        if raw == "":
            return None
        return int(raw)
    if type_str == "float":
        if raw == "":
            return None
        return float(raw)
    if type_str == "bool":
        if isinstance(raw, bool):
            return raw
        return str(raw).lower() == "true"
    return str(raw)


def _load_config_file(path: str | Path | None) -> dict:
    """Load overrides from a JSON config file. Returns empty dict if none given."""
    if path is None:
        return {}
    path = Path(path)
    try:
        with open(path) as f:
            data = json.load(f)
    except (json.JSONDecodeError, OSError) as e:
        raise ConfigInvalid(f"Failed to read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigInvalid(f"Config file {path} is not a JSON object")
    unknown = sorted(set(data) - set(_REGISTRY_BY_KEY))
    if unknown:
        log.warning("Ignoring unknown keys in %s: %s", path, ", ".join(unknown))
    return data


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one run and the validated construction constants."""

    params: ConstructionParams
    settings: dict = field(default_factory=dict)

    def __getitem__(self, key: str) -> Any:
        return self.settings[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.settings.get(key, default)

    @property
    def out(self) -> Path:
        return Path(self.settings["out"])

    def with_nprime(self, nprime: int) -> RunConfig:
        """Copy with a certified connector length."""
        settings = dict(self.settings, nprime=nprime)
        return build_run_config(settings)


def build_run_config(settings: dict) -> RunConfig:
    """Validate resolved settings and build the construction constants."""
    try:
        precision = PrecisionConfig(
            mantissa_bits=settings["precision_bits"],
            det_tol=settings["det_tol"],
            seed=settings["seed"],
        )
    except ValueError as e:
        raise ConfigInvalid(str(e)) from e
    params = ConstructionParams(
        d=settings["d"],
        M=settings["M"],
        N=settings["N"],
        K=settings["K"],
        delta=settings["delta"],
        eta=settings["eta"],
        c0=settings["c0"],
        eta0=settings["eta0"],
        gamma_box=settings["gamma_box"],
        Nprime=settings["nprime"],
        tol=settings["tol"],
        allow_d1=settings["allow_d1"],
        precision=precision,
    )

    if not 1 <= settings["K_sub"] <= params.K:
        raise ConfigInvalid(f"K_sub = {settings['K_sub']} outside 1..K = {params.K}")
    if settings["m"] < 1:
        raise ConfigInvalid(f"m must be >= 1, got {settings['m']}")
    if settings["format"] not in FORMATS:
        raise ConfigInvalid(f"format must be one of {FORMATS}, got {settings['format']!r}")
    if settings["scan_mode"] not in SCAN_MODES:
        raise ConfigInvalid(
            f"scan_mode must be one of {SCAN_MODES}, got {settings['scan_mode']!r}"
        )
    if settings["workers"] < 1:
        raise ConfigInvalid(f"workers must be >= 1, got {settings['workers']}")
    if settings["l_min"] > settings["l_max"]:
        raise ConfigInvalid(f"l_min = {settings['l_min']} exceeds l_max = {settings['l_max']}")
    if not 1 <= settings["nprime_min"] <= settings["nprime_max"]:
        raise ConfigInvalid(
            f"Invalid N′ scan range [{settings['nprime_min']}, {settings['nprime_max']}]"
        )

    resolved = dict(settings)
    resolved.update(K=params.K, delta=params.delta, eta=params.eta)
    return RunConfig(params=params, settings=resolved)


def load_config(flags: dict | None = None, config_path: str | Path | None = None) -> RunConfig:
    """Load configuration with priority: flags > config file > env vars > defaults."""
    load_dotenv(ENV_FILE)  # no-op if file doesn't exist; won't override existing env vars
    file_overrides = _load_config_file(config_path)
    flags = {k: v for k, v in (flags or {}).items() if v is not None}

    settings = {}
    for param in CONFIG_REGISTRY:
        if param.key in flags:
            raw = flags[param.key]
        elif param.key in file_overrides:
            raw = file_overrides[param.key]
        else:
            env_val = os.getenv(param.env_var)
            if env_val is not None:
                raw = env_val
            else:
                raw = param.default
        try:
            settings[param.key] = _convert(raw, param.type)
        except (TypeError, ValueError) as e:
            raise ConfigInvalid(f"{param.key} = {raw!r} is not a valid {param.type}") from e

    return build_run_config(settings)


def save_resolved_config(cfg: RunConfig, path: str | Path) -> None:
    """Write the resolved settings as sorted JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(cfg.settings, f, indent=2, sort_keys=True)
        f.write("\n")

