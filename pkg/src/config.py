"""
Run configuration: limits, seed resolution and the RunConfig contract.

Config files are plain `key = value` text, one field per line, `#` comments.
Precedence: CLI flag > config file > SPECDIM_SEED (seed only) > defaults.
"""

import os
from pathlib import Path
from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.utils import clean_family_name

# Parametros de control
SCHEMA_VERSION = 1
DEFAULT_SEED = 42
SEED_ENV_VAR = "SPECDIM_SEED"
MAX_SPECTRUM_ENTRIES = 4_000_000
MAX_GRAPH_CUTOFF = 10_000
BRAUER_KLIMYK_MAX_RANK = 6

FAMILY_ALIASES: Dict[str, str] = {
    "odd_a": "OddA",
    "odda": "OddA",
    "su": "OddA",
    "even_b": "EvenB",
    "evenb": "EvenB",
    "odd_d": "OddD",
    "oddd": "OddD",
}

FAMILY_MIN_N = {"OddA": 1, "EvenB": 1, "OddD": 2}


def normalize_family(name: str) -> str:
    """Maps any accepted alias ('odd-a', 'OddA', 'odd_a') to the canonical name."""
    key = clean_family_name(name)
    if key not in FAMILY_ALIASES:
        raise ValueError(
            f"Unknown family '{name}'. Use one of: odd-a, even-b, odd-d."
        )
    return FAMILY_ALIASES[key]


def resolve_seed(flag_value: Optional[int] = None) -> int:
    """Seed from the flag, else SPECDIM_SEED, else the fixed default."""
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is not None and raw.strip():
        return int(raw.strip())
    return DEFAULT_SEED


class RunConfig(BaseModel):
    """Contract for every CLI run; serializable to and from key-value text."""

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    family: str = Field(default="OddA", description="OddA, EvenB or OddD.")
    n: int = Field(default=1, ge=1, description="Rank parameter of the family.")
    method: Literal["exact", "fit"] = Field(default="exact")
    cutoff: Optional[int] = Field(
        default=None, ge=1, le=10_000_000, description="Command default if unset."
    )
    c: Optional[float] = Field(
        default=None, gt=0, description="Growth-graph ratio bound; family default if unset."
    )
    norm_kind: Literal["sup", "l2"] = Field(default="sup")
    p: Optional[float] = Field(default=None, gt=0)
    seed: int = Field(default=DEFAULT_SEED)
    emit: Literal["json", "csv", "dot", "text"] = Field(default="text")
    window: Optional[Tuple[int, int]] = Field(default=None)
    max_entry: int = Field(default=3, ge=0, le=10)
    max_rank: int = Field(default=4, ge=1, le=BRAUER_KLIMYK_MAX_RANK)
    max_gamma: int = Field(default=20, ge=0)
    gamma: Optional[Tuple[int, ...]] = Field(default=None)
    max_n: int = Field(default=5, ge=1)
    samples: int = Field(default=20, ge=1)
    out: Optional[str] = Field(
        default=None, description="report: also save the JSON table to this path."
    )

    @field_validator("family", mode="before")
    @classmethod
    def canonical_family(cls, value: str) -> str:
        return normalize_family(str(value))

    @field_validator("window", "gamma", mode="before")
    @classmethod
    def parse_int_tuple(cls, value: Any) -> Any:
        """Accepts '250,500' style strings from flags and config files."""
        if isinstance(value, str):
            parts = [p for p in value.replace(" ", "").split(",") if p]
            return tuple(int(p) for p in parts)
        return value

    @model_validator(mode="after")
    def check_family_rank(self) -> "RunConfig":
        minimum = FAMILY_MIN_N[self.family]
        if self.n < minimum:
            raise ValueError(f"{self.family} requires n >= {minimum}, got {self.n}")
        if self.window is not None and len(self.window) != 2:
            raise ValueError("window must be two integers 'lo,hi'")
        return self

    def to_config_text(self) -> str:
        """Key-value rendering; unset optional fields are omitted."""
        lines = []
        for key, value in self.model_dump().items():
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(str(v) for v in value)
            lines.append(f"{key} = {value}")
        return "\n".join(lines) + "\n"


def parse_config_text(text: str) -> Dict[str, str]:
    """Parses `key = value` lines; raises ValueError on malformed lines."""
    values: Dict[str, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ValueError(f"Line {number}: expected 'key = value', got '{line}'")
        key, value = content.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def load_config_file(path: str) -> Dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def build_run_config(
    flags: Dict[str, Any], config_path: Optional[str] = None
) -> RunConfig:
    """Merges config file values, flags and the seed environment variable."""
    merged: Dict[str, Any] = {}
    if config_path:
        merged.update(load_config_file(config_path))
    merged.update({k: v for k, v in flags.items() if v is not None})
    seed_flag = merged.get("seed")
    merged["seed"] = resolve_seed(int(seed_flag) if seed_flag is not None else None)
    return RunConfig(**merged)
