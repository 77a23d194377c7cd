"""Run configuration, sweep records and the v1 CSV / JSON formats.

Config files are INI-style key-value text with a single ``[run]``
section; every key is also settable through a command-line flag of the
same name, and flags override the file.  Runs are deterministic (the
seed field is reserved), so identical configurations produce
byte-identical CSV output.
"""
from __future__ import annotations

import configparser
import json
import math
import os
from dataclasses import dataclass, field, fields

import numpy as np

from .errors import ConfigError

__all__ = ["RunConfig", "SweepRecord", "CSV_VERSION_LINE", "CSV_HEADER",
           "write_records_csv", "write_summary_json", "parse_matrix_file"]

CSV_VERSION_LINE = "# adia-tradeoff csv v1"
CSV_HEADER = (
    "N,schedule,p,C,T,eps_numeric,eps_leading,eps_upper,eps_lower,"
    "T_val,eps_tilde,jansen,roland_T,flags"
)

MODELS = ("grover-reduced", "grover-full", "custom-matrix-file")
SCHEDULES = ("linear", "optimal", "beta")


def _default_jobs() -> int:
    env = os.environ.get("ADIA_JOBS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


@dataclass
class RunConfig:
    """One sweep configuration.

    ``T_list`` (comma floats) and ``T_range`` ("min:max:count",
    log-spaced, or "auto:count" for [T_val, 8 T_val]) are mutually
    exclusive; with neither given, 20 log-spaced points on
    [T_val, 8 T_val] are used.
    """

    model: str = "grover-reduced"
    schedule: str = "optimal"
    p: int = 0
    N: int = 32
    C: float | None = None
    T_list: list[float] | None = None
    T_range: str | None = None
    quad_tol: float = 1e-10
    integrator_tol: float = 1e-9
    csv_path: str | None = None
    json_path: str | None = None
    matrix_file: str | None = None
    marked: int = 0
    seed: int = 0
    jobs: int = field(default_factory=_default_jobs)

    def validate(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model: unknown value {self.model!r}")
        if self.schedule not in SCHEDULES:
            raise ConfigError(f"schedule: unknown value {self.schedule!r}")
        if self.N < 2:
            raise ConfigError(f"N: must be >= 2, got {self.N}")
        if self.p < 0:
            raise ConfigError(f"p: must be >= 0, got {self.p}")
        if self.schedule == "beta" and self.p < 1:
            raise ConfigError("p: beta schedules need p >= 1")
        if self.C is not None and not self.C > 0:
            raise ConfigError(f"C: must be positive, got {self.C}")
        for name in ("quad_tol", "integrator_tol"):
            value = getattr(self, name)
            if not 0.0 < value <= 1e-2:
                raise ConfigError(f"{name}: must be in (0, 1e-2], got {value}")
        if self.T_list is not None and self.T_range is not None:
            raise ConfigError("T_list: mutually exclusive with T_range")
        if self.T_list is not None:
            if not self.T_list or any(t <= 0 for t in self.T_list):
                raise ConfigError("T_list: values must be positive")
        if self.T_range is not None:
            self._parse_t_range()  # raises on malformed input
        if self.model == "custom-matrix-file" and not self.matrix_file:
            raise ConfigError("matrix_file: required for model custom-matrix-file")
        if self.jobs < 1:
            raise ConfigError(f"jobs: must be >= 1, got {self.jobs}")
        if self.marked < 0 or self.marked >= self.N:
            raise ConfigError(f"marked: must be in 0..N-1, got {self.marked}")
        return self

    def _parse_t_range(self):
        parts = str(self.T_range).split(":")
        if parts[0] == "auto":
            if len(parts) != 2:
                raise ConfigError("T_range: auto form is 'auto:count'")
            try:
                count = int(parts[1])
            except ValueError:
                raise ConfigError(f"T_range: bad count {parts[1]!r}") from None
            if count < 2:
                raise ConfigError("T_range: count must be >= 2")
            return ("auto", count)
        if len(parts) != 3:
            raise ConfigError("T_range: expected 'min:max:count' or 'auto:count'")
        try:
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"T_range: malformed {self.T_range!r}") from None
        if not 0 < lo < hi or count < 2:
            raise ConfigError("T_range: need 0 < min < max and count >= 2")
        return (lo, hi, count)

    def resolve_T_values(self, T_val: float) -> np.ndarray:
        if self.T_list is not None:
            return np.asarray(sorted(self.T_list), dtype=float)
        spec = self._parse_t_range() if self.T_range is not None else ("auto", 20)
        if spec[0] == "auto":
            lo, hi, count = T_val, 8.0 * T_val, spec[1]
        else:
            lo, hi, count = spec
        return np.logspace(math.log10(lo), math.log10(hi), count)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        parser = configparser.ConfigParser()
        parser.optionxform = str  # keys are case-sensitive (N vs n)
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config: cannot read {path!r}")
        if not parser.has_section("run"):
            raise ConfigError("config: missing [run] section")
        allowed = {f.name for f in fields(cls)}
        kwargs = {}
        for key, raw in parser.items("run"):
            if key not in allowed:
                raise ConfigError(f"{key}: unknown configuration key")
            kwargs[key] = _coerce(key, raw)
        return cls(**kwargs)

    def apply_overrides(self, overrides: dict) -> "RunConfig":
        allowed = {f.name for f in fields(self)}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in allowed:
                raise ConfigError(f"{key}: unknown configuration key")
            setattr(self, key, _coerce(key, value) if isinstance(value, str) else value)
        return self

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, np.ndarray):
                value = value.tolist()
            out[f.name] = value
        return out


_INT_KEYS = {"p", "N", "marked", "seed", "jobs"}
_FLOAT_KEYS = {"C", "quad_tol", "integrator_tol"}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if key == "T_list":
        try:
            return [float(tok) for tok in raw.split(",") if tok.strip()]
        except ValueError:
            raise ConfigError(f"T_list: malformed {raw!r}") from None
    return raw


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats; empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


@dataclass
class SweepRecord:
    """One (model, schedule, T) sweep point; mirrors the v1 CSV columns."""

    N: int
    schedule: str
    p: int
    C: float
    T: float
    eps_numeric: float | None
    eps_leading: float | None
    eps_upper: float | None
    eps_lower: float | None
    T_val: float
    eps_tilde: float
    jansen: float | None
    roland_T: float | None
    flags: list[str] = field(default_factory=list)

    def csv_row(self) -> str:
        cells = [
            str(self.N),
            self.schedule,
            str(self.p),
            _fmt(self.C),
            _fmt(self.T),
            _fmt(self.eps_numeric),
            _fmt(self.eps_leading),
            _fmt(self.eps_upper),
            _fmt(self.eps_lower),
            _fmt(self.T_val),
            _fmt(self.eps_tilde),
            _fmt(self.jansen),
            _fmt(self.roland_T),
            ";".join(self.flags),
        ]
        return ",".join(cells)


def write_records_csv(records, path) -> None:
    lines = [CSV_VERSION_LINE, CSV_HEADER]
    lines.extend(r.csv_row() for r in records)
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_summary_json(summary: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_matrix_file(path: str):
    """Parse the custom family file: ``d m`` then d rows each for H_i, H_f.

    ``m`` counts the matrices and must be 2 (interpolating families
    only; sampled derivative tables are not supported).  Entries are
    whitespace-separated Python literals, complex accepted (``1+2j``).
    """
    try:
        with open(path) as fh:
            tokens = [line.split("#")[0] for line in fh]
    except OSError as exc:
        raise ConfigError(f"matrix_file: cannot read {path!r}: {exc}") from None
    rows = [r.split() for r in tokens if r.strip()]
    if not rows or len(rows[0]) != 2:
        raise ConfigError("matrix_file: first line must be 'd m'")
    try:
        dim, count = int(rows[0][0]), int(rows[0][1])
    except ValueError:
        raise ConfigError("matrix_file: first line must hold two integers") from None
    if count != 2:
        raise ConfigError("matrix_file: m must be 2 (H_i and H_f)")
    if dim < 2:
        raise ConfigError("matrix_file: dimension must be >= 2")
    if len(rows) != 1 + 2 * dim:
        raise ConfigError(
            f"matrix_file: expected {2 * dim} matrix rows, found {len(rows) - 1}"
        )

    def parse_block(block):
        out = np.empty((dim, dim), dtype=complex)
        for i, row in enumerate(block):
            if len(row) != dim:
                raise ConfigError(f"matrix_file: row {i} has {len(row)} entries, expected {dim}")
            for j, tok in enumerate(row):
                try:
                    out[i, j] = complex(tok)
                except ValueError:
                    raise ConfigError(f"matrix_file: bad entry {tok!r}") from None
        return out

    h_i = parse_block(rows[1 : 1 + dim])
    h_f = parse_block(rows[1 + dim : 1 + 2 * dim])
    return h_i, h_f
