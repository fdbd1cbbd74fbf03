"""Run configuration with simulation-campaign defaults, plus the flat
``key = value`` config-file format used by the command line."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, fields

SCHEMES = ("tim", "benchmark")
DETECTORS = ("ml", "llr")


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    return 10.0 * math.log10(watts) + 30.0


@dataclass(frozen=True)
class SimConfig:
    """All knobs of one run. Defaults are the baseline campaign setup:
    4-QAM, 4 receive antennas, a 256-cell surface split 60/35/161, 2-bit
    cells, 30/34 dBm signal levels at 2 GHz."""

    scheme: str = "tim"
    k_slots: int = 8
    l_slots: int = 2
    m_order: int = 4
    constellation: str = "qam"
    m_rx: int = 4
    n_cells: int = 256
    n1: int = 60
    n2: int = 35
    n_cb: int = 4
    technology: str = "rf-switch"
    p_cb_uw: float = 50.0
    p_switch_uw: float = 1.0
    p_drive_uw: float = 40.0
    p_varactor_uw: float = 0.0
    ris_rho: float = 0.75
    ris_p_on_uw: float = 150.0
    ris_p_sat_mw: float = 70.0
    eh_rho: float = 0.75
    eh_p_on_uw: float = 50.0
    eh_p_sat_mw: float = 0.1
    p_low_dbm: float = 30.0
    p_high_dbm: float = 34.0
    kappa: float = 5.0
    d_tx_ris_m: float = 5.0
    d_ris_rx_m: float = 10.0
    d_direct_m: float = 14.0
    carrier_ghz: float = 2.0
    snr_db_grid: tuple = (0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
    trials: int = 1000
    seed: int = 1
    codebook_strategy: str = "lexicographic"
    detector: str = "llr"
    los_phase_policy: str = "per-link"
    omega_phase_rad: float = 0.0
    paper_compat: bool = False

    @property
    def n3(self) -> int:
        return self.n_cells - self.n1 - self.n2

    @property
    def group_sizes(self) -> tuple:
        return (self.n1, self.n2, self.n3)

    @property
    def p_low_w(self) -> float:
        return dbm_to_watts(self.p_low_dbm)

    @property
    def p_high_w(self) -> float:
        return dbm_to_watts(self.p_high_dbm)

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.detector not in DETECTORS:
            raise ValueError(f"detector must be one of {DETECTORS}, got {self.detector!r}")
        if self.k_slots < 1:
            raise ValueError("k_slots must be >= 1")
        max_l = self.k_slots if self.scheme == "benchmark" else self.k_slots - 1
        if not 1 <= self.l_slots <= max_l:
            raise ValueError(f"need 1 <= l_slots <= {max_l} for scheme {self.scheme!r}")
        if self.n1 < 0 or self.n2 < 0 or self.n3 < 0:
            raise ValueError(
                f"cell split n1={self.n1}, n2={self.n2} incompatible with n_cells={self.n_cells}"
            )
        if self.p_high_dbm < self.p_low_dbm:
            raise ValueError("p_high_dbm must be >= p_low_dbm")
        if not self.snr_db_grid:
            raise ValueError("snr_db_grid cannot be empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def make_config(**overrides) -> SimConfig:
    """Build a validated config; unknown keys are rejected."""
    known = {f.name for f in fields(SimConfig)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    cfg = SimConfig(**overrides)
    cfg.validate()
    return cfg


def _parse_value(name: str, kind, text: str):
    text = text.strip()
    if kind is bool:
        lowered = text.lower()
        if lowered in ("true", "yes", "1"):
            return True
        if lowered in ("false", "no", "0"):
            return False
        raise ValueError(f"config key {name}: cannot parse {text!r} as a boolean")
    if kind is int:
        return int(text)
    if kind is float:
        return float(text)
    if kind is tuple:
        return tuple(float(v) for v in text.split(",") if v.strip())
    return text


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (with # comments) into typed overrides."""
    defaults = SimConfig()
    kinds = {f.name: type(getattr(defaults, f.name)) for f in fields(SimConfig)}

    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in kinds:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
        overrides[key] = _parse_value(key, kinds[key], value)
    return overrides


def load_config(path) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return make_config(**parse_config_text(fh.read()))


def config_hash(cfg: SimConfig) -> str:
    """Short stable digest of the full configuration."""
    lines = []
    for f in fields(SimConfig):
        lines.append(f"{f.name}={getattr(cfg, f.name)!r}")
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()[:12]
