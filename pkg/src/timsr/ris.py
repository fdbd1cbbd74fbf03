"""Surface-side models: discrete phase sets, group-1 co-phasing, per-slot
reflection vectors, the rectenna harvest curve, and the power budget that
decides whether the surface can run off harvested energy alone."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization

TWO_PI = 2.0 * math.pi

STAGE_INFO = "info"
STAGE_POWER = "power"

TECH_RF_SWITCH = "rf-switch"
TECH_VARACTOR = "varactor"


@dataclass(frozen=True)
class PhaseSet:
    """The B = 2^b - 1 selectable phase levels of a b-bit cell (one switch
    port is lost to the absorber), with the designated information pair and
    power phase. Fixed at design time, invariant across channel realizations."""

    resolution_bits: int
    phases: tuple
    phi_info: tuple
    phi_power: float

    @property
    def levels(self) -> int:
        return len(self.phases)


def phase_set_uniform(resolution_bits: int) -> PhaseSet:
    """Uniform levels 2*pi*m/B for m = 0..B-1; the first two levels form the
    information pair and the last is the power phase."""
    if resolution_bits < 2:
        raise ValueError(f"need at least 2-bit resolution, got {resolution_bits}")
    b_levels = (1 << resolution_bits) - 1
    phases = tuple(TWO_PI * m / b_levels for m in range(b_levels))
    return PhaseSet(
        resolution_bits=resolution_bits,
        phases=phases,
        phi_info=(phases[0], phases[1]),
        phi_power=phases[-1],
    )


def phase_set_2bit(assignment=None) -> PhaseSet:
    """Three-level set of a 2-bit cell; ``assignment`` overrides the default
    (phi1, phi2, phi_power) = (0, 2*pi/3, 4*pi/3)."""
    if assignment is None:
        return phase_set_uniform(2)
    phi1, phi2, phi_p = (float(p) for p in assignment)
    return PhaseSet(
        resolution_bits=2, phases=(phi1, phi2, phi_p), phi_info=(phi1, phi2), phi_power=phi_p
    )


def wrap_angle(x: float) -> float:
    """Wrap to (-pi, pi]."""
    return -((-x + math.pi) % TWO_PI - math.pi)


def closest_phase(target: float, candidates) -> float:
    """Candidate minimizing the squared wrapped distance to ``target``;
    ties resolve to the earliest candidate."""
    best = None
    best_d = math.inf
    for c in candidates:
        d = wrap_angle(c - target) ** 2
        if d < best_d:
            best, best_d = c, d
    return float(best)


def align_group1(channel: ChannelRealization, phase_pair) -> float:
    """Phase applied by the assisting group: the information-pair level
    closest to the circular mean, over the group's cells, of the phase that
    co-phases each cascaded path with the direct link (first receive antenna
    as reference)."""
    sl = channel.group_slice(0)
    cascade = channel.G_d[0, sl] * channel.h_r[sl]
    if cascade.size == 0:
        return float(phase_pair[0])
    desired = np.angle(cascade) - np.angle(channel.h_d[0])
    mu = float(np.angle(np.exp(1j * desired).sum()))
    return closest_phase(mu, phase_pair)


def reflection_vector(stage: str, group1_phase: float, info_phase: float, phase_set: PhaseSet) -> np.ndarray:
    """Per-group reflection coefficients [psi1, psi2, psi3] for one slot.

    The absorbing group never reflects (psi2 = 0); the outer groups reflect
    at unit amplitude with the power phase during power slots and with
    (group1_phase, info_phase) during information slots.
    """
    if stage == STAGE_POWER:
        p = np.exp(-1j * phase_set.phi_power)
        return np.array([p, 0.0, p], dtype=complex)
    if stage == STAGE_INFO:
        return np.array(
            [np.exp(-1j * group1_phase), 0.0, np.exp(-1j * info_phase)], dtype=complex
        )
    raise ValueError(f"unknown stage {stage!r}")


@dataclass(frozen=True)
class RisState:
    """Surface configuration for one block: the aligned assist phase and the
    information phase held constant over all L information slots."""

    group_sizes: tuple
    group1_phase: float
    info_phase: float
    phase_set: PhaseSet
    ris_bit: int

    def reflection(self, stage: str) -> np.ndarray:
        return reflection_vector(stage, self.group1_phase, self.info_phase, self.phase_set)


def make_ris_state(channel: ChannelRealization, phase_set: PhaseSet, ris_bit: int) -> RisState:
    """Configure the surface for a block: bit 0/1 selects the first/second
    information phase; the assist group is co-phased against the channel."""
    if ris_bit not in (0, 1):
        raise ValueError(f"surface bit must be 0 or 1, got {ris_bit}")
    return RisState(
        group_sizes=channel.group_sizes,
        group1_phase=align_group1(channel, phase_set.phi_info),
        info_phase=phase_set.phi_info[ris_bit],
        phase_set=phase_set,
        ris_bit=ris_bit,
    )


def ris_rectenna_input(h_r2: np.ndarray, s_k: complex) -> float:
    """RF power entering the surface rectenna in one slot: the absorbed
    signals combine coherently in the RF domain before rectification."""
    if np.size(h_r2) == 0:
        return 0.0
    return float(np.abs(np.sum(np.asarray(h_r2) * s_k)) ** 2)


@dataclass(frozen=True)
class RectennaModel:
    """Constant-linear-constant rectifier: dead below the turn-on power,
    linear with the given efficiency up to saturation, then capped."""

    efficiency: float
    p_on_w: float
    p_sat_w: float

    def __post_init__(self):
        if not 0.0 < self.efficiency <= 1.0:
            raise ValueError(f"efficiency must be in (0, 1], got {self.efficiency}")
        if not 0.0 < self.p_on_w < self.p_sat_w:
            raise ValueError(f"need 0 < p_on < p_sat, got {self.p_on_w}, {self.p_sat_w}")

    @property
    def p_max_w(self) -> float:
        return self.efficiency * (self.p_sat_w - self.p_on_w)


def clc_dc_power(q_w, model: RectennaModel):
    """Harvested DC power for rectenna input ``q_w`` (scalar or array)."""
    q = np.asarray(q_w, dtype=float)
    if np.any(q < 0):
        raise ValueError("rectenna input power cannot be negative")
    out = model.efficiency * np.clip(q - model.p_on_w, 0.0, model.p_sat_w - model.p_on_w)
    return float(out) if np.ndim(q_w) == 0 else out


@dataclass(frozen=True)
class RisPowerBudget:
    """Consumption model of the integrated controller architecture: one
    controller drives ``n_per_controller`` cells; the per-cell dynamic term
    depends on the cell technology."""

    n_cells: int
    n_per_controller: int
    p_controller_w: float
    technology: str
    p_switch_w: float
    p_drive_w: float
    p_varactor_w: float

    def __post_init__(self):
        if self.n_cells < 1 or self.n_per_controller < 1:
            raise ValueError("cell and controller counts must be >= 1")
        if self.technology not in (TECH_RF_SWITCH, TECH_VARACTOR):
            raise ValueError(f"unknown cell technology {self.technology!r}")


def ris_power_consumption(budget: RisPowerBudget) -> float:
    """Total surface power draw in watts (static controllers + per-cell)."""
    static = math.ceil(budget.n_cells / budget.n_per_controller) * budget.p_controller_w
    if budget.technology == TECH_RF_SWITCH:
        dynamic = budget.n_cells * budget.p_switch_w
    else:
        dynamic = budget.n_cells * (2.0 * budget.p_drive_w + budget.p_varactor_w)
    return static + dynamic


def standalone_check(per_slot_q_w, model: RectennaModel, budget: RisPowerBudget):
    """Whether the block-average harvested DC power covers the surface's own
    consumption. Returns (ok, margin in watts)."""
    avg_dc = float(np.mean(clc_dc_power(np.asarray(per_slot_q_w, dtype=float), model)))
    p_ris = ris_power_consumption(budget)
    return avg_dc >= p_ris, avg_dc - p_ris


def eh_received(channel: ChannelRealization, psi: np.ndarray, s_k: complex):
    """Received sample and rectenna input power at the harvester for one
    slot; thermal noise is below the harvesting floor and is not modeled."""
    eps = channel.h_e * s_k + (channel.v_casc @ psi) * s_k
    return complex(eps), float(np.abs(eps) ** 2)
