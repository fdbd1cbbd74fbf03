"""Rician block-fading channel generation for all links of the system.

Five links are drawn per block: transmitter->receiver (direct),
transmitter->surface, surface->receiver, transmitter->harvester, and
surface->harvester. The surface is partitioned into three cell groups
(assist / absorb / inform) and the per-group cascaded channels are
assembled once per block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

LOS_PHASE_POLICIES = ("per-link", "per-entry", "zero")


def path_loss_db(distance_m: float, carrier_ghz: float) -> float:
    """Indoor-hotspot path loss in dB for distance in meters and carrier in GHz."""
    if distance_m < 1.0:
        raise ValueError(f"path-loss model is calibrated for d >= 1 m, got {distance_m}")
    if carrier_ghz <= 0.0:
        raise ValueError(f"carrier frequency must be positive, got {carrier_ghz}")
    return 32.8 + 16.9 * math.log10(distance_m) + 20.0 * math.log10(carrier_ghz)


def path_gain(distance_m: float, carrier_ghz: float) -> float:
    """Linear power gain of a link (inverse of the dB path loss)."""
    return 10.0 ** (-path_loss_db(distance_m, carrier_ghz) / 10.0)


@dataclass(frozen=True)
class PathLossModel:
    carrier_ghz: float

    def loss_db(self, distance_m: float) -> float:
        return path_loss_db(distance_m, self.carrier_ghz)

    def gain(self, distance_m: float) -> float:
        return path_gain(distance_m, self.carrier_ghz)


@dataclass
class RicianSpec:
    """Per-link fading parameters.

    ``los_phase`` fixes the deterministic line-of-sight phase(s): a scalar
    applies one common phase to every entry, an array gives per-entry phases.
    The line-of-sight component always has unit magnitude.
    """

    kappa: float
    path_gain: float
    los_phase: float | np.ndarray = 0.0

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError(f"Rician factor must be >= 0, got {self.kappa}")
        if not 0.0 < self.path_gain <= 1.0:
            raise ValueError(f"path gain must be in (0, 1], got {self.path_gain}")


def sample_rician(spec: RicianSpec, rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a rows x cols matrix of independent Rician fades.

    Each entry is sqrt(gain) * (sqrt(k/(k+1)) * exp(j*theta_los)
    + sqrt(1/(k+1)) * w) with w standard circularly symmetric complex
    Gaussian, so the per-entry mean power equals the path gain.
    """
    shape = (rows, cols)
    nlos = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    los = np.exp(1j * np.broadcast_to(np.asarray(spec.los_phase, dtype=float), shape))
    k = spec.kappa
    mix = math.sqrt(k / (k + 1.0)) * los + math.sqrt(1.0 / (k + 1.0)) * nlos
    return math.sqrt(spec.path_gain) * mix


@dataclass
class ChannelRealization:
    """All channel blocks for one coherence block of K slots.

    ``f_casc`` (receive antennas x 3) and ``v_casc`` (3,) hold the per-group
    cascaded channels toward the receiver and the harvester; column/entry l
    is the group-l surface->destination block applied to the
    transmitter->surface block.
    """

    h_d: np.ndarray
    h_r: np.ndarray
    G_d: np.ndarray
    h_e: complex
    g_e: np.ndarray
    group_sizes: tuple
    f_casc: np.ndarray
    v_casc: np.ndarray

    def group_slice(self, l: int) -> slice:
        start = sum(self.group_sizes[:l])
        return slice(start, start + self.group_sizes[l])


def make_realization(h_d, h_r, G_d, h_e, g_e, group_sizes) -> ChannelRealization:
    """Assemble a realization and its cascaded channels from raw link draws."""
    h_d = np.asarray(h_d, dtype=complex)
    h_r = np.asarray(h_r, dtype=complex)
    G_d = np.asarray(G_d, dtype=complex)
    g_e = np.asarray(g_e, dtype=complex)
    n = h_r.shape[0]
    if sum(group_sizes) != n:
        raise ValueError(f"group sizes {group_sizes} do not sum to N={n}")
    if G_d.shape != (h_d.shape[0], n) or g_e.shape != (n,):
        raise ValueError("inconsistent link dimensions")

    real = ChannelRealization(
        h_d=h_d,
        h_r=h_r,
        G_d=G_d,
        h_e=complex(h_e),
        g_e=g_e,
        group_sizes=tuple(group_sizes),
        f_casc=np.zeros((h_d.shape[0], 3), dtype=complex),
        v_casc=np.zeros(3, dtype=complex),
    )
    for l in range(3):
        sl = real.group_slice(l)
        real.f_casc[:, l] = G_d[:, sl] @ h_r[sl]
        real.v_casc[l] = g_e[sl] @ h_r[sl]
    return real


class ChannelModel:
    """Per-run channel generator.

    Line-of-sight phases are drawn once at construction (per the configured
    policy) and held fixed for every block of the run; only the diffuse
    components are redrawn per block. ``realize`` is pure in the passed
    random stream, so independent streams may drive concurrent workers.
    """

    def __init__(
        self,
        m_rx: int,
        n_cells: int,
        group_sizes,
        kappa: float = 5.0,
        carrier_ghz: float = 2.0,
        d_tx_ris_m: float = 5.0,
        d_ris_rx_m: float = 10.0,
        d_direct_m: float = 14.0,
        los_phase_policy: str = "per-link",
        rng: np.random.Generator | None = None,
    ):
        if sum(group_sizes) != n_cells:
            raise ValueError(f"group sizes {tuple(group_sizes)} do not sum to N={n_cells}")
        if los_phase_policy not in LOS_PHASE_POLICIES:
            raise ValueError(f"unknown LoS phase policy {los_phase_policy!r}")
        if los_phase_policy != "zero" and rng is None:
            raise ValueError(f"policy {los_phase_policy!r} needs a random stream for the phases")

        self.m_rx = m_rx
        self.n_cells = n_cells
        self.group_sizes = tuple(group_sizes)
        self.los_phase_policy = los_phase_policy

        pl = PathLossModel(carrier_ghz)
        gain_direct = pl.gain(d_direct_m)
        gain_tx_ris = pl.gain(d_tx_ris_m)
        gain_ris_rx = pl.gain(d_ris_rx_m)

        # One spec per link, drawn in a fixed order for reproducibility.
        link_shapes = {
            "h_d": (m_rx, 1),
            "h_r": (n_cells, 1),
            "G_d": (m_rx, n_cells),
            "h_e": (1, 1),
            "g_e": (n_cells, 1),
        }
        link_gains = {
            "h_d": gain_direct,
            "h_r": gain_tx_ris,
            "G_d": gain_ris_rx,
            "h_e": gain_direct,
            "g_e": gain_ris_rx,
        }
        self.specs = {}
        for name in ("h_d", "h_r", "G_d", "h_e", "g_e"):
            if los_phase_policy == "zero":
                phase = 0.0
            elif los_phase_policy == "per-link":
                phase = float(rng.uniform(0.0, 2.0 * np.pi))
            else:
                phase = rng.uniform(0.0, 2.0 * np.pi, size=link_shapes[name])
            self.specs[name] = RicianSpec(kappa=kappa, path_gain=link_gains[name], los_phase=phase)

    def realize(self, rng: np.random.Generator) -> ChannelRealization:
        """Draw one block realization; fixed for the K slots of the block."""
        m, n = self.m_rx, self.n_cells
        h_d = sample_rician(self.specs["h_d"], m, 1, rng)[:, 0]
        h_r = sample_rician(self.specs["h_r"], n, 1, rng)[:, 0]
        G_d = sample_rician(self.specs["G_d"], m, n, rng)
        h_e = sample_rician(self.specs["h_e"], 1, 1, rng)[0, 0]
        g_e = sample_rician(self.specs["g_e"], n, 1, rng)[:, 0]
        return make_realization(h_d, h_r, G_d, h_e, g_e, self.group_sizes)
