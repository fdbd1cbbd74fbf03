"""Monte Carlo harness: per-block trials, BER-vs-SNR and harvest-vs-N2
sweeps, the power-budget report, and CSV output.

Every trial owns a counter-based random stream keyed by (seed, trial index),
so results are independent of worker count and scheduling; aggregation runs
in trial order to keep floating-point reductions bit-stable.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from itertools import repeat

import numpy as np

from .channel import ChannelModel, path_gain
from .config import SimConfig, config_hash
from .ris import (
    RectennaModel,
    RisPowerBudget,
    STAGE_INFO,
    STAGE_POWER,
    TECH_RF_SWITCH,
    TECH_VARACTOR,
    clc_dc_power,
    make_ris_state,
    phase_set_2bit,
    ris_power_consumption,
)
from .rx import llr_detect, ml_joint_detect, observe
from .txphy import build_benchmark_codebook, build_codebook, build_constellation, encode_block

# Stream index reserved for the per-run line-of-sight phase draws; trial
# indices stay far below it.
LOS_STREAM = 2**64 - 1


def trial_rng(seed: int, stream: int) -> np.random.Generator:
    """Independent counter-based stream for one (seed, stream index) pair."""
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def build_channel_model(cfg: SimConfig) -> ChannelModel:
    return ChannelModel(
        m_rx=cfg.m_rx,
        n_cells=cfg.n_cells,
        group_sizes=cfg.group_sizes,
        kappa=cfg.kappa,
        carrier_ghz=cfg.carrier_ghz,
        d_tx_ris_m=cfg.d_tx_ris_m,
        d_ris_rx_m=cfg.d_ris_rx_m,
        d_direct_m=cfg.d_direct_m,
        los_phase_policy=cfg.los_phase_policy,
        rng=trial_rng(cfg.seed, LOS_STREAM),
    )


def ris_rectenna(cfg: SimConfig) -> RectennaModel:
    return RectennaModel(cfg.ris_rho, cfg.ris_p_on_uw * 1e-6, cfg.ris_p_sat_mw * 1e-3)


def eh_rectenna(cfg: SimConfig) -> RectennaModel:
    return RectennaModel(cfg.eh_rho, cfg.eh_p_on_uw * 1e-6, cfg.eh_p_sat_mw * 1e-3)


def power_budget(cfg: SimConfig, technology: str | None = None) -> RisPowerBudget:
    return RisPowerBudget(
        n_cells=cfg.n_cells,
        n_per_controller=cfg.n_cb,
        p_controller_w=cfg.p_cb_uw * 1e-6,
        technology=technology or cfg.technology,
        p_switch_w=cfg.p_switch_uw * 1e-6,
        p_drive_w=cfg.p_drive_uw * 1e-6,
        p_varactor_w=cfg.p_varactor_uw * 1e-6,
    )


def direct_snr_sigma2(cfg: SimConfig, snr_db: float) -> float:
    """Noise variance from the direct-link SNR definition: the direct-path
    gain divided by the linear SNR."""
    return path_gain(cfg.d_direct_m, cfg.carrier_ghz) / (10.0 ** (snr_db / 10.0))


@dataclass(frozen=True)
class RunContext:
    """Everything one trial needs; immutable and shareable across workers."""

    cfg: SimConfig
    sigma2: float | None
    channel_model: ChannelModel
    codebook: object
    constellation: object
    phase_set: object
    ris_model: RectennaModel
    eh_model: RectennaModel
    p_ris_rf_w: float
    p_ris_var_w: float


def make_context(cfg: SimConfig, sigma2: float | None) -> RunContext:
    cfg.validate()
    if cfg.scheme == "benchmark":
        codebook = build_benchmark_codebook(cfg.k_slots, cfg.l_slots)
    else:
        codebook = build_codebook(cfg.k_slots, cfg.l_slots, cfg.codebook_strategy)
    return RunContext(
        cfg=cfg,
        sigma2=sigma2,
        channel_model=build_channel_model(cfg),
        codebook=codebook,
        constellation=build_constellation(cfg.m_order, cfg.constellation),
        phase_set=phase_set_2bit(),
        ris_model=ris_rectenna(cfg),
        eh_model=eh_rectenna(cfg),
        p_ris_rf_w=ris_power_consumption(power_budget(cfg, TECH_RF_SWITCH)),
        p_ris_var_w=ris_power_consumption(power_budget(cfg, TECH_VARACTOR)),
    )


@dataclass
class BlockRecord:
    """Outcome of one block trial. Error counters stay zero when the trial
    runs harvest-only (no detection)."""

    ptx_errors: int
    ptx_bits: int
    index_errors: int
    index_bits: int
    ris_errors: int
    ris_bits: int
    dc_ris_w: float
    dc_eh_w: float
    ok_rf: bool
    ok_var: bool


def run_block_trial(ctx: RunContext, trial_index: int) -> BlockRecord:
    """Draw channels and bits, transmit one block, harvest, and (when a
    noise variance is set) detect and count bit errors."""
    cfg = ctx.cfg
    rng = trial_rng(cfg.seed, trial_index)
    channel = ctx.channel_model.realize(rng)

    bps = ctx.constellation.bits_per_symbol
    eta = ctx.codebook.bits_index + cfg.l_slots * bps
    bits = rng.integers(0, 2, size=eta)
    ris_bit = int(rng.integers(0, 2))

    frame = encode_block(
        bits, ctx.codebook, ctx.constellation, cfg.p_low_w, cfg.p_high_w, cfg.omega_phase_rad
    )
    ris = make_ris_state(channel, ctx.phase_set, ris_bit)

    # Rectenna input at the surface: coherent sum over the absorbing group.
    g2 = channel.h_r[channel.group_slice(1)]
    q_ris = np.abs(np.sum(g2)) ** 2 * np.abs(frame.samples) ** 2
    dc_ris = float(np.mean(clc_dc_power(q_ris, ctx.ris_model)))

    # Rectenna input at the harvester: direct plus reflected path.
    e_info = channel.h_e + channel.v_casc @ ris.reflection(STAGE_INFO)
    e_power = channel.h_e + channel.v_casc @ ris.reflection(STAGE_POWER)
    eps = np.where(frame.tau == 1, e_info, e_power) * frame.samples
    dc_eh = float(np.mean(clc_dc_power(np.abs(eps) ** 2, ctx.eh_model)))

    record = BlockRecord(
        ptx_errors=0,
        ptx_bits=0,
        index_errors=0,
        index_bits=0,
        ris_errors=0,
        ris_bits=0,
        dc_ris_w=dc_ris,
        dc_eh_w=dc_eh,
        ok_rf=dc_ris >= ctx.p_ris_rf_w,
        ok_var=dc_ris >= ctx.p_ris_var_w,
    )
    if ctx.sigma2 is None:
        return record

    obs = observe(channel, frame, ris, ctx.sigma2, rng)
    detect = ml_joint_detect if cfg.detector == "ml" else llr_detect
    det = detect(
        obs,
        ctx.codebook,
        ctx.constellation,
        ctx.phase_set.phi_info,
        frame.omega,
        ctx.phase_set,
        cfg.p_low_w,
        cfg.paper_compat,
    )
    eta_r = ctx.codebook.bits_index
    record.ptx_errors = int(np.sum(det.ptx_bits != bits))
    record.ptx_bits = eta
    record.index_errors = int(np.sum(det.ptx_bits[:eta_r] != bits[:eta_r]))
    record.index_bits = eta_r
    record.ris_errors = int(det.ris_bit != ris_bit)
    record.ris_bits = 1
    return record


def _trial_star(ctx: RunContext, trial_index: int) -> BlockRecord:
    return run_block_trial(ctx, trial_index)


def _map_trials(ctx: RunContext, n_trials: int, workers: int) -> list:
    if workers <= 1:
        return [run_block_trial(ctx, i) for i in range(n_trials)]
    chunk = max(1, math.ceil(n_trials / (workers * 4)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_trial_star, repeat(ctx), range(n_trials), chunksize=chunk))


# ---------------------------------------------------------------------------
# Aggregation and result tables

CSV_COLUMNS = (
    "scheme",
    "k_slots",
    "l_slots",
    "m_order",
    "detector",
    "snr_db",
    "n2",
    "ber_ptx",
    "se_ber_ptx",
    "ber_index",
    "se_ber_index",
    "ber_ris",
    "se_ber_ris",
    "avg_dc_ris_uw",
    "avg_dc_eh_uw",
    "standalone_frac",
    "standalone_frac_rf",
    "standalone_frac_var",
    "trials",
    "seed",
)


@dataclass
class ResultRow:
    scheme: str
    k_slots: int
    l_slots: int
    m_order: int
    detector: str
    snr_db: float | None
    n2: int
    ber_ptx: float | None
    se_ber_ptx: float | None
    ber_index: float | None
    se_ber_index: float | None
    ber_ris: float | None
    se_ber_ris: float | None
    avg_dc_ris_uw: float
    avg_dc_eh_uw: float
    standalone_frac: float
    standalone_frac_rf: float
    standalone_frac_var: float
    trials: int
    seed: int


def _ber_and_se(errors, totals):
    """Pooled BER and its standard error from per-block error fractions."""
    totals = np.asarray(totals, dtype=float)
    if totals.sum() == 0:
        return None, None
    fractions = np.asarray(errors, dtype=float) / totals
    ber = float(np.asarray(errors, dtype=float).sum() / totals.sum())
    n = len(fractions)
    se = float(np.std(fractions, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return ber, se


def _aggregate(cfg: SimConfig, records, snr_db, n2) -> ResultRow:
    ber_ptx, se_ptx = _ber_and_se(
        [r.ptx_errors for r in records], [r.ptx_bits for r in records]
    )
    ber_idx, se_idx = _ber_and_se(
        [r.index_errors for r in records], [r.index_bits for r in records]
    )
    ber_ris, se_ris = _ber_and_se(
        [r.ris_errors for r in records], [r.ris_bits for r in records]
    )
    frac_rf = float(np.mean([r.ok_rf for r in records]))
    frac_var = float(np.mean([r.ok_var for r in records]))
    return ResultRow(
        scheme=cfg.scheme,
        k_slots=cfg.k_slots,
        l_slots=cfg.l_slots,
        m_order=cfg.m_order,
        detector=cfg.detector,
        snr_db=snr_db,
        n2=n2,
        ber_ptx=ber_ptx,
        se_ber_ptx=se_ptx,
        ber_index=ber_idx,
        se_ber_index=se_idx,
        ber_ris=ber_ris,
        se_ber_ris=se_ris,
        avg_dc_ris_uw=float(np.mean([r.dc_ris_w for r in records]) * 1e6),
        avg_dc_eh_uw=float(np.mean([r.dc_eh_w for r in records]) * 1e6),
        standalone_frac=frac_rf if cfg.technology == TECH_RF_SWITCH else frac_var,
        standalone_frac_rf=frac_rf,
        standalone_frac_var=frac_var,
        trials=len(records),
        seed=cfg.seed,
    )


@dataclass
class ResultTable:
    rows: list
    config_digest: str
    seed: int

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(f"# config_hash={self.config_digest} seed={self.seed}\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for row in self.rows:
                writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


# ---------------------------------------------------------------------------
# Sweeps and reports

def ber_sweep(cfg: SimConfig, workers: int = 1) -> ResultTable:
    """BER and harvest statistics over the configured SNR grid, one row per
    grid point; trials are paired across points through shared streams."""
    cfg.validate()
    rows = []
    for snr_db in cfg.snr_db_grid:
        ctx = make_context(cfg, direct_snr_sigma2(cfg, snr_db))
        records = _map_trials(ctx, cfg.trials, workers)
        rows.append(_aggregate(cfg, records, snr_db=float(snr_db), n2=cfg.n2))
    return ResultTable(rows=rows, config_digest=config_hash(cfg), seed=cfg.seed)


def benchmark_mode(cfg: SimConfig, workers: int = 1) -> ResultTable:
    """BER sweep for the fixed-slot reference scheme (no index modulation):
    the first L slots always carry information, conveying L*log2(M) bits."""
    return ber_sweep(replace(cfg, scheme="benchmark"), workers)


@dataclass
class HarvestReport:
    table: ResultTable
    p_ris_rf_w: float
    p_ris_varactor_w: float
    min_n2_rf: int | None
    min_n2_varactor: int | None


def default_n2_grid(cfg: SimConfig) -> tuple:
    top = cfg.n_cells - cfg.n1
    return tuple(range(0, top + 1, 16))


def harvest_sweep(cfg: SimConfig, n2_grid=None, workers: int = 1) -> HarvestReport:
    """Average harvested DC power at the surface and the harvester versus the
    absorber count, plus the smallest grid point whose blocks meet the
    standalone condition (majority vote) for each cell technology."""
    if n2_grid is None:
        n2_grid = default_n2_grid(cfg)
    n2_grid = tuple(int(v) for v in n2_grid)
    for n2 in n2_grid:
        if not 0 <= n2 <= cfg.n_cells - cfg.n1:
            raise ValueError(f"absorber count {n2} incompatible with the cell split")

    rows = []
    min_rf = min_var = None
    for n2 in n2_grid:
        point_cfg = replace(cfg, n2=n2)
        ctx = make_context(point_cfg, None)
        records = _map_trials(ctx, cfg.trials, workers)
        row = _aggregate(point_cfg, records, snr_db=None, n2=n2)
        rows.append(row)
        if min_rf is None and row.standalone_frac_rf >= 0.5:
            min_rf = n2
        if min_var is None and row.standalone_frac_var >= 0.5:
            min_var = n2
    table = ResultTable(rows=rows, config_digest=config_hash(cfg), seed=cfg.seed)
    return HarvestReport(
        table=table,
        p_ris_rf_w=ris_power_consumption(power_budget(cfg, TECH_RF_SWITCH)),
        p_ris_varactor_w=ris_power_consumption(power_budget(cfg, TECH_VARACTOR)),
        min_n2_rf=min_rf,
        min_n2_varactor=min_var,
    )


@dataclass
class PowerBudgetReport:
    p_ris_rf_w: float
    p_ris_varactor_w: float
    ratio_db: float
    n2: int
    blocks: int
    avg_dc_ris_uw: float
    margin_rf_w: float
    margin_varactor_w: float
    standalone_frac_rf: float
    standalone_frac_var: float


def power_budget_report(cfg: SimConfig) -> PowerBudgetReport:
    """Deterministic consumption figures for both cell technologies and the
    harvest margin at the configured absorber count (fixed-seed blocks)."""
    p_rf = ris_power_consumption(power_budget(cfg, TECH_RF_SWITCH))
    p_var = ris_power_consumption(power_budget(cfg, TECH_VARACTOR))
    ctx = make_context(cfg, None)
    records = _map_trials(ctx, cfg.trials, workers=1)
    avg_dc = float(np.mean([r.dc_ris_w for r in records]))
    return PowerBudgetReport(
        p_ris_rf_w=p_rf,
        p_ris_varactor_w=p_var,
        ratio_db=10.0 * math.log10(p_var / p_rf),
        n2=cfg.n2,
        blocks=len(records),
        avg_dc_ris_uw=avg_dc * 1e6,
        margin_rf_w=avg_dc - p_rf,
        margin_varactor_w=avg_dc - p_var,
        standalone_frac_rf=float(np.mean([r.ok_rf for r in records])),
        standalone_frac_var=float(np.mean([r.ok_var for r in records])),
    )
