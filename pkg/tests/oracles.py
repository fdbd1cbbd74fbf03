"""Independent reference implementations used to cross-check the detectors.

These deliberately reimplement the metrics with explicit loops and
numpy-level reductions so they share no code path with the implementations
under test (beyond the fixed group-1 alignment rule, which is configuration,
not a search).
"""

import itertools
import math

import numpy as np

from timsr.ris import STAGE_INFO, STAGE_POWER, align_group1, reflection_vector


def direct_log_sum_exp(values) -> float:
    values = np.asarray(values, dtype=float)
    m = float(values.max())
    if m == -math.inf:
        return -math.inf
    return m + float(np.log(np.sum(np.exp(values - m))))


def _effective(obs, phase_pair, phase_set, group1_phase):
    ch = obs.channel
    eff_info = [
        ch.h_d + ch.f_casc @ reflection_vector(STAGE_INFO, group1_phase, th, phase_set)
        for th in phase_pair
    ]
    eff_power = ch.h_d + ch.f_casc @ reflection_vector(STAGE_POWER, group1_phase, 0.0, phase_set)
    return eff_info, eff_power


def naive_joint_search(obs, codebook, constellation, phase_pair, omega, phase_set, p_info_w):
    """Exhaustive loop minimization in (codeword, phase, symbol-vector) order
    with a strict first-found minimum. Returns (codeword, phase index,
    symbol labels, metric)."""
    g1 = align_group1(obs.channel, phase_pair)
    eff_info, eff_power = _effective(obs, phase_pair, phase_set, g1)
    amp = math.sqrt(p_info_w)
    m = constellation.m_order
    k_slots = codebook.k_slots

    best = None
    best_metric = math.inf
    for cw in codebook.codewords:
        for c in range(len(phase_pair)):
            for labels in itertools.product(range(m), repeat=codebook.l_slots):
                metric = 0.0
                for k in range(k_slots):
                    if (k + 1) in cw:
                        s = amp * constellation.points[labels[cw.index(k + 1)]]
                        metric += float(np.linalg.norm(obs.y[k] - eff_info[c] * s) ** 2)
                    else:
                        metric += float(np.linalg.norm(obs.y[k] - eff_power * omega) ** 2)
                if metric < best_metric:
                    best = (cw, c, labels)
                    best_metric = metric
    return best[0], best[1], best[2], best_metric


def naive_symbol_phase(obs, slots, constellation, phase_pair, p_info_w, phase_set):
    """Full product search over (phase, symbol vector) for fixed slots, in
    (phase, labels) order with a strict first-found minimum."""
    g1 = align_group1(obs.channel, phase_pair)
    eff_info, _ = _effective(obs, phase_pair, phase_set, g1)
    amp = math.sqrt(p_info_w)
    m = constellation.m_order

    best = None
    best_metric = math.inf
    for c in range(len(phase_pair)):
        for labels in itertools.product(range(m), repeat=len(slots)):
            metric = 0.0
            for pos, slot in enumerate(slots):
                s = amp * constellation.points[labels[pos]]
                metric += float(np.linalg.norm(obs.y[slot - 1] - eff_info[c] * s) ** 2)
            if metric < best_metric:
                best = (c, labels)
                best_metric = metric
    return best[0], best[1], best_metric


def direct_llr(obs, constellation, phase_pair, omega, phase_set, k_slots, l_slots, p_info_w):
    """Per-slot LLR recomputed from the raw definition with a vector
    log-sum-exp instead of the pairwise recursion."""
    g1 = align_group1(obs.channel, phase_pair)
    eff_info, eff_power = _effective(obs, phase_pair, phase_set, g1)
    amp = math.sqrt(p_info_w)
    prior = math.log(l_slots**2) - math.log((k_slots - l_slots) ** 2)

    llr = np.empty(k_slots)
    for k in range(k_slots):
        xi = []
        for c in range(len(phase_pair)):
            for i in range(constellation.m_order):
                s = amp * constellation.points[i]
                xi.append(-float(np.linalg.norm(obs.y[k] - eff_info[c] * s) ** 2) / obs.sigma2)
        delta_p = -float(np.linalg.norm(obs.y[k] - eff_power * omega) ** 2) / obs.sigma2
        llr[k] = prior + direct_log_sum_exp(xi) - delta_p
    return llr
