"""Heat currents, noise, efficiencies, bounds and operation classification.

Sign convention throughout: a positive heat current means heat flows out of
the reservoir into the qutrits, so the total entropy production rate is
Sigma = -sum_l Qdot_l / T_l >= 0 and a positive Qdot_R is cooling power on R.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .device import RESERVOIRS, DeviceSpec
from .fcs import CountingMoments, counting_moments

#: reservoir ordering of every 4x4 heat-noise matrix
RESERVOIR_ORDER = RESERVOIRS

#: |Qdot_R| below this (in hbar GHz^2) counts as "no current" for sentinels
CURRENT_FLOOR = 1e-12

#: denominator floor for the efficiency and TUR sentinels
DENOMINATOR_FLOOR = 1e-14

#: demon-condition residual, relative to |Qdot_R|, for the strict classification
STRICT_RESIDUAL_RTOL = 1e-12

#: absolute floor (hbar GHz^2) on the strict residual test; the stationary
#: solve leaves ~1e-13 of numerical leakage even when the condition is exact
STRICT_RESIDUAL_ATOL = 1e-11


def heat_transport(moments: CountingMoments, spec: DeviceSpec) -> tuple[dict, np.ndarray]:
    """Per-reservoir heat currents and the 4x4 symmetric heat-noise matrix.

    Heat weighs every channel by its photon frequency: Qdot_l = sum_a w_a I_la
    and S_ll' = sum_ab w_a w_b S^N_la,l'b (ordering ``RESERVOIR_ORDER``).
    """
    channels = moments.channels
    qdot = {name: 0.0 for name in RESERVOIR_ORDER}
    for c, current in zip(channels, moments.currents):
        qdot[c.reservoir] += c.frequency * current
    noise = np.zeros((4, 4))
    pos = {name: i for i, name in enumerate(RESERVOIR_ORDER)}
    for a, ca in enumerate(channels):
        for b, cb in enumerate(channels):
            noise[pos[ca.reservoir], pos[cb.reservoir]] += (
                ca.frequency * cb.frequency * moments.correlators[a, b]
            )
    return qdot, noise


@dataclass(frozen=True)
class PartitionCurrents:
    """Heat flows across the system/demon and interqutrit partitions."""

    q_system: float  # Qdot_s = Qdot_R
    q_demon: float  # Qdot_d = Qdot_B
    q_internal: float  # Qdot_c = Qdot_R + Qdot_B
    residual_system: float  # |Qdot_L + Qdot_R|
    residual_demon: float  # |Qdot_A + Qdot_B|


def partition_currents(qdot: dict) -> PartitionCurrents:
    """Partition currents plus the demon-condition leakage residuals."""
    return PartitionCurrents(
        q_system=qdot["R"],
        q_demon=qdot["B"],
        q_internal=qdot["R"] + qdot["B"],
        residual_system=abs(qdot["L"] + qdot["R"]),
        residual_demon=abs(qdot["A"] + qdot["B"]),
    )


@dataclass(frozen=True)
class EntropyEfficiency:
    sigma_total: float
    sigma_system: float
    sigma_demon: float
    eta_f: float
    eta_h: float
    eta_ab: float
    eta0_bound: float


def _safe_ratio(num: float, den: float) -> float:
    """Plain ratio with inf/nan sentinels instead of near-zero blowups."""
    if abs(den) < DENOMINATOR_FLOOR:
        if abs(num) < DENOMINATOR_FLOOR:
            return math.nan
        sign = 1.0 if den >= 0 else -1.0
        return sign * math.copysign(math.inf, num)
    return num / den


def entropy_and_efficiencies(qdot: dict, spec: DeviceSpec) -> EntropyEfficiency:
    """Entropy production rates and the four performance quantifiers.

    The free-energy efficiency eta_f weighs each reservoir by 1 - T0/T_l with
    the reference temperature T0 of the spec; under the demon condition it
    reduces to the entropy-rate ratio and loses its T0 dependence.
    """
    temps = {name: spec.reservoir(name).temperature for name in RESERVOIR_ORDER}
    sigma = {name: -qdot[name] / temps[name] for name in RESERVOIR_ORDER}
    sigma_total = sum(sigma.values())
    sigma_system = sigma["L"] + sigma["R"]
    sigma_demon = sigma["A"] + sigma["B"]

    t0 = spec.t_ref
    fdot = {name: -qdot[name] * (1.0 - t0 / temps[name]) for name in RESERVOIR_ORDER}
    eta_f = _safe_ratio(fdot["L"] + fdot["R"], -fdot["A"] - fdot["B"])
    eta_h = _safe_ratio(qdot["R"], qdot["B"])
    eta_ab = _safe_ratio(qdot["R"], abs(qdot["A"] + qdot["B"]))

    t_L, t_R = temps["L"], temps["R"]
    if abs(t_L - t_R) < DENOMINATOR_FLOOR:
        eta0 = math.nan
    else:
        eta0 = t_R * (t_L - t0) / (t0 * (t_L - t_R))
    return EntropyEfficiency(
        sigma_total=sigma_total,
        sigma_system=sigma_system,
        sigma_demon=sigma_demon,
        eta_f=eta_f,
        eta_h=eta_h,
        eta_ab=eta_ab,
        eta0_bound=eta0,
    )


def tur_pearson(qdot: dict, noise: np.ndarray, sigma_total: float) -> tuple[float, float]:
    """Uncertainty coefficient Q = Sigma S_RR / Qdot_R^2 and Pearson epsilon_P."""
    pos = {name: i for i, name in enumerate(RESERVOIR_ORDER)}
    s_ll = noise[pos["L"], pos["L"]]
    s_rr = noise[pos["R"], pos["R"]]
    s_lr = noise[pos["L"], pos["R"]]
    if s_ll <= 0 or s_rr <= 0:
        raise ValueError(
            f"autocorrelations must be positive, got S_LL={s_ll:.3e}, S_RR={s_rr:.3e}"
        )
    q_r = qdot["R"]
    tur = math.inf if abs(q_r) < DENOMINATOR_FLOOR else sigma_total * s_rr / q_r**2
    pearson = s_lr / math.sqrt(s_ll * s_rr)
    return tur, pearson


def second_law_margin(spec: DeviceSpec) -> float:
    """Entropy budget of the demon cycle direction, per transferred cycle.

    Positive margin w_d (1/T_A - 1/T_B) - w_s (1/T_R - 1/T_L) means the cycle
    that cools R is entropically allowed.  The filter centers supply the photon
    frequencies of the two partitions.
    """
    t = {name: spec.reservoir(name).temperature for name in RESERVOIR_ORDER}
    omega_d = spec.reservoir("A").filter_center
    omega_s = spec.reservoir("L").filter_center
    return omega_d * (1.0 / t["A"] - 1.0 / t["B"]) - omega_s * (1.0 / t["R"] - 1.0 / t["L"])


def reversal_boundary(dTd: float, T: float, omega_s: float, omega_d: float) -> float:
    """System temperature bias at which the cooling power changes sign.

    Closed form of the second-law equality for symmetric biases:
    dTs0 = sqrt(xi^2 + 4 T^2) + xi with xi = (dTd^2 - 4 T^2) w_s / (2 dTd w_d).
    Continuous limit 0 at dTd -> 0; dTd >= 2T would freeze bath A and is
    rejected.
    """
    if dTd < 0:
        raise ValueError("dTd must be >= 0")
    if dTd >= 2 * T:
        raise ValueError(f"dTd = {dTd:g} >= 2T = {2 * T:g} gives T_A <= 0")
    if dTd == 0.0:
        return 0.0
    xi = (dTd**2 - 4 * T**2) * omega_s / (2 * dTd * omega_d)
    return math.sqrt(xi**2 + 4 * T**2) + xi


@dataclass(frozen=True)
class Classification:
    tag: str  # strict-demon | relaxed-demon | nondemon-refrigerator | none
    warm_demon: bool


def classify_operation(
    qdot: dict,
    partition: PartitionCurrents,
    efficiency: EntropyEfficiency,
    spec: DeviceSpec,
    strict_rtol: float = STRICT_RESIDUAL_RTOL,
    strict_atol: float = STRICT_RESIDUAL_ATOL,
    current_floor: float = CURRENT_FLOOR,
) -> Classification:
    """Operation regime of the device from its stationary report.

    Strict demon: cooling with negative system entropy production and a demon
    residual below ``strict_rtol`` relative to the cooling power (or below the
    absolute solver-noise floor ``strict_atol``).  Relaxed demon: cooling
    beyond the single-bath bound eta_AB > eta0.  The warm flag marks demon
    operation with the demon bias below the system bias.
    """
    q_r = qdot["R"]
    if q_r <= current_floor:
        return Classification("none", False)
    demonic = False
    strict_cut = max(strict_rtol * abs(q_r), strict_atol)
    if efficiency.sigma_system < 0 and partition.residual_demon < strict_cut:
        tag = "strict-demon"
        demonic = True
    elif efficiency.eta_ab > efficiency.eta0_bound:  # False when eta0 is nan
        tag = "relaxed-demon"
        demonic = True
    else:
        tag = "nondemon-refrigerator"
    warm = demonic and spec.delta_t_demon < abs(spec.delta_t_system)
    return Classification(tag, warm)


@dataclass(frozen=True)
class TransportReport:
    """Stationary transport summary of one device configuration."""

    heat_currents: dict
    heat_noise: np.ndarray  # 4x4, RESERVOIR_ORDER
    partition: PartitionCurrents
    efficiency: EntropyEfficiency
    tur: float
    pearson: float
    classification: Classification
    margin_second_law: float
    sum_heat_residual: float
    sum_noise_residual: float
    moments: CountingMoments

    def noise_element(self, a: str, b: str) -> float:
        pos = {name: i for i, name in enumerate(RESERVOIR_ORDER)}
        return float(self.heat_noise[pos[a], pos[b]])


def transport_report(spec: DeviceSpec, moments: CountingMoments | None = None) -> TransportReport:
    """Full thermodynamic report for a device configuration."""
    if moments is None:
        moments = counting_moments(spec)
    qdot, noise = heat_transport(moments, spec)
    partition = partition_currents(qdot)
    efficiency = entropy_and_efficiencies(qdot, spec)
    tur, pearson = tur_pearson(qdot, noise, efficiency.sigma_total)
    classification = classify_operation(qdot, partition, efficiency, spec)

    scale_q = max(abs(v) for v in qdot.values())
    scale_s = float(np.max(np.abs(noise)))
    sum_q = abs(sum(qdot.values())) / scale_q if scale_q > 0 else 0.0
    sum_s = abs(float(noise.sum())) / scale_s if scale_s > 0 else 0.0

    return TransportReport(
        heat_currents=qdot,
        heat_noise=noise,
        partition=partition,
        efficiency=efficiency,
        tur=tur,
        pearson=pearson,
        classification=classification,
        margin_second_law=second_law_margin(spec),
        sum_heat_residual=sum_q,
        sum_noise_residual=sum_s,
        moments=moments,
    )
