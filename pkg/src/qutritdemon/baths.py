"""Bose-Einstein occupations, Lorentzian filters and golden-rule rates."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .device import FREQ_MATCH_TOL, RESERVOIRS, DeviceSpec, _lorentzian


def bose_einstein(omega: float, temperature: float) -> float:
    """Thermal occupation 1/(exp(omega/T) - 1) for omega, T > 0."""
    if omega <= 0:
        raise ValueError(f"bose_einstein needs omega > 0, got {omega}")
    if temperature <= 0:
        raise ValueError(f"bose_einstein needs T > 0, got {temperature}")
    x = omega / temperature
    if x > 700.0:  # expm1 overflows; occupation is indistinguishable from 0
        return 0.0
    return 1.0 / math.expm1(x)


def filter_weight(omega: float, center: float, width: float | None = None) -> float:
    """Coupling weight of a photon at ``omega`` through the bath filter.

    ``width=None`` is the perfect filter: an exact transition whitelist that
    passes only |omega - center| <= 1e-9 GHz.  Otherwise a Lorentzian of
    half-width ``width``.
    """
    if omega <= 0:
        raise ValueError(f"filter_weight needs omega > 0, got {omega}")
    if width is None:
        return 1.0 if abs(omega - center) <= FREQ_MATCH_TOL else 0.0
    return _lorentzian(omega, center, width)


@dataclass(frozen=True)
class RateEntry:
    """Golden-rule rate of one (reservoir, transition) pair.

    ``direction`` is +1 when the reservoir emits a photon (the system absorbs)
    and -1 when it absorbs; ``frequency`` is the positive photon frequency.
    """

    reservoir: str
    levels: tuple[int, int]  # (j, k): system transition |k> -> |j>
    direction: int
    frequency: float
    rate: float


def transition_rate(spec: DeviceSpec, reservoir: str, j: int, k: int) -> RateEntry:
    """Rate of the transition |k> -> |j> on the qutrit attached to ``reservoir``.

    Upward transitions (E_j > E_k) draw a photon from the bath at occupation
    n(omega); downward ones release one with weight 1 + n(omega).  Both carry
    the same filter weight, so each pair obeys detailed balance.
    """
    res = spec.reservoir(reservoir)
    omega = spec.levels(res.qutrit).gap(j, k)
    if abs(omega) <= FREQ_MATCH_TOL:
        raise ValueError(
            f"degenerate transition ({j},{k}) on qutrit {res.qutrit}: omega = {omega:g}"
        )
    zeta = filter_weight(abs(omega), res.filter_center, res.filter_width)
    if omega > 0:
        direction = +1
        occupation = bose_einstein(omega, res.temperature)
    else:
        direction = -1
        occupation = 1.0 + bose_einstein(-omega, res.temperature)
    return RateEntry(
        reservoir=reservoir,
        levels=(j, k),
        direction=direction,
        frequency=abs(omega),
        rate=res.gamma * zeta * occupation,
    )


def rate_table(spec: DeviceSpec) -> list[RateEntry]:
    """All nonzero golden-rule rates of the device, reservoir by reservoir."""
    entries = []
    for name in RESERVOIRS:
        for j in range(3):
            for k in range(3):
                if j == k:
                    continue
                entry = transition_rate(spec, name, j, k)
                if entry.rate > 0.0:
                    entries.append(entry)
    return entries


def warn_if_strong_coupling(spec: DeviceSpec) -> None:
    """Warn when a swap coupling exceeds the bath rates the local generator assumes."""
    lams = spec.effective_swaps()
    gammas = [r.gamma for r in spec.reservoirs if r.gamma > 0]
    if not gammas:
        return
    if max(lams) > min(gammas):
        warnings.warn(
            f"swap coupling {max(lams):g} GHz exceeds the weakest bath coupling "
            f"{min(gammas):g} GHz; the local generator is uncontrolled here",
            stacklevel=3,
        )
