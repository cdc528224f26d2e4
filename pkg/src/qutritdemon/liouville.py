"""GKSL generator, counting channels and counting-field dressing.

Operators are vectorized column-major: vec(X)[9n + m] = X[m, n], so the map
X -> A X B becomes kron(B.T, A).  The generator is local: dissipators are
built from bare single-qutrit jump operators while the coherent part keeps
the full device Hamiltonian including the swap terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .baths import RateEntry, rate_table, warn_if_strong_coupling
from .device import DIM, FREQ_MATCH_TOL, RESERVOIRS, DeviceSpec, JumpOperator, build_hamiltonian, jump_operators

LDIM = DIM * DIM  # 81


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(DIM, DIM, order="F")


def left_mult(a: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(DIM), a)


def right_mult(b: np.ndarray) -> np.ndarray:
    return np.kron(b.T, np.eye(DIM))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of X -> A X B."""
    return np.kron(b.T, a)


def trace_vector() -> np.ndarray:
    """Row vector t with t @ vec(X) = Tr X."""
    return vec(np.eye(DIM)).astype(complex)


@dataclass(frozen=True)
class CountingChannel:
    """Photon-number statistics label: reservoir and positive frequency (GHz)."""

    reservoir: str
    frequency: float

    def matches(self, entry: RateEntry) -> bool:
        return entry.reservoir == self.reservoir and abs(entry.frequency - self.frequency) <= FREQ_MATCH_TOL


@dataclass(frozen=True)
class _Assembly:
    """Everything derived from one DeviceSpec that the solvers reuse."""

    spec: DeviceSpec
    hamiltonian: np.ndarray
    rates: tuple[RateEntry, ...]
    channels: tuple[CountingChannel, ...]
    coherent: np.ndarray  # -i [H, .]
    decay: np.ndarray  # -1/2 {Y+Y, .} summed over all rate entries
    jumps: dict  # (channel index, direction) -> sandwich superoperator
    generator: np.ndarray  # coherent + decay + sum of jumps
    trace_defect: np.ndarray  # exact column trace sums of the stored generator

    def channel_index(self, reservoir: str, frequency: float) -> int:
        for i, c in enumerate(self.channels):
            if c.reservoir == reservoir and abs(c.frequency - frequency) <= FREQ_MATCH_TOL:
                return i
        raise KeyError(f"no counting channel ({reservoir}, {frequency:g} GHz)")

    def jump(self, index: int, direction: int) -> np.ndarray:
        return self.jumps.get((index, direction), np.zeros((LDIM, LDIM), dtype=complex))

    def current_op(self, index: int) -> np.ndarray:
        return self.jump(index, +1) - self.jump(index, -1)

    def activity_op(self, index: int) -> np.ndarray:
        return self.jump(index, +1) + self.jump(index, -1)


def _group_channels(rates: tuple[RateEntry, ...]) -> tuple[CountingChannel, ...]:
    channels = []
    for name in RESERVOIRS:
        freqs: list[float] = []
        for entry in rates:
            if entry.reservoir != name:
                continue
            if not any(abs(entry.frequency - f) <= FREQ_MATCH_TOL for f in freqs):
                freqs.append(entry.frequency)
        channels.extend(CountingChannel(name, f) for f in sorted(freqs))
    return tuple(channels)


def _exact_column_sums(rows: np.ndarray) -> np.ndarray:
    """Trace-row times matrix with exactly rounded 9-term sums.

    The columns of the generator cancel to ~1e-16 of the matrix norm; summing
    with compensation keeps the defect row exact so that downstream eigenvalue
    refinements see the stored matrix, not summation noise.
    """
    out = np.empty(rows.shape[1], dtype=complex)
    for col in range(rows.shape[1]):
        column = rows[:, col]
        out[col] = complex(math.fsum(column.real), math.fsum(column.imag))
    return out


@lru_cache(maxsize=16)
def _assembly(spec: DeviceSpec) -> _Assembly:
    warn_if_strong_coupling(spec)
    h = build_hamiltonian(spec)
    rates = tuple(rate_table(spec))
    channels = _group_channels(rates)
    ops = {(op.reservoir, op.levels): op for op in jump_operators(spec)}

    coherent = -1j * (left_mult(h) - right_mult(h))
    decay = np.zeros((LDIM, LDIM), dtype=complex)
    jumps: dict[tuple[int, int], np.ndarray] = {}
    for entry in rates:
        y = ops[(entry.reservoir, entry.levels)].matrix
        ydy = y.conj().T @ y
        decay -= 0.5 * entry.rate * (left_mult(ydy) + right_mult(ydy))
        for i, channel in enumerate(channels):
            if channel.matches(entry):
                key = (i, entry.direction)
                term = entry.rate * sandwich(y, y.conj().T)
                if key in jumps:
                    jumps[key] = jumps[key] + term
                else:
                    jumps[key] = term
                break
        else:
            raise RuntimeError(f"rate entry {entry} matches no channel")

    generator = coherent + decay
    for term in jumps.values():
        generator = generator + term
    # trace-row defect: exact sums over the 9 diagonal-position rows
    diag_rows = generator[[(DIM + 1) * m for m in range(DIM)], :]
    defect = _exact_column_sums(diag_rows)
    return _Assembly(
        spec=spec,
        hamiltonian=h,
        rates=rates,
        channels=channels,
        coherent=coherent,
        decay=decay,
        jumps=jumps,
        generator=generator,
        trace_defect=defect,
    )


def counting_channels(spec: DeviceSpec) -> tuple[CountingChannel, ...]:
    """Deduplicated (reservoir, frequency) channels carrying nonzero rates."""
    return _assembly(spec).channels


def liouvillian(spec: DeviceSpec) -> np.ndarray:
    """The 81x81 GKSL generator of the device."""
    return _assembly(spec).generator.copy()


def jump_superoperator(spec: DeviceSpec, reservoir: str, frequency: float, direction: int) -> np.ndarray:
    """Sandwich part of the generator for one channel and photon direction.

    ``direction=+1`` collects the transitions where the reservoir emits a
    photon of the channel frequency (the system absorbs), ``direction=-1``
    those where it absorbs one.
    """
    if direction not in (+1, -1):
        raise ValueError("direction must be +1 or -1")
    asm = _assembly(spec)
    return asm.jump(asm.channel_index(reservoir, frequency), direction).copy()


def current_superoperator(spec: DeviceSpec, reservoir: str, frequency: float, sign: int = -1) -> np.ndarray:
    """Current (sign=-1) or activity (sign=+1) superoperator of a channel.

    The current operator counts net photons emitted by the reservoir into the
    system as positive; its stationary expectation is the channel particle
    current.  The activity operator enters the noise formula.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    asm = _assembly(spec)
    i = asm.channel_index(reservoir, frequency)
    return (asm.current_op(i) if sign == -1 else asm.activity_op(i)).copy()


def dressed_liouvillian(spec: DeviceSpec, chi: np.ndarray) -> np.ndarray:
    """Counting-field dressed generator L + sum_s (e^{s i chi_c} - 1) J_c^s.

    ``chi`` holds one counting field per channel, ordered as
    ``counting_channels(spec)``; imaginary values tilt the generator along the
    real axis and are what the cumulant oracle uses.
    """
    asm = _assembly(spec)
    chi = np.asarray(chi, dtype=complex)
    if chi.shape != (len(asm.channels),):
        raise ValueError(
            f"chi must have one entry per channel ({len(asm.channels)}), got shape {chi.shape}"
        )
    out = asm.generator.copy()
    for (index, direction), term in asm.jumps.items():
        phase = np.exp(1j * direction * chi[index]) - 1.0
        if phase != 0.0:
            out += phase * term
    return out
