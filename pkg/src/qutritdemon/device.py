"""Device description: qutrit levels, swap couplings, baths and presets.

The two qutrits live on the ordered product basis |ij> = |i>_1 (x) |j>_2 with
flat index n = 3*i + j (i, j in {0, 1, 2}).  Every 9x9 operator in the package
uses this ordering.  Bath attachment is structural: A and L couple to qutrit 1,
B and R to qutrit 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DIM = 9  # two-qutrit product space

RESERVOIRS = ("A", "B", "L", "R")
RESERVOIR_QUTRIT = {"A": 1, "L": 1, "B": 2, "R": 2}

#: level pairs exchanged by the three swap terms, in (lam02, lam01, lam12) order
SWAP_PAIRS = ((0, 2), (0, 1), (1, 2))

PRESET_TAGS = ("S02", "S01", "A02")

#: matching tolerance (GHz) shared by perfect filters and channel grouping
FREQ_MATCH_TOL = 1e-9


def basis_index(i: int, j: int) -> int:
    """Flat index of the product state |ij>."""
    return 3 * i + j


def _lorentzian(omega: float, center: float, width: float) -> float:
    return width**2 / ((omega - center) ** 2 + width**2)


@dataclass(frozen=True)
class QutritLevels:
    """Level energies (GHz) of one qutrit; the ground energy is pinned to 0."""

    e1: float
    e2: float
    e0: float = 0.0

    def __post_init__(self):
        energies = (self.e0, self.e1, self.e2)
        for a in range(3):
            for b in range(a + 1, 3):
                if abs(energies[a] - energies[b]) <= FREQ_MATCH_TOL:
                    raise ValueError(
                        f"qutrit levels must be pairwise distinct, got {energies}"
                    )

    @property
    def energies(self) -> np.ndarray:
        return np.array([self.e0, self.e1, self.e2], dtype=float)

    def gap(self, j: int, k: int) -> float:
        """Signed transition energy E_j - E_k."""
        e = (self.e0, self.e1, self.e2)
        return e[j] - e[k]


@dataclass(frozen=True)
class SwapCouplings:
    """Exchange couplings lam_ab |ab><ba| + h.c. between the qutrits (GHz).

    When ``resonance_width`` (z_c) is set, the couplings are mediated by a
    Lorentzian resonance of that width centered at ``resonance_center``: the
    single nonzero base coupling sets the amplitude and each swap term is
    weighted by the Lorentzian evaluated at the energy it exchanges.
    """

    lam02: float = 0.0
    lam01: float = 0.0
    lam12: float = 0.0
    resonance_center: float | None = None
    resonance_width: float | None = None

    def __post_init__(self):
        for name in ("lam02", "lam01", "lam12"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.resonance_width is not None:
            if self.resonance_width <= 0:
                raise ValueError("resonance width z_c must be > 0 when set")
            if self.resonance_center is None:
                raise ValueError("resonance center required when z_c is set")
            if sum(1 for v in (self.lam02, self.lam01, self.lam12) if v > 0) > 1:
                raise ValueError(
                    "broadened swap coupling needs a single base amplitude; "
                    "set only the dominant lam and let the resonance generate "
                    "the others"
                )

    def effective(self, swap_frequencies: tuple[float, float, float]) -> tuple[float, float, float]:
        """Effective (lam02, lam01, lam12) given the energy each swap exchanges."""
        base = (self.lam02, self.lam01, self.lam12)
        if self.resonance_width is None:
            return base
        amplitude = max(base)
        return tuple(
            amplitude * _lorentzian(w, self.resonance_center, self.resonance_width)
            for w in swap_frequencies
        )


@dataclass(frozen=True)
class Reservoir:
    """One thermal bath: temperature, coupling strength and its filter (GHz)."""

    name: str
    temperature: float
    gamma: float
    filter_center: float
    filter_width: float | None = None  # None = perfect (delta-like) filter

    def __post_init__(self):
        if self.name not in RESERVOIRS:
            raise ValueError(f"unknown reservoir {self.name!r}")
        if self.temperature <= 0:
            raise ValueError(f"T_{self.name} = {self.temperature} must be > 0")
        if self.gamma < 0:
            raise ValueError(f"Gamma_{self.name} must be >= 0")
        if self.filter_center <= 0:
            raise ValueError(f"filter center of {self.name} must be > 0")
        if self.filter_width is not None and self.filter_width <= 0:
            raise ValueError("filter width z_r must be > 0 when set")

    @property
    def qutrit(self) -> int:
        return RESERVOIR_QUTRIT[self.name]


@dataclass(frozen=True)
class DeviceSpec:
    """Full physical configuration of the coupled-qutrit four-bath device."""

    qutrit1: QutritLevels
    qutrit2: QutritLevels
    swaps: SwapCouplings
    reservoirs: tuple[Reservoir, Reservoir, Reservoir, Reservoir]
    preset: str = "custom"
    t_ref: float = field(default=0.0)

    def __post_init__(self):
        names = tuple(r.name for r in self.reservoirs)
        if sorted(names) != sorted(RESERVOIRS):
            raise ValueError(f"need exactly one reservoir each of A, B, L, R, got {names}")
        if names != RESERVOIRS:
            ordered = tuple(self.reservoir(n) for n in RESERVOIRS)
            object.__setattr__(self, "reservoirs", ordered)
        if self.t_ref <= 0:
            # default reference temperature: mean of the system pair
            t0 = 0.5 * (self.reservoir("L").temperature + self.reservoir("R").temperature)
            object.__setattr__(self, "t_ref", t0)

    def reservoir(self, name: str) -> Reservoir:
        for r in self.reservoirs:
            if r.name == name:
                return r
        raise KeyError(name)

    def levels(self, qutrit: int) -> QutritLevels:
        return self.qutrit1 if qutrit == 1 else self.qutrit2

    @property
    def delta_t_system(self) -> float:
        """T_L - T_R."""
        return self.reservoir("L").temperature - self.reservoir("R").temperature

    @property
    def delta_t_demon(self) -> float:
        """T_B - T_A."""
        return self.reservoir("B").temperature - self.reservoir("A").temperature

    def swap_frequencies(self) -> tuple[float, float, float]:
        """Energy exchanged by each swap term, in (lam02, lam01, lam12) order.

        For identical qutrits this is the single-qutrit gap of the swapped
        pair; if the two gaps differ (opposite-anharmonicity layouts) the mean
        is used, which only matters for broadened swap resonances.
        """
        freqs = []
        for a, b in SWAP_PAIRS:
            g1 = abs(self.qutrit1.gap(b, a))
            g2 = abs(self.qutrit2.gap(b, a))
            freqs.append(0.5 * (g1 + g2))
        return tuple(freqs)

    def effective_swaps(self) -> tuple[float, float, float]:
        return self.swaps.effective(self.swap_frequencies())


def build_hamiltonian(spec: DeviceSpec) -> np.ndarray:
    """Device Hamiltonian: on-site level energies plus the three swap terms."""
    h = np.zeros((DIM, DIM), dtype=complex)
    e1 = spec.qutrit1.energies
    e2 = spec.qutrit2.energies
    for i in range(3):
        for j in range(3):
            h[basis_index(i, j), basis_index(i, j)] = e1[i] + e2[j]
    lams = spec.effective_swaps()
    for lam, (a, b) in zip(lams, SWAP_PAIRS):
        if lam == 0.0:
            continue
        # lam |ba><ab| + h.c. transfers the excitation between the qutrits
        m = basis_index(b, a)
        n = basis_index(a, b)
        h[m, n] += lam
        h[n, m] += lam
    return h


@dataclass(frozen=True)
class JumpOperator:
    """Single-qutrit transition |j><k| embedded in the product space."""

    reservoir: str
    levels: tuple[int, int]  # (j, k): transition |k> -> |j>
    frequency: float  # signed E_j - E_k on the attached qutrit
    matrix: np.ndarray

    def __hash__(self):  # matrix excluded; identity is (reservoir, levels)
        return hash((self.reservoir, self.levels))


def _embed(qutrit: int, op3: np.ndarray) -> np.ndarray:
    eye = np.eye(3)
    if qutrit == 1:
        return np.kron(op3, eye)
    return np.kron(eye, op3)


def jump_operators(spec: DeviceSpec, reservoir: str | None = None) -> list[JumpOperator]:
    """All transition operators each reservoir can drive on its qutrit.

    Every ordered level pair j != k is emitted; which of them carry weight is
    decided later by the golden-rule rates and the bath filters.
    """
    names = (reservoir,) if reservoir is not None else RESERVOIRS
    ops = []
    for name in names:
        q = RESERVOIR_QUTRIT[name]
        levels = spec.levels(q)
        for j in range(3):
            for k in range(3):
                if j == k:
                    continue
                op3 = np.zeros((3, 3), dtype=complex)
                op3[j, k] = 1.0
                ops.append(
                    JumpOperator(
                        reservoir=name,
                        levels=(j, k),
                        frequency=levels.gap(j, k),
                        matrix=_embed(q, op3),
                    )
                )
    return ops


def preset(
    tag: str,
    *,
    T: float = 4.0,
    dTs: float = 0.0,
    dTd: float = 0.0,
    gamma: float = 0.01,
    lam: float = 0.01,
    omega_s: float = 2.0,
    omega_d: float | None = None,
    z_r: float | None = None,
    z_c: float | None = None,
    t_ref: float | None = None,
) -> DeviceSpec:
    """Build one of the named device configurations.

    S02: identical qutrits (0, w_d, w_d+w_s); demon baths drive the 0-1 gap at
    w_d, system baths the 1-2 gap at w_s; dominant swap |20><02|.
    S01: identical qutrits (0, w_d-w_s, w_d); demon baths drive the 0-2 gap at
    w_d (default 6), system baths the 1-2 gap; dominant swap |10><01|.
    A02: qutrit 1 as in S02, qutrit 2 with inverted gap order (0, w_s, w_s+w_d)
    so R drives its 0-1 gap at w_s and B its 1-2 gap at w_d; dominant |20><02|.

    Temperatures: T_L/R = T +/- dTs/2 and T_A/B = T -/+ dTd/2.
    """
    if tag not in PRESET_TAGS:
        raise ValueError(f"unknown preset {tag!r}; expected one of {PRESET_TAGS}")
    if omega_d is None:
        omega_d = 6.0 if tag == "S01" else 4.0
    if omega_s <= 0 or omega_d <= 0:
        raise ValueError("filter frequencies must be > 0")

    t_L = T + dTs / 2
    t_R = T - dTs / 2
    t_A = T - dTd / 2
    t_B = T + dTd / 2
    for name, t in (("A", t_A), ("B", t_B), ("L", t_L), ("R", t_R)):
        if t <= 0:
            raise ValueError(f"T_{name} = {t:g} <= 0 (T={T:g}, dTs={dTs:g}, dTd={dTd:g})")

    if tag == "S02":
        q1 = q2 = QutritLevels(e1=omega_d, e2=omega_d + omega_s)
        swaps = SwapCouplings(
            lam02=lam,
            resonance_center=omega_s + omega_d if z_c is not None else None,
            resonance_width=z_c,
        )
    elif tag == "S01":
        if omega_d <= omega_s:
            raise ValueError("S01 needs omega_d > omega_s")
        q1 = q2 = QutritLevels(e1=omega_d - omega_s, e2=omega_d)
        swaps = SwapCouplings(
            lam01=lam,
            resonance_center=omega_d - omega_s if z_c is not None else None,
            resonance_width=z_c,
        )
    else:  # A02
        q1 = QutritLevels(e1=omega_d, e2=omega_d + omega_s)
        q2 = QutritLevels(e1=omega_s, e2=omega_s + omega_d)
        swaps = SwapCouplings(
            lam02=lam,
            resonance_center=omega_s + omega_d if z_c is not None else None,
            resonance_width=z_c,
        )

    reservoirs = (
        Reservoir("A", t_A, gamma, omega_d, z_r),
        Reservoir("B", t_B, gamma, omega_d, z_r),
        Reservoir("L", t_L, gamma, omega_s, z_r),
        Reservoir("R", t_R, gamma, omega_s, z_r),
    )
    return DeviceSpec(
        qutrit1=q1,
        qutrit2=q2,
        swaps=swaps,
        reservoirs=reservoirs,
        preset=tag,
        t_ref=t_ref if t_ref is not None else T,
    )
