"""Stationary state and zero-frequency counting statistics.

Two independent routes to the same cumulants live here.  The production route
solves the stationary hierarchy: the steady state rho from L rho = 0 with
Tr rho = 1, one perpendicular response Upsilon per channel from
L Upsilon = -(I_c - <I_c>) rho with Tr Upsilon = 0, and the closed formula for
the zero-frequency correlators.  The oracle route differentiates the dominant
eigenvalue of the counting-field dressed generator on a finite-difference
stencil and is used to cross-check the first route.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .device import DIM, DeviceSpec
from .liouville import LDIM, CountingChannel, _assembly, trace_vector, unvec, vec

TRACE_ABS_TOL = 1e-12
HERMITICITY_ABS_TOL = 1e-12
POSITIVITY_FLOOR = -1e-10
RESIDUAL_MAX_TOL = 1e-10
KERNEL_DEGENERACY_RTOL = 1e-9


class SolverError(RuntimeError):
    """Stationary solve failed; carries diagnostics for the caller."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateKernelError(SolverError):
    """The generator has more than one stationary direction."""


@dataclass(frozen=True)
class SteadyState:
    """Stationary density matrix with its solver residuals."""

    rho: np.ndarray
    residual_max: float
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float


@dataclass(frozen=True)
class CountingMoments:
    """Channel currents I_c and the symmetric zero-frequency correlator matrix."""

    channels: tuple[CountingChannel, ...]
    currents: np.ndarray  # shape (C,), GHz
    correlators: np.ndarray  # shape (C, C), GHz
    steady: SteadyState
    upsilon_residual_max: float

    def current(self, reservoir: str, frequency: float) -> float:
        for i, c in enumerate(self.channels):
            if c.reservoir == reservoir and abs(c.frequency - frequency) <= 1e-9:
                return float(self.currents[i])
        raise KeyError((reservoir, frequency))


class _AugmentedSolver:
    """Least-squares solver for [L; trace-row] v = [rhs; target].

    One pivoted QR factorization is shared by the steady-state solve and all
    channel responses; the pivoted R diagonal doubles as the rank check that
    detects a degenerate kernel.
    """

    def __init__(self, generator: np.ndarray):
        self.generator = generator
        a = np.vstack([generator, trace_vector()[None, :]])
        self.q, self.r, self.perm = sla.qr(a, mode="economic", pivoting=True)
        rdiag = np.abs(np.diag(self.r))
        self.rank_gap = float(rdiag.min() / rdiag.max())
        if self.rank_gap < KERNEL_DEGENERACY_RTOL:
            sv = sla.svdvals(generator)
            raise DegenerateKernelError(
                "stationary state is not unique: second singular value of the "
                f"generator is {sv[-2]:.3e} (largest {sv[0]:.3e})",
                diagnostics={"kernel_gap": float(sv[-2]), "singular_values": sv[-3:].tolist()},
            )

    def solve(self, rhs: np.ndarray, trace_target: float) -> np.ndarray:
        b = np.concatenate([rhs, [trace_target]]).astype(complex)
        y = self.q.conj().T @ b
        x = sla.solve_triangular(self.r, y)
        out = np.empty_like(x)
        out[self.perm] = x
        return out


def _steady_from_solver(solver: _AugmentedSolver) -> SteadyState:
    v = solver.solve(np.zeros(LDIM), 1.0)
    rho = unvec(v)
    residual = float(np.max(np.abs(solver.generator @ v)))
    trace_error = abs(np.trace(rho) - 1.0)
    herm_error = float(np.max(np.abs(rho - rho.conj().T)))
    eigmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    state = SteadyState(
        rho=rho,
        residual_max=residual,
        trace_error=float(trace_error),
        hermiticity_error=herm_error,
        min_eigenvalue=eigmin,
    )
    problems = []
    if residual > RESIDUAL_MAX_TOL:
        problems.append(f"|L rho|_max = {residual:.3e}")
    if trace_error > TRACE_ABS_TOL:
        problems.append(f"|Tr rho - 1| = {trace_error:.3e}")
    if herm_error > HERMITICITY_ABS_TOL:
        problems.append(f"|rho - rho^+|_max = {herm_error:.3e}")
    if eigmin < POSITIVITY_FLOOR:
        problems.append(f"min eigenvalue = {eigmin:.3e}")
    if problems:
        raise SolverError(
            "steady state violates its contract: " + ", ".join(problems),
            diagnostics={
                "residual_max": residual,
                "trace_error": float(trace_error),
                "hermiticity_error": herm_error,
                "min_eigenvalue": eigmin,
            },
        )
    return state


def steady_state(generator: np.ndarray) -> SteadyState:
    """Unique stationary state of a GKSL generator with nondegenerate kernel."""
    return _steady_from_solver(_AugmentedSolver(np.asarray(generator, dtype=complex)))


def solve_upsilon(
    generator: np.ndarray,
    rho: np.ndarray,
    current_op: np.ndarray,
    solver: _AugmentedSolver | None = None,
) -> np.ndarray:
    """Traceless perpendicular response of one counting channel.

    Solves L Upsilon = -(I_c - Tr(I_c rho)) rho with Tr Upsilon = 0, where
    ``current_op`` is the channel's current superoperator.
    """
    if solver is None:
        solver = _AugmentedSolver(np.asarray(generator, dtype=complex))
    t = trace_vector()
    v_rho = vec(rho)
    flow = current_op @ v_rho
    mean = t @ flow
    rhs = -(flow - mean * v_rho)
    return unvec(solver.solve(rhs, 0.0))


def counting_moments(spec: DeviceSpec) -> CountingMoments:
    """Stationary channel currents and zero-frequency correlators of a device."""
    asm = _assembly(spec)
    solver = _AugmentedSolver(asm.generator)
    steady = _steady_from_solver(solver)
    t = trace_vector()
    v_rho = vec(steady.rho)

    n = len(asm.channels)
    current_ops = [asm.current_op(i) for i in range(n)]
    currents = np.empty(n)
    upsilons = []
    ups_residual = 0.0
    for i in range(n):
        flow = current_ops[i] @ v_rho
        mean = (t @ flow).real
        currents[i] = mean
        rhs = -(flow - mean * v_rho)
        u = solver.solve(rhs, 0.0)
        ups_residual = max(ups_residual, float(np.max(np.abs(asm.generator @ u - rhs))))
        upsilons.append(u)

    correlators = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            s = (t @ (current_ops[i] @ upsilons[j]) + t @ (current_ops[j] @ upsilons[i])).real
            if i == j:
                s += (t @ (asm.activity_op(i) @ v_rho)).real
            correlators[i, j] = s
            correlators[j, i] = s

    return CountingMoments(
        channels=asm.channels,
        currents=currents,
        correlators=correlators,
        steady=steady,
        upsilon_residual_max=ups_residual,
    )


def spectral_gap(generator: np.ndarray) -> float:
    """Distance of the slowest decaying mode from the stationary eigenvalue."""
    ev = np.linalg.eigvals(generator)
    real = np.sort(ev.real)[::-1]
    return float(-real[1])


# ---------------------------------------------------------------------------
# cumulant-generating-function oracle


class EigenvalueTrackingError(SolverError):
    """The dressed eigenvalue could not be followed from the stationary one."""


def _dominant_eigenvector(dressed: np.ndarray, start: np.ndarray, gap: float) -> np.ndarray:
    """Eigenvector of the eigenvalue continuously connected to the stationary one.

    For counting-field steps small against the spectral gap that eigenvalue is
    the one of smallest magnitude, so a few rounds of inverse iteration seeded
    with the stationary state converge fast; a full eigensolve with
    max-real-part selection and overlap tie-breaking is the fallback.
    """
    try:
        lu = sla.lu_factor(dressed, check_finite=False)
        v = start / np.linalg.norm(start)
        for _ in range(3):
            w = sla.lu_solve(lu, v, check_finite=False)
            v = w / np.linalg.norm(w)
        lam_est = np.vdot(v, dressed @ v)
        residual = np.linalg.norm(dressed @ v - lam_est * v)
        if residual < 1e-10 and abs(lam_est) < 0.25 * gap:
            return v
    except (sla.LinAlgError, ValueError):
        pass

    evals, evecs = sla.eig(dressed)
    order = np.argsort(evals.real)[::-1]
    best = order[0]
    near = [
        i
        for i in order
        if evals[order[0]].real - evals[i].real < 1e-12 * max(1.0, abs(evals[order[0]].real))
    ]
    if len(near) > 1:
        overlaps = [abs(np.vdot(evecs[:, i], start)) for i in near]
        best = near[int(np.argmax(overlaps))]
    if abs(evals[best]) > 0.25 * gap:
        raise EigenvalueTrackingError(
            f"dressed eigenvalue {evals[best]:.3e} is no longer separated from "
            f"the spectral gap {gap:.3e}; reduce the counting-field step"
        )
    return evecs[:, best]


def _dominant_eigenvalue(asm, tilt: np.ndarray, rho_vec: np.ndarray, gap: float) -> float:
    """Dominant eigenvalue of the tilted generator, refined past eigensolver noise.

    ``tilt`` holds the real tilting parameters theta_c = i chi_c.  The
    eigensolve only locates the eigenvector; the eigenvalue is re-evaluated as
    (u v + t dL v)/(t v) with u the exact trace defect of the stored generator
    and dL the small dressing part, which avoids the eps*|L| cancellation floor
    that would otherwise swamp the second differences.
    """
    delta = np.zeros((LDIM, LDIM), dtype=complex)
    for (index, direction), term in asm.jumps.items():
        weight = np.expm1(direction * tilt[index])
        if weight != 0.0:
            delta += weight * term
    dressed = asm.generator + delta
    v = _dominant_eigenvector(dressed, rho_vec, gap)
    t = trace_vector()
    tv = t @ v
    if abs(tv) < 1e-8:
        raise EigenvalueTrackingError("dressed eigenvector has (near-)vanishing trace")
    lam = (asm.trace_defect @ v + t @ (delta @ v)) / tv
    return float(lam.real)


def cgf_oracle(
    spec: DeviceSpec,
    channels: tuple[CountingChannel, ...] | None = None,
    step: float = 1e-4,
    richardson: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Currents and correlators from derivatives of the dominant eigenvalue.

    Central differences in the tilting parameters theta_c = i chi_c at the
    requested ``step`` (and step/2 when ``richardson`` is set, eliminating the
    quadratic stencil error) give the first two cumulants channel by channel.
    Independent of the hierarchy route: no Upsilon solve is involved.
    """
    if not 1e-6 <= step <= 1e-2:
        raise ValueError(f"step {step:g} outside the supported range")
    asm = _assembly(spec)
    all_channels = asm.channels
    if channels is None:
        idx = list(range(len(all_channels)))
    else:
        idx = [asm.channel_index(c.reservoir, c.frequency) for c in channels]

    solver = _AugmentedSolver(asm.generator)
    steady = _steady_from_solver(solver)
    rho_vec = vec(steady.rho)
    gap = spectral_gap(asm.generator)

    cache: dict[tuple, float] = {}

    def lam(*pairs) -> float:
        key = tuple(sorted(pairs))
        if key not in cache:
            tilt = np.zeros(len(all_channels))
            for channel_pos, theta in pairs:
                tilt[channel_pos] += theta
            cache[key] = _dominant_eigenvalue(asm, tilt, rho_vec, gap)
        return cache[key]

    lam0 = lam()

    def first(i, h):
        return (lam((i, +h)) - lam((i, -h))) / (2 * h)

    def second_diag(i, h):
        return (lam((i, +h)) - 2 * lam0 + lam((i, -h))) / h**2

    def second_mixed(i, j, h):
        return (
            lam((i, +h), (j, +h))
            - lam((i, +h), (j, -h))
            - lam((i, -h), (j, +h))
            + lam((i, -h), (j, -h))
        ) / (4 * h**2)

    def extrapolate(f, *args):
        if not richardson:
            return f(*args, step)
        return (4.0 * f(*args, step / 2) - f(*args, step)) / 3.0

    n = len(idx)
    currents = np.empty(n)
    correlators = np.empty((n, n))
    for a, i in enumerate(idx):
        currents[a] = extrapolate(first, i)
        correlators[a, a] = extrapolate(second_diag, i)
        for b in range(a + 1, n):
            s = extrapolate(second_mixed, i, idx[b])
            correlators[a, b] = s
            correlators[b, a] = s
    return currents, correlators
