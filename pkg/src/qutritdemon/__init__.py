"""Steady-state heat transport through an exchange-coupled qutrit pair.

Two three-level systems, each attached to one "system" bath (L or R) and one
"demon" bath (A or B) through frequency-filtered couplings, are driven by the
temperature bias of the demon pair.  The package assembles the local GKSL
generator, solves for the stationary state and the zero-frequency counting
statistics of every (reservoir, photon frequency) channel, and reduces them to
heat currents, noise correlators, efficiencies and an operation classification.

Units: hbar = k_B = 1; energies, temperatures and rates are all quoted in GHz,
heat currents in hbar GHz^2 and zero-frequency noise in hbar^2 GHz^3.
"""

from .device import (
    DeviceSpec,
    QutritLevels,
    Reservoir,
    SwapCouplings,
    build_hamiltonian,
    jump_operators,
    preset,
)
from .baths import RateEntry, bose_einstein, filter_weight, rate_table, transition_rate
from .liouville import (
    CountingChannel,
    counting_channels,
    current_superoperator,
    dressed_liouvillian,
    jump_superoperator,
    liouvillian,
)
from .fcs import (
    CountingMoments,
    DegenerateKernelError,
    SolverError,
    SteadyState,
    cgf_oracle,
    counting_moments,
    solve_upsilon,
    steady_state,
)
from .thermo import (
    TransportReport,
    classify_operation,
    entropy_and_efficiencies,
    heat_transport,
    partition_currents,
    reversal_boundary,
    second_law_margin,
    transport_report,
    tur_pearson,
)

__all__ = [
    "DeviceSpec",
    "QutritLevels",
    "Reservoir",
    "SwapCouplings",
    "build_hamiltonian",
    "jump_operators",
    "preset",
    "RateEntry",
    "bose_einstein",
    "filter_weight",
    "rate_table",
    "transition_rate",
    "CountingChannel",
    "counting_channels",
    "current_superoperator",
    "dressed_liouvillian",
    "jump_superoperator",
    "liouvillian",
    "CountingMoments",
    "DegenerateKernelError",
    "SolverError",
    "SteadyState",
    "cgf_oracle",
    "counting_moments",
    "solve_upsilon",
    "steady_state",
    "TransportReport",
    "classify_operation",
    "entropy_and_efficiencies",
    "heat_transport",
    "partition_currents",
    "reversal_boundary",
    "second_law_margin",
    "transport_report",
    "tur_pearson",
]

__version__ = "0.1.0"
