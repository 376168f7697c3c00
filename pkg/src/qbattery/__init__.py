"""Numerical lab for the stroboscopic charging of a driven spin-chain battery.

Two engines compute the same observables: a momentum-space pseudo-spin solver
for the translation-invariant chain (h0 = 0) and a dense Floquet engine for
the full problem. A Magnus module builds the high-frequency effective
Hamiltonian through T^3, and a CLI batches the figure-style experiments.
"""

__version__ = "0.1.0"

from .errors import BranchViolationError, MemoryGuardError
from .linalg import (EigenDecomposition, hermitian_eig, principal_log,
                     quasi_energies, unitary_eig, unitary_exp)
from .params import ChainSpec, DriveParams, ModeObservables, StroboscopicRecord
from .pauli import (PauliStringOperator, i_commutator, materialize, max_sites,
                    site_sum, string_sum)
from .integrable import (BlochRotation, chain_observables, compose_floquet_rotation,
                         frequency_sweep, half_pulse_hamiltonian, mode_energy,
                         mode_grid, mode_observables, mode_variances,
                         resonance_frequencies, rotation_unitary)
from .ed import (FloquetSystem, PowerScaling, bandwidth, build_hamiltonians,
                 floquet_operator, linear_fit, max_power, power_scaling)
from .magnus import commutator_oracle, magnus_error, magnus_floquet

__all__ = [
    "BlochRotation", "BranchViolationError", "ChainSpec", "DriveParams",
    "EigenDecomposition", "FloquetSystem", "MemoryGuardError", "ModeObservables",
    "PauliStringOperator", "PowerScaling", "StroboscopicRecord", "bandwidth",
    "build_hamiltonians", "chain_observables", "commutator_oracle",
    "compose_floquet_rotation", "floquet_operator", "frequency_sweep",
    "half_pulse_hamiltonian", "hermitian_eig", "i_commutator", "linear_fit",
    "magnus_error", "magnus_floquet", "materialize", "max_power", "max_sites",
    "mode_energy", "mode_grid", "mode_observables", "mode_variances",
    "power_scaling", "principal_log", "quasi_energies", "resonance_frequencies",
    "rotation_unitary", "site_sum", "string_sum", "unitary_eig", "unitary_exp",
]
