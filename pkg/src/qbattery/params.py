"""Drive parameters, chain specification, and observable records."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MemoryGuardError
from .pauli import max_sites


@dataclass(frozen=True)
class DriveParams:
    """Couplings and drive frequency for the square-pulse protocol.

    h_z is the static transverse field defining stored energy, J0 the Ising
    coupling amplitude and h0 the longitudinal field amplitude, both of which
    flip sign between the two half-periods. T = 2 pi / omega.
    """

    h_z: float
    J0: float
    h0: float
    omega: float
    N: int

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.h_z <= 0:
            raise ValueError("h_z must be positive (all-down ground state)")
        if self.N < 2:
            raise ValueError("N must be at least 2")

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


@dataclass(frozen=True)
class ChainSpec:
    """DriveParams plus the boundary condition for the real-space engine."""

    params: DriveParams
    boundary: str = "periodic"

    def __post_init__(self):
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.boundary == "periodic" and self.params.N < 3:
            raise ValueError("periodic chains need N >= 3 (N=2 double-counts the bond)")
        if self.params.N > max_sites():
            raise MemoryGuardError(
                f"N={self.params.N} exceeds the dense guard {max_sites()}")


@dataclass(frozen=True)
class StroboscopicRecord:
    """Observables after n drive periods."""

    n: int
    E: float            # stored energy <H_B>(n) - <H_B>(0)
    P: float            # average charging power E(n) / (n T)
    varB: float         # variance of H_B in the evolved state
    varC: float         # variance of the charging generator (first half-pulse)
    bound_slack: float  # 2 sqrt(varB varC) - |<i[H_c, H_B]>|, >= 0 up to roundoff


@dataclass(frozen=True)
class ModeObservables:
    """Per-mode quantities of the momentum-space engine."""

    k: float
    E_k: float
    varB_k: float
    varC_k: float
