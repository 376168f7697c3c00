"""High-frequency Floquet Hamiltonian through order T^3, as Pauli strings.

The square pulse collapses every Magnus integral to nested commutators of the
two half-period generators; the surviving operator content per order is hard
coded below and re-derived densely by the test suite's commutator oracle.
"""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from .ed import floquet_operator
from .errors import BranchViolationError, MemoryGuardError
from .params import ChainSpec, DriveParams
from .pauli import PauliStringOperator, materialize, site_sum, string_sum

ORACLE_MAX_SITES = 8
ERROR_MAX_SITES = 10


def _pair_sum(a: str, b: str, N: int, coeff: float, boundary: str) -> PauliStringOperator:
    """coeff * sum_j (sigma_j^a sigma_{j+1}^b + sigma_j^b sigma_{j+1}^a)."""
    return string_sum(a + b, N, coeff, boundary) + string_sum(b + a, N, coeff, boundary)


def magnus_floquet(spec: ChainSpec, order: int) -> PauliStringOperator:
    """Truncated Floquet Hamiltonian, orders T^0..T^order accumulated."""
    if order not in (0, 1, 2, 3):
        raise ValueError("order must be 0..3")
    p = spec.params
    N, b = p.N, spec.boundary
    h_z, J0, h0, T = p.h_z, p.J0, p.h0, p.period
    H = site_sum("Z", N, h_z)
    if order >= 1:
        c1 = 0.5 * T
        H = H + _pair_sum("X", "Y", N, c1 * h_z * J0, b)
        H = H + site_sum("Y", N, c1 * h_z * h0)
    if order >= 2:
        c2 = -(T ** 2) / 3.0
        H = H + _pair_sum("Z", "X", N, c2 * h0 * J0 * h_z, b)
        H = H + site_sum("Z", N, c2 * h_z * (J0 ** 2 + 0.5 * h0 ** 2))
        H = H + string_sum("XZX", N, c2 * J0 ** 2 * h_z, b)
    if order >= 3:
        c3 = -(T ** 3) / 24.0
        H = H + _pair_sum("X", "Y", N,
                          c3 * h_z * J0 * (4 * J0 ** 2 + 3 * h0 ** 2 - 4 * h_z ** 2), b)
        H = H + site_sum("Y", N, c3 * h0 * h_z * (6 * J0 ** 2 + h0 ** 2 - h_z ** 2))
        H = H + string_sum("XYX", N, c3 * 6 * h0 * J0 ** 2 * h_z, b)
    return H


def commutator_oracle(A: PauliStringOperator, B: PauliStringOperator,
                      N: int) -> np.ndarray:
    """Dense [A, B] for validation; deliberately independent of the string
    algebra's own commutator."""
    if N > ORACLE_MAX_SITES:
        raise MemoryGuardError(f"commutator oracle capped at N={ORACLE_MAX_SITES}")
    Ad = materialize(A, N)
    Bd = materialize(B, N)
    return Ad @ Bd - Bd @ Ad


def magnus_error(params: DriveParams, order: int, N: int | None = None,
                 boundary: str = "periodic") -> float:
    """Max-norm relative error of the truncated series against the exact
    principal-branch Floquet Hamiltonian.

    Only meaningful when no eigenphase folds across the branch edge; guarded
    by the loose spectral bound N (h_z + |J0| + |h0|) < pi / T.
    """
    n_sites = params.N if N is None else int(N)
    if n_sites > ERROR_MAX_SITES:
        raise MemoryGuardError(f"magnus_error capped at N={ERROR_MAX_SITES}")
    p = replace(params, N=n_sites)
    spread = n_sites * (p.h_z + abs(p.J0) + abs(p.h0))
    if spread >= np.pi / p.period:
        raise BranchViolationError(
            f"quasi-energy bound {spread:.3f} >= pi/T = {np.pi / p.period:.3f}; "
            "shrink T or N")
    spec = ChainSpec(params=p, boundary=boundary)
    exact = floquet_operator(spec).H_F
    approx = materialize(magnus_floquet(spec, order), n_sites)
    return float(np.max(np.abs(exact - approx)) / np.max(np.abs(exact)))
