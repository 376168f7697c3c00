"""Dense Floquet engine for the full chain, integrable or not.

One Schur decomposition of the period unitary serves every stroboscopic
power (eigenphases raised to n), the quasi-energy spectrum, and the
principal-branch Floquet Hamiltonian.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import EigenDecomposition, unitary_eig, unitary_exp
from .params import ChainSpec, StroboscopicRecord
from .pauli import materialize, site_sum, string_sum


def build_hamiltonians(spec: ChainSpec):
    """(H_B, H1, H2) as Pauli strings; H1 + H2 = 2 H_B by construction."""
    p = spec.params
    H_B = site_sum("Z", p.N, p.h_z)
    drive = string_sum("XX", p.N, p.J0, spec.boundary) + site_sum("X", p.N, p.h0)
    return H_B, H_B + drive, H_B - drive


class FloquetSystem:
    """Immutable bundle: period unitary, its eigensystem, and the state basis."""

    def __init__(self, spec: ChainSpec, U_F: np.ndarray, eig_UF: EigenDecomposition,
                 hb_diag: np.ndarray, H1_dense: np.ndarray, H2_dense: np.ndarray,
                 psi0: np.ndarray):
        self.spec = spec
        self.T = spec.params.period
        self.U_F = U_F
        self.eig_UF = eig_UF
        self.hb_diag = hb_diag
        self.H1_dense = H1_dense
        self.H2_dense = H2_dense
        self.psi0 = psi0
        self._H_F = None

    def _eigenphases(self) -> np.ndarray:
        theta = -np.angle(self.eig_UF.eigenvalues)
        theta[theta <= -np.pi] += 2 * np.pi  # branch (-pi, pi], +pi endpoint kept
        return theta

    @property
    def H_F(self) -> np.ndarray:
        """Principal-branch Floquet Hamiltonian, built on first use."""
        if self._H_F is None:
            theta = self._eigenphases()
            V = self.eig_UF.eigenvectors
            H = (V * (theta / self.T)) @ V.conj().T
            self._H_F = 0.5 * (H + H.conj().T)
        return self._H_F

    @property
    def H_B_dense(self) -> np.ndarray:
        return np.diag(self.hb_diag.astype(np.complex128))


def floquet_operator(spec: ChainSpec) -> FloquetSystem:
    """Build U^F = exp(-i H2 T/2) exp(-i H1 T/2); the +J0 half acts first."""
    p = spec.params
    T = p.period
    H_B, H1, H2 = build_hamiltonians(spec)
    H1_dense = materialize(H1, p.N)
    H2_dense = materialize(H2, p.N)
    hb_diag = materialize(H_B, p.N).diagonal().real.copy()
    U_F = unitary_exp(H2_dense, T / 2) @ unitary_exp(H1_dense, T / 2)
    eig = unitary_eig(U_F)
    dim = 1 << p.N
    psi0 = np.zeros(dim, dtype=np.complex128)
    psi0[-1] = 1.0  # all spins down
    if not np.isclose(hb_diag[-1], -p.N * p.h_z, rtol=0, atol=1e-9):
        raise AssertionError("psi0 is not the H_B ground state")
    return FloquetSystem(spec, U_F, eig, hb_diag, H1_dense, H2_dense, psi0)


def stroboscopic_series(sys: FloquetSystem, n_max: int) -> list[StroboscopicRecord]:
    """Observables for n = 1..n_max via eigenphase powers of U^F."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    lam = sys.eig_UF.eigenvalues
    V = sys.eig_UF.eigenvectors
    c = V.conj().T @ sys.psi0
    hd = sys.hb_diag
    E0 = float(hd[-1])
    out = []
    for n in range(1, n_max + 1):
        psi = V @ (lam ** n * c)
        dpsi = hd * psi
        e_mean = float(np.real(np.vdot(psi, dpsi)))
        E = e_mean - E0
        varB = max(float(np.real(np.vdot(dpsi, dpsi))) - e_mean ** 2, 0.0)
        w = sys.H1_dense @ psi
        c_mean = float(np.real(np.vdot(psi, w)))
        varC = max(float(np.real(np.vdot(w, w))) - c_mean ** 2, 0.0)
        inst = -2.0 * float(np.imag(np.vdot(w, dpsi)))  # <i[H1, H_B]>
        slack = 2.0 * np.sqrt(varB * varC) - abs(inst)
        out.append(StroboscopicRecord(n=n, E=E, P=E / (n * sys.T),
                                      varB=varB, varC=varC, bound_slack=float(slack)))
    return out


def bandwidth(sys: FloquetSystem) -> float:
    """Quasi-energy spread of H_F; bounded by the branch width 2 pi / T."""
    theta = sys._eigenphases()
    return float((theta.max() - theta.min()) / sys.T)


def max_power(sys: FloquetSystem, n_max: int) -> tuple[int, float]:
    """argmax of P(n) over n = 1..n_max, ties broken toward smaller n."""
    best_n, best_p = 1, -np.inf
    for rec in stroboscopic_series(sys, n_max):
        if rec.P > best_p:
            best_n, best_p = rec.n, rec.P
    return best_n, float(best_p)


def linear_fit(x, y):
    """OLS slope, intercept, residual sum of squares, and R^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), float(coef[1]), ss_res, r2


@dataclass(frozen=True)
class PowerScaling:
    rows: tuple[tuple[int, int, float], ...]  # (N, n_star, P_star)
    exponent: float
    residual: float


def power_scaling(spec_template: ChainSpec, N_list, n_max: int) -> PowerScaling:
    """P_star vs N with a log-log OLS exponent; needs at least 3 sizes."""
    sizes = list(N_list)
    if len(sizes) < 3:
        raise ValueError("power-law fit needs at least 3 chain sizes")
    rows = []
    for N in sizes:
        spec = replace(spec_template, params=replace(spec_template.params, N=int(N)))
        sys = floquet_operator(spec)
        n_star, p_star = max_power(sys, n_max)
        rows.append((int(N), n_star, p_star))
        del sys
    slope, _, ss_res, _ = linear_fit(np.log([r[0] for r in rows]),
                                     np.log([r[2] for r in rows]))
    return PowerScaling(rows=tuple(rows), exponent=slope, residual=ss_res)
