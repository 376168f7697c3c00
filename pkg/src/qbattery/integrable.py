"""Momentum-space pseudo-spin engine for the translation-invariant chain.

Each quasi-momentum k is an independent two-level problem: the half-pulse
generators are linear in the pseudo-spin Paulis (eta_y, eta_z), so one drive
period composes two SU(2) rotations into a single axis-angle vector beta(k).
Stroboscopic observables then have closed forms in n*|beta| and the rotation
axis, summed over the positive-k grid.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .params import DriveParams, ModeObservables, StroboscopicRecord

_ANGLE_FLOOR = 1e-9   # below this the composed rotation is the identity
_AXIS_FLOOR = 1e-12   # |sin theta| below this leaves the axis undefined (U = +-1)


@dataclass(frozen=True)
class BlochRotation:
    """Axis-angle vector of a per-mode Floquet operator U = exp(-i beta.eta)."""

    beta: tuple[float, float, float]

    @property
    def angle(self) -> float:
        return float(np.sqrt(sum(b * b for b in self.beta)))

    @property
    def axis(self) -> tuple[float, float, float]:
        """Unit axis; falls back to z when the angle leaves it undefined."""
        a = self.angle
        if a < _ANGLE_FLOOR:
            return (0.0, 0.0, 1.0)
        return tuple(b / a for b in self.beta)


def mode_grid(N: int) -> np.ndarray:
    """Positive quasi-momenta k_m = (2m-1) pi / N of the even-parity sector."""
    if N < 2 or N % 2:
        raise ValueError("N must be even and >= 2")
    m = np.arange(1, N // 2 + 1)
    return (2 * m - 1) * np.pi / N


def half_pulse_hamiltonian(k, params: DriveParams, sign: int):
    """Pseudo-spin coefficients (a_y, a_z) of the half-pulse generator."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a_y = 2.0 * sign * params.J0 * np.sin(k)
    a_z = 2.0 * params.h_z - 2.0 * sign * params.J0 * np.cos(k)
    return a_y, a_z


def _half_quaternion(k, params, sign, T):
    """(w, v_y, v_z) of exp(-i (T/2) (a_y eta_y + a_z eta_z))."""
    a_y, a_z = half_pulse_hamiltonian(k, params, sign)
    mag = np.hypot(a_y, a_z)
    theta = 0.5 * T * mag
    w = np.cos(theta)
    s = np.sin(theta)
    safe = np.where(mag > 0, mag, 1.0)
    return w, s * a_y / safe, s * a_z / safe


def _compose(k, params: DriveParams):
    """Axis-angle data (theta, nx, ny, nz) of U(-J0 half) . U(+J0 half).

    Quaternion composition: the first half-period (sign +1) acts first, i.e.
    is the right factor. Vectorized over k.
    """
    T = params.period
    w1, v1y, v1z = _half_quaternion(k, params, +1, T)
    w2, v2y, v2z = _half_quaternion(k, params, -1, T)
    w = w2 * w1 - (v2y * v1y + v2z * v1z)
    vx = v2y * v1z - v2z * v1y  # cross term, the only source of beta_x
    vy = w2 * v1y + w1 * v2y
    vz = w2 * v1z + w1 * v2z
    norm = np.sqrt(vx * vx + vy * vy + vz * vz)
    theta = np.arctan2(norm, w)  # in [0, pi]
    safe = np.where(norm > _AXIS_FLOOR, norm, 1.0)
    nx = np.where(norm > _AXIS_FLOOR, vx / safe, 0.0)
    ny = np.where(norm > _AXIS_FLOOR, vy / safe, 0.0)
    nz = np.where(norm > _AXIS_FLOOR, vz / safe, 1.0)
    return theta, nx, ny, nz


def compose_floquet_rotation(k: float, params: DriveParams) -> BlochRotation:
    """One-period rotation vector beta(k), angle canonicalized to [0, pi]."""
    theta, nx, ny, nz = _compose(float(k), params)
    theta = float(theta)
    if theta < _ANGLE_FLOOR:
        return BlochRotation((0.0, 0.0, 0.0))
    return BlochRotation((theta * float(nx), theta * float(ny), theta * float(nz)))


def rotation_unitary(rot: BlochRotation) -> np.ndarray:
    """Dense 2x2 matrix exp(-i beta.eta) of a rotation."""
    theta = rot.angle
    nx, ny, nz = rot.axis
    c, s = np.cos(theta), np.sin(theta)
    return np.array([
        [c - 1j * s * nz, -1j * s * (nx - 1j * ny)],
        [-1j * s * (nx + 1j * ny), c + 1j * s * nz],
    ])


def _energy(theta, nz, n, h_z):
    sn = np.sin(n * theta)
    perp = np.clip(1.0 - nz * nz, 0.0, 1.0)
    return 4.0 * h_z * sn * sn * perp


def _variances(theta, nx, ny, nz, n, k, params: DriveParams):
    h_z, J0 = params.h_z, params.J0
    sn = np.sin(n * theta)
    cn = np.cos(n * theta)
    perp = np.clip(1.0 - nz * nz, 0.0, 1.0)
    E = 4.0 * h_z * sn * sn * perp
    varB = 16.0 * h_z ** 2 * sn * sn * perp * (cn * cn + sn * sn * nz * nz)
    mean_c = (1.0 - E / (2.0 * h_z)) * (2.0 * J0 * np.cos(k) - 2.0 * h_z) \
        + 4.0 * J0 * np.sin(k) * sn * (nx * cn - ny * nz * sn)
    varC = 4.0 * J0 ** 2 * np.sin(k) ** 2 + (2.0 * h_z - 2.0 * J0 * np.cos(k)) ** 2 \
        - mean_c ** 2
    return varB, np.maximum(varC, 0.0)


def _instantaneous_power(theta, nx, ny, nz, n, k, params: DriveParams):
    """<i[H_c, H_B]>(n) per mode: -4 h_z a_y <eta_x>(n), Rodrigues form."""
    sn = np.sin(n * theta)
    cn = np.cos(n * theta)
    r_x = -2.0 * sn * (ny * cn + nx * nz * sn)
    a_y = 2.0 * params.J0 * np.sin(k)
    return -4.0 * params.h_z * a_y * r_x


def mode_energy(rot: BlochRotation, n: int, h_z: float) -> float:
    """Stored energy of one mode after n periods."""
    if n < 0:
        raise ValueError("n must be >= 0")
    theta = rot.angle
    if theta < _ANGLE_FLOOR:
        return 0.0
    return float(_energy(theta, rot.axis[2], n, h_z))


def mode_variances(rot: BlochRotation, n: int, k: float,
                   params: DriveParams) -> tuple[float, float]:
    """(varB_k, varC_k) after n periods; varC uses the +J0 half-pulse."""
    if n < 0:
        raise ValueError("n must be >= 0")
    nx, ny, nz = rot.axis
    varB, varC = _variances(rot.angle, nx, ny, nz, n, k, params)
    return float(varB), float(varC)


def mode_observables(k: float, params: DriveParams, n: int) -> ModeObservables:
    rot = compose_floquet_rotation(k, params)
    varB, varC = mode_variances(rot, n, k, params)
    return ModeObservables(k=float(k), E_k=mode_energy(rot, n, params.h_z),
                           varB_k=varB, varC_k=varC)


def _require_integrable(params: DriveParams):
    if params.h0 != 0.0:
        raise ValueError("momentum-space engine requires h0 = 0")


def chain_observables(params: DriveParams, n: int) -> StroboscopicRecord:
    """Whole-chain sums over the positive-k grid after n periods."""
    _require_integrable(params)
    if n < 1:
        raise ValueError("power P(n) = E/(nT) needs n >= 1")
    k = mode_grid(params.N)
    theta, nx, ny, nz = _compose(k, params)
    E = float(np.sum(_energy(theta, nz, n, params.h_z)))
    varB_k, varC_k = _variances(theta, nx, ny, nz, n, k, params)
    varB = float(np.sum(varB_k))
    varC = float(np.sum(varC_k))
    inst = float(np.sum(_instantaneous_power(theta, nx, ny, nz, n, k, params)))
    slack = 2.0 * np.sqrt(varB * varC) - abs(inst)
    return StroboscopicRecord(n=n, E=E, P=E / (n * params.period),
                              varB=varB, varC=varC, bound_slack=float(slack))


def stroboscopic_series(params: DriveParams, n_max: int) -> list[StroboscopicRecord]:
    """Records for n = 1..n_max, one pass over the mode grid."""
    _require_integrable(params)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    k = mode_grid(params.N)
    theta, nx, ny, nz = _compose(k, params)
    out = []
    for n in range(1, n_max + 1):
        E = float(np.sum(_energy(theta, nz, n, params.h_z)))
        varB_k, varC_k = _variances(theta, nx, ny, nz, n, k, params)
        varB, varC = float(np.sum(varB_k)), float(np.sum(varC_k))
        inst = float(np.sum(_instantaneous_power(theta, nx, ny, nz, n, k, params)))
        slack = 2.0 * np.sqrt(varB * varC) - abs(inst)
        out.append(StroboscopicRecord(n=n, E=E, P=E / (n * params.period),
                                      varB=varB, varC=varC, bound_slack=float(slack)))
    return out


def frequency_sweep(params: DriveParams, omega_grid, n: int):
    """(omega, StroboscopicRecord) rows, ascending in omega."""
    omegas = np.sort(np.asarray(omega_grid, dtype=float))
    if omegas.size == 0:
        raise ValueError("empty frequency grid")
    rows = []
    for omega in omegas:
        rows.append((float(omega),
                     chain_observables(replace(params, omega=float(omega)), n)))
    return rows


def resonance_frequencies(h_z: float, lo: float, hi: float) -> list[float]:
    """All resonance drive frequencies 2h_z/p and 4h_z/(2p+1) inside [lo, hi]."""
    out = set()
    p = 1
    while 2 * h_z / p >= lo:
        if 2 * h_z / p <= hi:
            out.add(2 * h_z / p)
        p += 1
    p = 0
    while 4 * h_z / (2 * p + 1) >= lo:
        if 4 * h_z / (2 * p + 1) <= hi:
            out.add(4 * h_z / (2 * p + 1))
        p += 1
    return sorted(out)
