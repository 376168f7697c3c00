"""Shared dense oracles built by explicit Kronecker products.

Everything here is written against the obvious textbook construction
(loop over sites, np.kron the 2x2 factors) so that it shares no code
with the bit-packed assembly in qbattery.pauli.
"""
import numpy as np
import scipy.linalg
from hypothesis import settings

settings.register_profile("ci", deadline=None)
settings.load_profile("ci")

ID2 = np.eye(2, dtype=complex)
SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_SINGLE = {"I": ID2, "X": SX, "Y": SY, "Z": SZ}


def kron_chain(labels):
    """Dense operator for a Pauli string given as an iterable of labels."""
    out = np.array([[1.0 + 0.0j]])
    for lab in labels:
        out = np.kron(out, _SINGLE[lab])
    return out


def kron_from_terms(op):
    """Dense matrix of a PauliStringOperator via per-string kron products."""
    dim = 2 ** op.n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for coeff, string in op.terms:
        out = out + coeff * kron_chain(string)
    return out


def site_sum_dense(label, N, coeff=1.0):
    dim = 2 ** N
    out = np.zeros((dim, dim), dtype=complex)
    for i in range(N):
        labels = ["I"] * N
        labels[i] = label
        out = out + coeff * kron_chain(labels)
    return out


def bond_sum_dense(pair, N, coeff=1.0, boundary="periodic"):
    """Nearest-neighbour two-site sum; wraps around on periodic chains."""
    dim = 2 ** N
    out = np.zeros((dim, dim), dtype=complex)
    last = N if boundary == "periodic" else N - 1
    for i in range(last):
        labels = ["I"] * N
        labels[i] = pair[0]
        labels[(i + 1) % N] = pair[1]
        out = out + coeff * kron_chain(labels)
    return out


def dense_hamiltonians(params, boundary="periodic"):
    """(H_B, H1, H2) assembled directly from the chain formulas."""
    N = params.N
    hb = site_sum_dense("Z", N, params.h_z)
    drive = bond_sum_dense("XX", N, params.J0, boundary)
    drive = drive + site_sum_dense("X", N, params.h0)
    return hb, hb + drive, hb - drive


def dense_floquet(params, boundary="periodic"):
    """One-period propagator from scipy.linalg.expm, no eigendecomposition."""
    hb, h1, h2 = dense_hamiltonians(params, boundary)
    half = params.period / 2.0
    return scipy.linalg.expm(-1j * h2 * half) @ scipy.linalg.expm(-1j * h1 * half)


def two_level_floquet(k, params):
    """2x2 one-period propagator for a single momentum mode via expm."""
    from qbattery.integrable import half_pulse_hamiltonian

    half = params.period / 2.0
    mats = []
    for sign in (1, -1):
        a_y, a_z = half_pulse_hamiltonian(k, params, sign)
        mats.append(scipy.linalg.expm(-1j * half * (a_y * SY + a_z * SZ)))
    return mats[1] @ mats[0]


def mode_state(k, params, n):
    """Pseudo-spin state after n periods, starting from the down spinor."""
    U = two_level_floquet(k, params)
    psi = np.array([0.0, 1.0], dtype=complex)
    return np.linalg.matrix_power(U, n) @ psi


def mode_observables_dense(k, params, n):
    """(E_k, varB_k, varC_k, inst_k) from the 2x2 evolution directly."""
    from qbattery.integrable import half_pulse_hamiltonian

    psi = mode_state(k, params, n)
    sx = np.vdot(psi, SX @ psi).real
    sy = np.vdot(psi, SY @ psi).real
    sz = np.vdot(psi, SZ @ psi).real
    h_z = params.h_z
    E = 2.0 * h_z * (sz + 1.0)
    varB = 4.0 * h_z ** 2 * (1.0 - sz ** 2)
    a_y, a_z = half_pulse_hamiltonian(k, params, 1)
    mean_c = a_y * sy + a_z * sz
    varC = a_y ** 2 + a_z ** 2 - mean_c ** 2
    inst = -4.0 * h_z * a_y * sx
    return E, varB, varC, inst
