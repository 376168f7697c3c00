"""Pauli-string operators and dense materialization.

A Pauli string is a length-N word over {I, X, Y, Z}, one letter per site
(site 0 is the most significant bit of the basis index, matching the order
of nested Kronecker products). Operators are real-weighted sums of strings;
every Hamiltonian here is of that form, and any such sum is Hermitian since
each tensor product of Pauli matrices is.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import MemoryGuardError

DEFAULT_MAX_SITES = 14

# single-site products sigma_a sigma_b = phase * sigma_c, phase in {1, i, -1, -i}
_MUL = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}

_COEFF_CUTOFF = 1e-14  # relative; merged terms below this are treated as zero


def max_sites() -> int:
    """Dense-size guard, overridable through QBATTERY_MAX_N."""
    raw = os.environ.get("QBATTERY_MAX_N")
    if raw is None:
        return DEFAULT_MAX_SITES
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"QBATTERY_MAX_N must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("QBATTERY_MAX_N must be >= 1")
    return value


def _merge(pairs) -> tuple[tuple[float, str], ...]:
    acc: dict[str, float] = {}
    length = None
    for coeff, string in pairs:
        if length is None:
            length = len(string)
        elif len(string) != length:
            raise ValueError(f"mixed string lengths {length} and {len(string)}")
        if not set(string) <= set("IXYZ"):
            raise ValueError(f"bad Pauli string {string!r}")
        acc[string] = acc.get(string, 0.0) + float(coeff)
    if not acc:
        return ()
    scale = max(abs(c) for c in acc.values())
    cutoff = _COEFF_CUTOFF * scale
    return tuple((c, s) for s, c in sorted(acc.items()) if abs(c) > cutoff)


@dataclass(frozen=True)
class PauliStringOperator:
    """Canonical real-weighted sum of Pauli strings: merged, sorted, no zeros."""

    terms: tuple[tuple[float, str], ...]

    @classmethod
    def from_terms(cls, pairs) -> "PauliStringOperator":
        return cls(_merge(pairs))

    @property
    def n_sites(self) -> int | None:
        return len(self.terms[0][1]) if self.terms else None

    def __add__(self, other: "PauliStringOperator") -> "PauliStringOperator":
        return PauliStringOperator.from_terms(list(self.terms) + list(other.terms))

    def __sub__(self, other: "PauliStringOperator") -> "PauliStringOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar: float) -> "PauliStringOperator":
        return PauliStringOperator.from_terms((scalar * c, s) for c, s in self.terms)

    def __neg__(self) -> "PauliStringOperator":
        return (-1.0) * self

    def strings(self) -> set[str]:
        return {s for _, s in self.terms}


def site_sum(label: str, N: int, coeff: float = 1.0) -> PauliStringOperator:
    """coeff * sum_j sigma_j^label over all N sites."""
    return string_sum(label, N, coeff, boundary="open")


def string_sum(pattern: str, N: int, coeff: float = 1.0,
               boundary: str = "periodic") -> PauliStringOperator:
    """coeff * sum_j (pattern placed at sites j..j+len-1).

    Periodic placement wraps around; open placement stops at the last full fit.
    """
    width = len(pattern)
    if width > N:
        raise ValueError(f"pattern {pattern!r} wider than chain N={N}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    starts = range(N) if (boundary == "periodic" and width > 1) else range(N - width + 1)
    pairs = []
    for j in starts:
        word = ["I"] * N
        for offset, label in enumerate(pattern):
            word[(j + offset) % N] = label
        pairs.append((coeff, "".join(word)))
    return PauliStringOperator.from_terms(pairs)


def _string_mul(s1: str, s2: str) -> tuple[complex, str]:
    phase = 1 + 0j
    out = []
    for a, b in zip(s1, s2):
        p, c = _MUL[(a, b)]
        phase *= p
        out.append(c)
    return phase, "".join(out)


def i_commutator(A: PauliStringOperator, B: PauliStringOperator) -> PauliStringOperator:
    """i[A, B] as a Pauli-string operator (real coefficients by construction).

    Strings either commute (AB and BA terms cancel) or anticommute with a
    relative phase +-i, so i[A, B] of real-weighted operators is again
    real-weighted.
    """
    acc: dict[str, complex] = {}
    for ca, sa in A.terms:
        for cb, sb in B.terms:
            phase, s = _string_mul(sa, sb)
            back, _ = _string_mul(sb, sa)
            diff = phase - back
            if diff != 0:
                acc[s] = acc.get(s, 0j) + 1j * ca * cb * diff
    pairs = []
    for s, c in acc.items():
        if abs(c.imag) > 1e-12 * max(1.0, abs(c)):
            raise ValueError("commutator produced a non-real coefficient")
        pairs.append((c.real, s))
    return PauliStringOperator.from_terms(pairs)


def _parity(values: np.ndarray) -> np.ndarray:
    """Popcount parity of nonnegative ints, vectorized (enough for N <= 32)."""
    v = values.copy()
    for shift in (16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


def materialize(op: PauliStringOperator, N: int) -> np.ndarray:
    """Dense 2^N x 2^N complex matrix of op.

    Each string acts as a signed permutation: column b maps to row b ^ xmask
    with phase i^{#Y} * (-1)^{popcount(b & zmask)}, so assembly is O(2^N) per
    term instead of a full Kronecker chain.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    guard = max_sites()
    if N > guard:
        raise MemoryGuardError(
            f"N={N} exceeds the dense guard {guard} (set QBATTERY_MAX_N to override)")
    for _, s in op.terms:
        if len(s) != N:
            raise ValueError(f"string {s!r} does not have length N={N}")
    dim = 1 << N
    A = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim)
    for coeff, s in op.terms:
        xmask = zmask = 0
        n_y = 0
        for j, label in enumerate(s):
            bit = 1 << (N - 1 - j)  # site 0 is the most significant bit
            if label in ("X", "Y"):
                xmask |= bit
            if label in ("Y", "Z"):
                zmask |= bit
            if label == "Y":
                n_y += 1
        signs = 1.0 - 2.0 * _parity(cols & zmask)
        A[cols ^ xmask, cols] += coeff * (1j ** n_y) * signs
    if dim <= 4096:  # cheap enough to verify rather than assume
        herm = np.max(np.abs(A - A.conj().T))
        if herm > 1e-12 * max(1.0, float(np.max(np.abs(A)))):
            raise ValueError("materialized operator is not Hermitian")
    return A
