"""Quantum weight enumerators of a code projector.

A_j = K^-2 sum_{wt(O)=j} Tr(O P) Tr(O^dag P) and
B_j = K^-1 sum_{wt(O)=j} Tr(O P O^dag P), summed over all 4^n Pauli words.
Traces use the low-rank factorization of P: Tr(O P) = sum_i <psi_i|O|psi_i>,
so each word costs O(2^n K) instead of O(4^n).
"""

import math
from dataclasses import dataclass

import numpy as np

from .pauli import parity_signs

MAX_ENUMERATOR_QUBITS = 8

PHASES = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True)
class WeightEnumerator:
    n: int
    A: np.ndarray  # length n+1, A[0] = 1
    B: np.ndarray


def _popcounts(values):
    out = np.zeros_like(values)
    v = values.copy()
    while v.any():
        out += v & 1
        v >>= 1
    return out


def weight_enumerators(code, chunk=2048):
    """Enumerate all 4^n Pauli words and bucket the two trace sums by weight."""
    n, K = code.n, code.K
    if n > MAX_ENUMERATOR_QUBITS:
        raise ValueError(f"enumerator guard: n={n} exceeds {MAX_ENUMERATOR_QUBITS}")
    dim = 2 ** n
    psi = code.basis
    signs = parity_signs(n).astype(float)
    xs = np.arange(dim, dtype=np.intp)

    # every word is an (x-flip mask, z-sign mask) pair
    words = np.arange(4 ** n, dtype=np.intp)
    xmasks_all = words >> n
    zmasks_all = words & (dim - 1)
    weights_all = _popcounts(xmasks_all | zmasks_all)

    A = np.zeros(n + 1)
    B = np.zeros(n + 1)
    for start in range(0, 4 ** n, chunk):
        xm = xmasks_all[start:start + chunk]
        zm = zmasks_all[start:start + chunk]
        wt = weights_all[start:start + chunk]
        ycount = _popcounts(xm & zm)
        perm = xs[None, :] ^ xm[:, None]                       # (c, dim)
        amp = signs[perm & zm[:, None]]                        # (c, dim) real, input-indexed
        phase = np.array(PHASES, dtype=complex)[ycount % 4]    # (c,)
        op_psi = amp[:, :, None] * psi[perm, :]                # (c, dim, K)
        slices = np.einsum("mk,cml->ckl", psi.conj(), op_psi)  # (c, K, K)
        slices *= phase[:, None, None]
        tr = np.einsum("ckk->c", slices)
        A += np.bincount(wt, weights=np.abs(tr) ** 2, minlength=n + 1)
        B += np.bincount(
            wt, weights=np.sum(np.abs(slices) ** 2, axis=(1, 2)), minlength=n + 1
        )
    return WeightEnumerator(n=n, A=A / K ** 2, B=B / K)


def closed_form_723(lam):
    """Closed-form enumerator of the seven-qubit cyclic family at a given lambda*."""
    if lam < 0 or lam > math.sqrt(7) + 1e-9:
        raise ValueError(f"lambda* must lie in [0, sqrt(7)], got {lam}")
    t = lam ** 2
    A = np.array([1.0, 0.0, t, 0.0, 21 - 2 * t, 0.0, 42 + t, 0.0])
    B = np.array([1.0, 0.0, t, 3 * (7 + t), 21 - 2 * t, 6 * (21 - t), 42 + t, 3 * (15 + t)])
    return WeightEnumerator(n=7, A=A, B=B)


def closed_form_623(theta):
    """Closed-form enumerator of the six-qubit single-parameter family."""
    c2, c4 = math.cos(2 * theta), math.cos(4 * theta)
    A = np.array(
        [
            1.0,
            0.0,
            3 / 16 * c2 + 5 / 64 * c4 + 47 / 64,
            -3 / 16 * c2 - 5 / 64 * c4 + 17 / 64,
            -3 / 16 * c2 - 5 / 64 * c4 + 721 / 64,
            3 / 16 * c2 + 5 / 64 * c4 + 1007 / 64,
            3.0,
        ]
    )
    B = np.array(
        [
            1.0,
            0.0,
            3 / 16 * c2 + 5 / 64 * c4 + 47 / 64,
            3 / 8 * c2 + 5 / 32 * c4 + 751 / 32,
            -3 / 4 * c2 - 5 / 16 * c4 + 577 / 16,
            -3 / 8 * c2 - 5 / 32 * c4 + 1297 / 32,
            9 / 16 * c2 + 15 / 64 * c4 + 1677 / 64,
        ]
    )
    return WeightEnumerator(n=6, A=A, B=B)


def lambda_star_sq_from_enumerator(we):
    """lambda*^2 = A_1 + A_2 for a distance-3 code."""
    return float(we.A[1] + we.A[2])


def enumerator_to_csv(we):
    """CSV text with rows (j, A_j, B_j)."""
    lines = ["j,A_j,B_j"]
    for j in range(we.n + 1):
        lines.append(f"{j},{float(we.A[j])!r},{float(we.B[j])!r}")
    return "\n".join(lines) + "\n"


def polynomial_text(we):
    """Human-readable A(z), B(z) polynomials."""

    def poly(coeffs):
        terms = []
        for j, cj in enumerate(coeffs):
            if abs(cj) < 1e-12:
                continue
            term = f"{cj:.6g}"
            if j == 1:
                term += " z"
            elif j > 1:
                term += f" z^{j}"
            terms.append(term)
        return " + ".join(terms) if terms else "0"

    return f"A(z) = {poly(we.A)}\nB(z) = {poly(we.B)}"
