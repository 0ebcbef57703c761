"""Pure numpy statevector kernels.

Same API as the compiled ``_kernels`` module. Every function updates
``psi`` (a contiguous complex128 array of length ``2**w``) in place.
Qubit 0 is the most significant bit of the basis index.
"""
import numpy as np


def _split(psi, w, q):
    # view with axes (higher qubits, qubit q, lower qubits)
    return psi.reshape(1 << q, 2, 1 << (w - 1 - q))


def apply_1q(psi, w, q, m00, m01, m10, m11):
    v = _split(psi, w, q)
    a = v[:, 0, :].copy()
    b = v[:, 1, :]
    v[:, 0, :] = m00 * a + m01 * b
    v[:, 1, :] = m10 * a + m11 * b


def apply_diag1(psi, w, q, d0, d1):
    v = _split(psi, w, q)
    if d0 != 1:
        v[:, 0, :] *= d0
    if d1 != 1:
        v[:, 1, :] *= d1


def _indices(w):
    return np.arange(1 << w, dtype=np.int64)


def apply_givens(psi, w, i, j, c, s, parity):
    """Rotate the (i occupied, j empty) / (i empty, j occupied) pair.

    new_i = c*a - sign*s*b, new_j = sign*s*a + c*b where ``sign`` is the
    parity of the occupied qubits strictly between i and j (if ``parity``).
    """
    bi = 1 << (w - 1 - i)
    bj = 1 << (w - 1 - j)
    idx = _indices(w)
    ia = idx[((idx & bi) != 0) & ((idx & bj) == 0)]
    ib = ia ^ (bi | bj)
    a = psi[ia]
    b = psi[ib]
    if parity:
        lo, hi = min(bi, bj), max(bi, bj)
        between = (hi - 1) & ~((lo << 1) - 1)
        sig = 1.0 - 2.0 * (np.bitwise_count(ia & between) & 1)
        ss = s * sig
    else:
        ss = s
    psi[ia] = c * a - ss * b
    psi[ib] = ss * a + c * b


def apply_cnot(psi, w, ctrl, target):
    bc = 1 << (w - 1 - ctrl)
    bt = 1 << (w - 1 - target)
    idx = _indices(w)
    ia = idx[((idx & bc) != 0) & ((idx & bt) == 0)]
    ib = ia | bt
    tmp = psi[ia].copy()
    psi[ia] = psi[ib]
    psi[ib] = tmp


def apply_sign_mask(psi, w, mask):
    """Negate amplitudes whose index has every bit of ``mask`` set."""
    idx = _indices(w)
    psi[(idx & mask) == mask] *= -1


def apply_crz(psi, w, ctrl, target, phi):
    bc = 1 << (w - 1 - ctrl)
    bt = 1 << (w - 1 - target)
    idx = _indices(w)
    on = (idx & bc) != 0
    psi[on & ((idx & bt) == 0)] *= np.exp(-0.5j * phi)
    psi[on & ((idx & bt) != 0)] *= np.exp(0.5j * phi)


def hamming_weights(w):
    return np.bitwise_count(_indices(w)).astype(np.uint8)
