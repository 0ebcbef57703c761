"""Dense statevector simulation of the circuits in ``circuits``."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import UnsupportedGateError, WidthMismatchError

MAX_WIDTH = 26
_INV_SQRT2 = 1 / math.sqrt(2)


class StateVector:
    """``2**width`` complex amplitudes; qubit 0 is the most significant bit."""

    def __init__(self, amplitudes, width=None, normalized=True):
        amps = np.ascontiguousarray(amplitudes, dtype=np.complex128).ravel()
        w = int(round(math.log2(amps.size))) if amps.size else -1
        if amps.size == 0 or 1 << w != amps.size:
            raise ValueError("number of amplitudes must be a power of two")
        if width is not None and width != w:
            raise WidthMismatchError(f"{amps.size} amplitudes do not describe {width} qubits")
        if w > MAX_WIDTH:
            raise ValueError(f"width {w} exceeds the simulator limit of {MAX_WIDTH}")
        if normalized and abs(np.linalg.norm(amps) - 1.0) > 1e-10:
            raise ValueError("state is not normalized")
        self.width = w
        self.amplitudes = amps

    @classmethod
    def zero(cls, width):
        if width > MAX_WIDTH:
            raise ValueError(f"width {width} exceeds the simulator limit of {MAX_WIDTH}")
        amps = np.zeros(1 << width, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps, width)

    @classmethod
    def basis(cls, bits):
        bits = [int(b) for b in bits]
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[bits_to_index(bits)] = 1.0
        return cls(amps, len(bits))

    def copy(self):
        return StateVector(self.amplitudes.copy(), self.width, normalized=False)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def __repr__(self):
        return f"StateVector(width={self.width})"


@dataclass(frozen=True)
class MeasurementRecord:
    bits: tuple
    seed: object
    weight: int

    @property
    def subset(self):
        return tuple(q for q, b in enumerate(self.bits) if b)


def bits_to_index(bits):
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def index_to_bits(idx, width):
    return tuple((int(idx) >> (width - 1 - q)) & 1 for q in range(width))


def subset_to_index(subset, width):
    idx = 0
    for q in subset:
        idx |= 1 << (width - 1 - q)
    return idx


def _mask(qubits, w):
    m = 0
    for q in qubits:
        m |= 1 << (w - 1 - q)
    return m


def apply_gate(psi, w, g, K=kernels):
    kind, qs = g.kind, g.qubits
    if kind == "RBS" or kind == "FBS":
        K.apply_givens(psi, w, qs[0], qs[1], math.cos(g.param), math.sin(g.param), kind == "FBS")
    elif kind == "X":
        K.apply_1q(psi, w, qs[0], 0, 1, 1, 0)
    elif kind == "H":
        K.apply_1q(psi, w, qs[0], _INV_SQRT2, _INV_SQRT2, _INV_SQRT2, -_INV_SQRT2)
    elif kind == "RZ":
        K.apply_diag1(psi, w, qs[0], cmath.exp(-0.5j * g.param), cmath.exp(0.5j * g.param))
    elif kind == "PHASE":
        K.apply_diag1(psi, w, qs[0], 1.0, cmath.exp(1j * g.param))
    elif kind == "CZ" or kind == "MCZ":
        K.apply_sign_mask(psi, w, _mask(qs, w))
    elif kind == "CNOT":
        K.apply_cnot(psi, w, qs[0], qs[1])
    elif kind == "CRZ":
        K.apply_crz(psi, w, qs[0], qs[1], g.param)
    else:
        raise UnsupportedGateError(f"simulator cannot apply {kind}")


def apply_circuit(state, circuit, backend=None, inplace=False):
    """Apply the gates of ``circuit`` in order; returns the resulting state."""
    if state.width != circuit.width:
        raise WidthMismatchError(f"state has {state.width} qubits, circuit {circuit.width}")
    K = kernels if backend is None else kernels.get_backend(backend)
    out = state if inplace else state.copy()
    for g in circuit.gates:
        apply_gate(out.amplitudes, out.width, g, K)
    return out


def run(circuit, backend=None):
    """Apply ``circuit`` to the all-zero state."""
    return apply_circuit(StateVector.zero(circuit.width), circuit, backend, inplace=True)


def circuit_unitary(circuit, backend=None):
    """Dense unitary of a small circuit, one basis column at a time."""
    if circuit.width > 12:
        raise ValueError("dense unitaries are limited to 12 qubits")
    dim = 1 << circuit.width
    U = np.empty((dim, dim), dtype=np.complex128)
    for col in range(dim):
        e = np.zeros(dim, dtype=np.complex128)
        e[col] = 1.0
        U[:, col] = apply_circuit(StateVector(e), circuit, backend, inplace=True).amplitudes
    return U


@lru_cache(maxsize=None)
def hamming_weights(width):
    weights = kernels.hamming_weights(width)
    weights.setflags(write=False)
    return weights


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_indices(state, shots, seed):
    """Draw basis indices with Born probabilities: one uniform per shot and a
    search in the cumulative distribution taken in basis order."""
    cdf = np.cumsum(state.probabilities())
    u = _rng(seed).random(shots) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), cdf.size - 1)


def measure_all(state, seed):
    idx = int(sample_indices(state, 1, seed)[0])
    bits = index_to_bits(idx, state.width)
    return MeasurementRecord(bits, seed, sum(bits))


def project_hamming(state, weight):
    """Projection onto Hamming weight ``weight``; returns (state, squared norm)."""
    if not 0 <= weight <= state.width:
        raise ValueError(f"weight {weight} outside 0..{state.width}")
    amps = np.where(hamming_weights(state.width) == weight, state.amplitudes, 0)
    return StateVector(amps, state.width, normalized=False), float(np.vdot(amps, amps).real)


def weight_distribution(state):
    return np.bincount(hamming_weights(state.width), weights=state.probabilities(),
                       minlength=state.width + 1)


def grover_step_operator(state, loaded, r):
    """Apply ``-(I - 2|psi><psi|)(I - 2 P_r)`` with ``psi = loaded``."""
    if state.width != loaded.width:
        raise WidthMismatchError("state and loaded state differ in width")
    s = state.amplitudes
    t = np.where(hamming_weights(state.width) == r, -s, s)
    psi = loaded.amplitudes
    out = 2 * psi * np.vdot(psi, t) - t
    return StateVector(out, state.width, normalized=False)


def amplitude(state, bits):
    if len(bits) != state.width:
        raise WidthMismatchError(f"{len(bits)} bits for a {state.width}-qubit state")
    return complex(state.amplitudes[bits_to_index(bits)])


def reduce_ancillas(state, k):
    """Split off the first k qubits; returns (data amplitudes, leakage norm).

    Leakage is the norm of the part where the ancillas are not all zero.
    """
    amps = state.amplitudes.reshape(1 << k, -1)
    leak = float(np.linalg.norm(amps[1:])) if k else 0.0
    return amps[0].copy(), leak


def embed_register(amplitudes, k, pad):
    """Place data amplitudes under k zero ancillas and ``pad`` trailing zero qubits."""
    data = np.asarray(amplitudes, dtype=np.complex128)
    n = int(round(math.log2(data.size)))
    full = np.zeros(1 << (k + n + pad), dtype=np.complex128)
    full.reshape(1 << k, 1 << n, 1 << pad)[0, :, 0] = data
    return StateVector(full, k + n + pad, normalized=False)


def strip_padding(amplitudes, n, pad):
    """Inverse of padding: data part and the norm that sits on padding qubits."""
    a = np.asarray(amplitudes).reshape(1 << n, 1 << pad)
    return a[:, 0].copy(), float(np.linalg.norm(a[:, 1:]))

