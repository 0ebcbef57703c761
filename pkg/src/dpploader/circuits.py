"""Gate-level circuits: Givens plans, Clifford loaders, reflections, and
the coherent Hamming-weight measurement used by the Grover operator.

Conventions
-----------
* Qubit ``q`` carries ground-set item ``q`` (0-based). In a statevector,
  qubit 0 is the most significant bit of the basis index.
* Creation operators use the Jordan-Wigner string on lower qubits:
  ``c_q^* = Z^{(q)} (x) sigma^+ (x) I``, so ``f_q = c_q + c_q^*`` equals
  ``Z...Z X_q``.
* ``RBS``/``FBS`` with angle ``t`` rotate the one-particle pair
  ``|i> -> cos t |i> + sin t |j>``, ``|j> -> -sin t |i> + cos t |j>``.
  FBS additionally multiplies the ``sin`` terms by the parity of the
  occupied qubits strictly between i and j, which makes it the fermionic
  Givens rotation; RBS never applies that sign.
* Control registers for Hamming-weight measurement are little-endian:
  control qubit ``l`` holds bit ``l`` of the weight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AdjacentQubitsError,
    AllEntriesBelowTolError,
    BadRegisterSizeError,
    NotUnitNormError,
    PlanOutOfRangeError,
    ROutOfRangeError,
)

ARCHITECTURES = ("pyramid", "parallel", "sparse")
DEFAULT_TOL = 1e-8

_PARAM_KINDS = {"RBS", "FBS", "RZ", "PHASE", "CRZ"}
_ARITY = {"RBS": 2, "FBS": 2, "X": 1, "H": 1, "RZ": 1, "PHASE": 1, "CZ": 2, "CRZ": 2, "CNOT": 2}


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple
    param: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind == "MCZ":
            if not self.qubits:
                raise ValueError("MCZ needs at least one qubit")
        elif self.kind in _ARITY:
            if len(self.qubits) != _ARITY[self.kind]:
                raise ValueError(f"{self.kind} takes {_ARITY[self.kind]} qubits")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if len(set(self.qubits)) != len(self.qubits) or min(self.qubits) < 0:
            raise ValueError(f"invalid qubits {self.qubits} for {self.kind}")
        if self.kind in ("RBS", "FBS") and self.qubits[0] >= self.qubits[1]:
            raise ValueError(f"{self.kind} expects i < j, got {self.qubits}")
        if (self.param is None) == (self.kind in _PARAM_KINDS):
            raise ValueError(f"bad parameter for {self.kind}")
        if self.param is not None:
            object.__setattr__(self, "param", float(self.param))

    def inverse(self):
        if self.kind in _PARAM_KINDS:
            return Gate(self.kind, self.qubits, -self.param)
        return self

    def shifted(self, offset):
        return Gate(self.kind, tuple(q + offset for q in self.qubits), self.param)


# small constructors, mostly to keep call sites readable
def RBS(i, j, theta):
    return Gate("RBS", (i, j), theta)


def FBS(i, j, theta):
    return Gate("FBS", (i, j), theta)


def X(q):
    return Gate("X", (q,))


def H(q):
    return Gate("H", (q,))


def Rz(q, phi):
    return Gate("RZ", (q,), phi)


def Phase(q, phi):
    return Gate("PHASE", (q,), phi)


def CZ(a, b):
    return Gate("CZ", (a, b))


def MultiCZ(qubits):
    return Gate("MCZ", tuple(qubits))


def CRz(ctrl, target, phi):
    return Gate("CRZ", (ctrl, target), phi)


def CNOT(ctrl, target):
    return Gate("CNOT", (ctrl, target))


def global_minus_one(q=0):
    # Rz(2*pi) = -I exactly, so the sign survives matrix-level comparisons
    return Rz(q, 2 * math.pi)


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if self.width < 1:
            raise ValueError("circuit width must be at least 1")
        for g in self.gates:
            if max(g.qubits) >= self.width:
                raise ValueError(f"gate {g} out of range for width {self.width}")

    def __add__(self, other):
        if other.width != self.width:
            raise ValueError("cannot concatenate circuits of different widths")
        return Circuit(self.width, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def inverse(self):
        return Circuit(self.width, tuple(g.inverse() for g in reversed(self.gates)))

    def embed(self, width, offset=0):
        """Same gates on a wider register, shifted up by ``offset`` qubits."""
        return Circuit(width, tuple(g.shifted(offset) for g in self.gates))

    def counts(self):
        out = {}
        for g in self.gates:
            out[g.kind] = out.get(g.kind, 0) + 1
        return out


# ---------------------------------------------------------------- Givens plans


@dataclass(frozen=True)
class GivensPlan:
    """Rotations ``(i, j, theta)`` with ``x = u_1 u_2 ... u_m e_pyramidion``.

    Each ``u_t`` is the one-particle rotation of an RBS/FBS gate with that
    angle. ``sign`` is -1 only when x is a negated basis vector, where no
    rotation can absorb the sign.
    """

    n: int
    rotations: tuple
    pyramidion: int
    sign: float = 1.0

    def replay(self):
        v = np.zeros(self.n)
        v[self.pyramidion] = self.sign
        for i, j, t in reversed(self.rotations):
            vi, vj = v[i], v[j]
            v[i] = math.cos(t) * vi - math.sin(t) * vj
            v[j] = math.sin(t) * vi + math.cos(t) * vj
        return v


def _zero_into(x, keep, drop, rotations):
    """Rotate entry ``drop`` of x into ``keep`` and record the rotation."""
    xi, xj = x[keep], x[drop]
    if keep < drop:
        rotations.append((keep, drop, math.atan2(xj, xi)))
    else:
        rotations.append((drop, keep, -math.atan2(xj, xi)))
    x[keep] = math.hypot(xi, xj)
    x[drop] = 0.0


def plan_loader(x, arch="sparse", tol=DEFAULT_TOL):
    x = np.array(x, dtype=float).ravel()
    n = x.size
    if n == 0 or abs(np.linalg.norm(x) - 1.0) > 1e-10:
        raise NotUnitNormError(f"vector norm {np.linalg.norm(x) if n else 0.0} is not 1")
    if np.max(np.abs(x)) < tol:
        raise AllEntriesBelowTolError(f"no entry of magnitude >= {tol}")
    rotations = []

    if arch == "pyramid":
        for i in range(n - 1, 0, -1):
            if x[i] != 0.0:
                _zero_into(x, i - 1, i, rotations)
        pyramidion = 0
    elif arch == "parallel":
        size = 1
        while size < n:
            size *= 2
        block = 1
        while block < size:
            for left in range(0, size, 2 * block):
                right = left + block
                if right < n and x[right] != 0.0:
                    _zero_into(x, left, right, rotations)
            block *= 2
        pyramidion = 0
    elif arch == "sparse":
        x[np.abs(x) < tol] = 0.0
        pyramidion = None
        for i in range(n - 1, -1, -1):
            if x[i] == 0.0:
                continue
            j = i - 1
            while j >= 0 and x[j] == 0.0:
                j -= 1
            if j < 0:
                pyramidion = i
                break
            _zero_into(x, j, i, rotations)
    else:
        raise ValueError(f"unknown architecture {arch!r}; expected one of {ARCHITECTURES}")

    sign = -1.0 if x[pyramidion] < 0 else 1.0
    return GivensPlan(n, tuple(rotations), pyramidion, sign)


def givens_gate(i, j, theta):
    return RBS(i, j, theta) if j == i + 1 else FBS(i, j, theta)


def build_clifford_loader(plan, n=None):
    """Circuit for ``C(x) = U f_p U^*``, the Clifford loader of the plan."""
    n = plan.n if n is None else n
    for i, j, _ in plan.rotations:
        if not 0 <= i < j < n:
            raise PlanOutOfRangeError(f"rotation ({i}, {j}) outside width {n}")
    if not 0 <= plan.pyramidion < n:
        raise PlanOutOfRangeError(f"pyramidion {plan.pyramidion} outside width {n}")
    p = plan.pyramidion
    gates = [givens_gate(i, j, -t) for i, j, t in plan.rotations]
    gates += [Phase(q, math.pi) for q in range(p)]
    gates.append(X(p))
    if plan.sign < 0:
        gates.append(global_minus_one(p))
    gates += [givens_gate(i, j, t) for i, j, t in reversed(plan.rotations)]
    return Circuit(n, gates)


def loader_for_vector(x, arch="sparse", tol=DEFAULT_TOL):
    return build_clifford_loader(plan_loader(x, arch, tol))


def build_state_loader(X, arch="sparse", tol=DEFAULT_TOL, width=None, offset=0):
    """Gates preparing ``C(x_1)...C(x_r)|0...0>`` (last column applied first)."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, r = X.shape
    width = n if width is None else width
    gates = []
    for col in range(r - 1, -1, -1):
        gates.extend(loader_for_vector(X[:, col], arch, tol).embed(width, offset).gates)
    return Circuit(width, gates)


# ------------------------------------------------------------- FBS expansion


def parity_network(first, last):
    """CNOT tree that stores the parity of qubits first..last in ``first``."""
    layer = list(range(first, last + 1))
    gates = []
    while len(layer) > 1:
        nxt = []
        for a in range(0, len(layer) - 1, 2):
            gates.append(CNOT(layer[a + 1], layer[a]))
            nxt.append(layer[a])
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return gates


def fbs_decompose(i, j, theta, n=None):
    """FBS as parity network, CZ, a sign-free RBS, CZ, and the inverse network."""
    if j <= i + 1:
        raise AdjacentQubitsError(f"FBS({i}, {j}) acts on adjacent qubits; use RBS")
    if n is not None and j >= n:
        raise PlanOutOfRangeError(f"FBS({i}, {j}) outside width {n}")
    parity = parity_network(i + 1, j - 1)
    return parity + [CZ(i, i + 1), RBS(i, j, theta), CZ(i, i + 1)] + parity[::-1]


def expand_fbs(circuit):
    gates = []
    for g in circuit.gates:
        if g.kind == "FBS":
            gates.extend(fbs_decompose(*g.qubits, g.param))
        else:
            gates.append(g)
    return Circuit(circuit.width, gates)


# ------------------------------------------------------------- reflections


def build_S0(n):
    if n < 1:
        raise BadRegisterSizeError("S0 needs at least one qubit")
    flips = [X(q) for q in range(n)]
    return Circuit(n, flips + [MultiCZ(range(n))] + flips)


def build_Or(r, k):
    """Phase oracle flipping the sign of the little-endian basis state bin(r)."""
    if k < 1 or not 0 <= r <= 2 ** k - 1:
        raise ROutOfRangeError(f"r={r} not representable on {k} control qubits")
    flips = [X(q) for q in range(k) if not (r >> q) & 1]
    return Circuit(k, flips + [MultiCZ(range(k))] + flips)


def _controlled_phase(c, t, phi):
    return [Phase(c, phi / 2), CRz(c, t, phi)]


def _swap(a, b):
    return [CNOT(a, b), CNOT(b, a), CNOT(a, b)]


def qft_gates(k):
    """Fourier transform on the little-endian k-qubit control register.

    Maps ``|x>`` to ``sum_y exp(2 pi i x y / 2^k) |y> / sqrt(2^k)``.
    """
    order = list(range(k - 1, -1, -1))  # most significant first
    gates = []
    for a in range(k):
        gates.append(H(order[a]))
        for b in range(a + 1, k):
            gates += _controlled_phase(order[b], order[a], 2 * math.pi / 2 ** (b - a + 1))
    for a in range(k // 2):
        gates += _swap(order[a], order[k - 1 - a])
    return gates


def iqft_gates(k):
    return [g.inverse() for g in reversed(qft_gates(k))]


def register_size_for(n):
    """Smallest k with n <= 2^k - 1."""
    k = 1
    while 2 ** k - 1 < n:
        k += 1
    return k


def _check_register(n, k):
    if n < 1 or k < 1 or n + 1 != 2 ** k:
        raise BadRegisterSizeError(f"need n + 1 = 2^k, got n={n}, k={k}")


def build_V(n, k):
    """Coherent Hamming-weight measurement on k control + n register qubits."""
    _check_register(n, k)
    gates = [H(q) for q in range(k)]
    for ell in range(k):
        s = 2 ** ell
        gates.append(Phase(ell, math.pi * s * n / (n + 1)))
        phi = 2 * math.pi * s / (n + 1)
        gates += [CRz(ell, k + q, phi) for q in range(n)]
    gates += iqft_gates(k)
    return Circuit(k + n, gates)


def build_Sr_via_V(n, k, r):
    V = build_V(n, k)
    return V + build_Or(r, k).embed(k + n) + V.inverse()


def build_grover(X, m, k=None, arch="sparse", r=None):
    """Loader followed by m Grover iterations, on k control + 2^k - 1 data qubits.

    Data qubits beyond the rows of X are padding that stays in |0>.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, cols = X.shape
    r = cols if r is None else r
    if m < 0:
        raise ValueError("m must be nonnegative")
    if k is None:
        k = register_size_for(n)
    npad = 2 ** k - 1
    if npad < n:
        raise BadRegisterSizeError(f"{k} control qubits cannot count {n} data qubits")
    width = k + npad
    load = build_state_loader(X, arch, width=width, offset=k)
    Sr = build_Sr_via_V(npad, k, r)
    S0 = build_S0(npad).embed(width, k)
    iteration = Sr + load.inverse() + S0 + load + Circuit(width, [global_minus_one(0)])
    circ = load
    for _ in range(m):
        circ = circ + iteration
    return circ


def export_qasm(circuit):
    from .qasm import export_qasm as _export

    return _export(circuit)
