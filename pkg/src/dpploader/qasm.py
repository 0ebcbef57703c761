"""OpenQASM 3 text export and a parser for the subset we emit."""
import re

from .circuits import Circuit, Gate, expand_fbs
from .errors import UnsupportedGateError

HEADER = "// dpploader-qasm v1"
_HALF_PI = 1.5707963267948966

_VOCAB = [
    "// gate vocabulary:",
    "//   xx_plus_yy(2t, pi/2) a, b : RBS(t) on (a, b), |10> -> cos t |10> + sin t |01>",
    "//   mcz a, b, ... : sign flip of |1...1> on the listed qubits",
    "//   x, h, rz, p, cz, cx, crz : standard gates; qubit 0 is the first ground-set item",
]

_SIMPLE = {"X": "x", "H": "h", "CZ": "cz", "CNOT": "cx"}
_PARAM = {"RZ": "rz", "PHASE": "p", "CRZ": "crz"}
_SIMPLE_INV = {v: k for k, v in _SIMPLE.items()}
_PARAM_INV = {v: k for k, v in _PARAM.items()}


def _operands(qubits):
    return ", ".join(f"q[{q}]" for q in qubits)


def _line(g):
    if g.kind == "RBS":
        return f"xx_plus_yy({2 * g.param!r}, {_HALF_PI!r}) {_operands(g.qubits)};"
    if g.kind == "MCZ":
        return f"mcz {_operands(g.qubits)};"
    if g.kind in _SIMPLE:
        return f"{_SIMPLE[g.kind]} {_operands(g.qubits)};"
    if g.kind in _PARAM:
        return f"{_PARAM[g.kind]}({g.param!r}) {_operands(g.qubits)};"
    raise UnsupportedGateError(f"cannot export gate kind {g.kind}")


def export_qasm(circuit):
    """Deterministic text; FBS gates are expanded into parity networks first."""
    circuit = expand_fbs(circuit)
    lines = [HEADER, "OPENQASM 3.0;", 'include "stdgates.inc";', *_VOCAB]
    lines.append(f"qubit[{circuit.width}] q;")
    lines.extend(_line(g) for g in circuit.gates)
    return "\n".join(lines) + "\n"


_STMT = re.compile(r"^([a-z_]+)(?:\(([^)]*)\))?\s+(.+);$")
_QUBIT = re.compile(r"q\[(\d+)\]")


def parse_qasm(text):
    """Parse text produced by ``export_qasm`` back into a Circuit."""
    width = None
    gates = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("//") or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qubit\[(\d+)\]\s+q;$", line)
        if m:
            width = int(m.group(1))
            continue
        m = _STMT.match(line)
        if not m:
            raise UnsupportedGateError(f"cannot parse line {line!r}")
        name, params, ops = m.groups()
        qubits = tuple(int(q) for q in _QUBIT.findall(ops))
        values = [float(p) for p in params.split(",")] if params else []
        if name == "xx_plus_yy":
            if len(values) != 2 or values[1] != _HALF_PI:
                raise UnsupportedGateError(f"unsupported xx_plus_yy parameters {values}")
            gates.append(Gate("RBS", qubits, values[0] / 2))
        elif name == "mcz":
            gates.append(Gate("MCZ", qubits))
        elif name in _SIMPLE_INV:
            gates.append(Gate(_SIMPLE_INV[name], qubits))
        elif name in _PARAM_INV:
            gates.append(Gate(_PARAM_INV[name], qubits, values[0]))
        else:
            raise UnsupportedGateError(f"unknown gate {name!r}")
    if width is None:
        raise UnsupportedGateError("missing qubit declaration")
    return Circuit(width, gates)


def gate_counts(circuit):
    """Counts per exported gate name, after FBS expansion."""
    counts = {}
    for g in expand_fbs(circuit).gates:
        name = "xx_plus_yy" if g.kind == "RBS" else _SIMPLE.get(g.kind) or _PARAM.get(g.kind) or "mcz"
        counts[name] = counts.get(name, 0) + 1
    return counts
