import numpy as np
import pytest

from dpploader import circuits as C
from dpploader import graphs
from dpploader import simulator as sim
from dpploader.errors import UnsupportedGateError
from dpploader.qasm import HEADER, export_qasm, gate_counts, parse_qasm


def body(text):
    return [l for l in text.splitlines() if l and not l.startswith(("//", "OPENQASM", "include", "qubit"))]


def test_empty_circuit_is_header_only():
    text = export_qasm(C.Circuit(3, []))
    assert text.splitlines()[0] == HEADER
    assert "qubit[3] q;" in text
    assert body(text) == []


def test_single_rbs_line():
    text = export_qasm(C.Circuit(2, [C.RBS(0, 1, 0.25)]))
    assert body(text) == ["xx_plus_yy(0.5, 1.5707963267948966) q[0], q[1];"]


def test_xx_plus_yy_matches_rbs():
    # with beta = pi/2 the xx_plus_yy block is real: |q0=1> -> cos t |q0=1> + sin t |q1=1>
    # (index 2 is qubit 0 set, index 1 is qubit 1 set)
    t = 0.3
    U = sim.circuit_unitary(C.Circuit(2, [C.RBS(0, 1, t)]))
    c, s = np.cos(t), np.sin(t)
    expected = np.array([[1, 0, 0, 0], [0, c, s, 0], [0, -s, c, 0], [0, 0, 0, 1]])
    np.testing.assert_allclose(U, expected, atol=1e-15)


def test_round_trip_barbell_grover():
    X = graphs.loader_matrix(graphs.RootedGraph(graphs.barbell(3, 0), 3))
    circ = C.build_grover(X, 1, k=3)
    text = export_qasm(circ)
    back = parse_qasm(text)
    assert back.gates == C.expand_fbs(circ).gates
    assert export_qasm(back) == text


def test_export_is_deterministic():
    X = graphs.loader_matrix(graphs.RootedGraph(graphs.square(), 3))
    assert export_qasm(C.build_state_loader(X)) == export_qasm(C.build_state_loader(X))


def test_barbell_sparse_gate_counts():
    X = graphs.loader_matrix(graphs.RootedGraph(graphs.barbell(3, 0), 3))
    counts = gate_counts(parse_qasm(export_qasm(C.build_state_loader(X, "sparse"))))
    assert counts["xx_plus_yy"] == 12
    assert counts["cz"] == 8


def test_fbs_expanded_on_export():
    text = export_qasm(C.Circuit(4, [C.FBS(0, 3, 0.4)]))
    assert "cx" in text and "xx_plus_yy" in text
    U1 = sim.circuit_unitary(C.Circuit(4, [C.FBS(0, 3, 0.4)]))
    U2 = sim.circuit_unitary(parse_qasm(text))
    np.testing.assert_allclose(U1, U2, atol=1e-12)


def test_parse_rejects_unknown_gate():
    with pytest.raises(UnsupportedGateError):
        parse_qasm(HEADER + "\nqubit[2] q;\nswap q[0], q[1];\n")
