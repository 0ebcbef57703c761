"""End-to-end acceptance checks, one test per criterion.

Run under pytest (a PASS/FAIL line per criterion appears in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""
import io
import itertools
import math
import time
import warnings
from contextlib import redirect_stdout

import numpy as np
import pytest
from scipy import stats

from dpploader import circuits as C
from dpploader import cli, dpp, graphs, sampling
from dpploader import simulator as sim
from dpploader.numerics import gram, normalize_columns, pfaffian, smallest_eigenvalue
from dpploader.sketch import SketchConfig, sketch_logdet
from oracles import clifford_matrix, pfaffian_contractions


def criterion(number):
    def mark(fn):
        fn.criterion = number
        return fn
    return mark


def rooted(g, root):
    return graphs.RootedGraph(g, root)


def fan(n):
    """Hub 0 joined to every node of the path 1..n-1."""
    return graphs.Graph(n, [(0, v) for v in range(1, n)] + [(v, v + 1) for v in range(1, n - 1)])


def wheel(n):
    return graphs.Graph(n, fan(n).edges + ((1, n - 1),))


SMALL_GRAPHS = [
    rooted(graphs.square(), 3),
    rooted(graphs.complete(4), 3),
    rooted(graphs.barbell(3, 0), 3),
    rooted(graphs.path(5), 0),
    rooted(graphs.star(5), 0),
    rooted(fan(5), 0),
    rooted(graphs.barbell(3, 1), 2),
]


def random_unit(rng, n, r):
    return normalize_columns(rng.normal(size=(n, r)))


# --------------------------------------------------------------------- 1


@criterion(1)
def test_exact_acceptance_probability():
    """exact acceptance probability on K4 and barbell(3,0)"""
    for g, expected in [(graphs.complete(4), 16 / 27), (graphs.barbell(3, 0), 3 / 16)]:
        start = time.perf_counter()
        rg = rooted(g, 3)
        X = graphs.loader_matrix(rg)
        mass = sim.project_hamming(sampling.loaded_state(X), X.shape[1])[1]
        elapsed = time.perf_counter() - start
        assert abs(mass - expected) <= 1e-10
        assert abs(np.linalg.det(gram(X)) - expected) <= 1e-10
        assert abs(graphs.acceptance_probability(rg) - expected) <= 1e-10
        ratio = graphs.count_spanning_trees(g) / np.prod(g.degrees()[rg.kept_nodes])
        assert abs(ratio - expected) <= 1e-10
        assert elapsed < 1.0


# --------------------------------------------------------------------- 2


@criterion(2)
def test_conditioned_law():
    """weight-r component of the loaded state follows the projection DPP"""
    worst = 0.0
    for rg in SMALL_GRAPHS:
        if rg.graph.n_edges > 8:
            continue
        X = graphs.loader_matrix(rg)
        n, r = X.shape
        proj, mass = sim.project_hamming(sampling.loaded_state(X), r)
        probs = np.abs(proj.amplitudes) ** 2 / mass
        for Cset in itertools.combinations(range(n), r):
            got = probs[sim.subset_to_index(Cset, n)]
            worst = max(worst, abs(got - dpp.conditioned_pmf(X, Cset)))
    assert worst <= 1e-9


# --------------------------------------------------------------------- 3


@criterion(3)
def test_skew_dpp_law():
    """simulated subset law equals the bordered-determinant pmf"""
    for rg in [rooted(graphs.square(), 3), rooted(graphs.barbell(3, 0), 3)]:
        X = graphs.loader_matrix(rg)
        n, r = X.shape
        probs = sampling.loaded_state(X).probabilities()
        dist = dpp.enumerate_pmf(dpp.SkewEnsemble.from_loader(X))
        for Cset, p in dist.entries.items():
            got = probs[sim.subset_to_index(Cset, n)]
            assert abs(got - p) <= 1e-9
            assert abs(got - dpp.loader_dpp_pmf(X, Cset)) <= 1e-9
            if len(Cset) % 2 != r % 2:
                assert got <= 1e-12 and abs(p) <= 1e-12
        assert abs(dist.total() - 1) <= 1e-9
        assert abs(probs.sum() - 1) <= 1e-9
    barbell = rooted(graphs.barbell(3, 0), 3)
    bridge = barbell.graph.edge_index((0, 2))
    probs = sampling.loaded_state(graphs.loader_matrix(barbell)).probabilities()
    assert probs[sim.subset_to_index((bridge,), 7)] <= 1e-12


# --------------------------------------------------------------------- 4


@criterion(4)
def test_support_is_dimer_rooted_forests():
    """supported subsets are dimer-rooted forests; accepted samples are trees"""
    rng = np.random.default_rng(40)
    for rg in SMALL_GRAPHS:
        X = graphs.loader_matrix(rg)
        dist = dpp.enumerate_pmf(dpp.SkewEnsemble.from_loader(X))
        for Cset, p in dist.support(1e-12).items():
            assert graphs.is_dimer_rooted_forest(rg, Cset), (rg, Cset)
        sampler = sampling.RejectionSampler(sampling.loaded_state(X), X.shape[1])
        for res in sampler.sample_many(100, int(rng.integers(2 ** 31))):
            assert graphs.is_spanning_tree(rg.graph, res.subset)


# --------------------------------------------------------------------- 5


@criterion(5)
def test_amplification():
    """Grover circuits match the operator, the amplified mass, and the barbell rate"""
    rng = np.random.default_rng(50)
    cases = [graphs.loader_matrix(rooted(graphs.barbell(3, 0), 3)),
             graphs.loader_matrix(rooted(graphs.complete(4), 3)),
             graphs.loader_matrix(rooted(graphs.square(), 3)),
             random_unit(rng, 5, 2)]
    for X in cases:
        n, r = X.shape
        a = np.linalg.det(gram(X))
        k = C.register_size_for(n)
        pad = 2 ** k - 1 - n
        psi = sampling.loaded_state(X)
        op = psi
        for m in range(6):
            full = sim.run(C.build_grover(X, m, k))
            data, leak = sim.reduce_ancillas(full, k)
            data, pad_leak = sim.strip_padding(data, n, pad)
            assert leak <= 1e-10 and pad_leak <= 1e-10
            assert np.max(np.abs(data - op.amplitudes)) <= 1e-9
            mass = sim.project_hamming(op, r)[1]
            assert abs(mass - math.sin((2 * m + 1) * math.asin(math.sqrt(a))) ** 2) <= 1e-9
            op = sim.grover_step_operator(op, psi, r)

    for a in rng.uniform(0, 0.5, 500):
        if a == 0:
            continue
        m = math.floor(math.pi / (4 * math.asin(math.sqrt(a))))
        assert sampling.amplified_probability(a, m) >= max(a, 1 - a) - 1e-12

    start = time.perf_counter()
    X = graphs.loader_matrix(rooted(graphs.barbell(3, 0), 3))
    state = sampling.amplified_state(X, 1, gate_level=True)
    runs = 2000
    idx = sim.sample_indices(state, runs, 51)
    rate = float(np.mean(sim.hamming_weights(7)[idx] == 5))
    sigma = math.sqrt(0.9503 * (1 - 0.9503) / runs)
    print(f"barbell m=1 acceptance over {runs} runs: {rate:.4f} (exact 0.94921875)")
    assert abs(rate - 0.9503) <= 3 * sigma
    assert time.perf_counter() - start < 30


# --------------------------------------------------------------------- 6


def control_index(s, k):
    # integer s is held little-endian on the control qubits
    return sum(((s >> ell) & 1) << (k - 1 - ell) for ell in range(k))


@criterion(6)
def test_coherent_hamming_measurement():
    """V writes the Hamming weight into the controls; S_r via V is the reflection"""
    rng = np.random.default_rng(60)
    for n, k in [(3, 2), (7, 3)]:
        V = C.build_V(n, k)
        weights = sim.hamming_weights(n)
        for _ in range(100):
            psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
            psi /= np.linalg.norm(psi)
            out = sim.apply_circuit(sim.embed_register(psi, k, 0), V).amplitudes.reshape(2 ** k, 2 ** n)
            expected = np.zeros_like(out)
            for s in range(n + 1):
                expected[control_index(s, k)] = np.where(weights == s, psi, 0)
            assert np.max(np.abs(out - expected)) <= 1e-9
        for r in range(n + 1):
            Sr = C.build_Sr_via_V(n, k, r)
            psi = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
            psi /= np.linalg.norm(psi)
            out = sim.apply_circuit(sim.embed_register(psi, k, 0), Sr)
            data, leak = sim.reduce_ancillas(out, k)
            assert leak <= 1e-9
            assert np.max(np.abs(data - np.where(weights == r, -psi, psi))) <= 1e-9


# --------------------------------------------------------------------- 7


@criterion(7)
def test_architecture_equivalence():
    """pyramid, parallel and sparse loaders agree"""
    rng = np.random.default_rng(70)
    for n in range(2, 9):
        x = rng.normal(size=n)
        if n > 3:
            x[rng.choice(n, size=n // 3, replace=False)] = 0
        x /= np.linalg.norm(x)
        Us = [sim.circuit_unitary(C.loader_for_vector(x, arch)) for arch in C.ARCHITECTURES]
        for U in Us:
            assert np.max(np.abs(U - Us[0])) <= 1e-9
            assert np.max(np.abs(U @ U - np.eye(2 ** n))) <= 1e-9
        if n <= 6:
            assert np.max(np.abs(Us[0] - clifford_matrix(x))) <= 1e-9
        assert len(C.plan_loader(x, "sparse").rotations) == np.count_nonzero(x) - 1
    for n in (9, 12, 16):
        X = rng.normal(size=(n, 3))
        X[rng.random(size=(n, 3)) < 0.3] = 0
        X = normalize_columns(X)
        states = [sampling.loaded_state(X, arch).amplitudes for arch in C.ARCHITECTURES]
        for s in states:
            assert np.max(np.abs(s - states[0])) <= 1e-10
    X = graphs.loader_matrix(rooted(graphs.barbell(3, 2), 3))
    for c in range(X.shape[1]):
        assert len(C.plan_loader(X[:, c], "sparse").rotations) == np.count_nonzero(X[:, c]) - 1


# --------------------------------------------------------------------- 8


@criterion(8)
def test_pfaffian_suite():
    """pf^2 = det, bordered identity, contraction oracle"""
    rng = np.random.default_rng(80)
    for _ in range(200):
        d = 2 * int(rng.integers(1, 6))
        A = rng.normal(size=(d, d))
        A = A - A.T
        pf = pfaffian(A)
        det = np.linalg.det(A)
        assert abs(pf * pf - det) <= 1e-9 * abs(det)
    for _ in range(50):
        r = int(rng.integers(1, 6))
        X = rng.normal(size=(r, r))
        S = rng.normal(size=(r, r))
        S = S - S.T
        M = np.block([[np.zeros((r, r)), X], [-X.T, S]])
        expected = (-1) ** (r * (r - 1) // 2) * np.linalg.det(X)
        assert abs(pfaffian(M) - expected) <= 1e-9 * max(1.0, abs(expected))
    for d in (2, 4, 6, 8):
        for _ in range(5):
            A = rng.normal(size=(d, d))
            A = A - A.T
            assert abs(pfaffian(A) - pfaffian_contractions(A)) <= 1e-9 * max(1.0, abs(pfaffian(A)))


# --------------------------------------------------------------------- 9


@criterion(9)
def test_cardinality_law_and_kernel():
    """cardinality law, kernel minors and positivity of the kernel"""
    rng = np.random.default_rng(90)
    for _ in range(20):
        r = int(rng.integers(1, 6))
        n = int(rng.integers(r, 11))
        B = rng.normal(size=(r, r))
        E = dpp.SkewEnsemble(rng.normal(size=(n, r)), B - B.T)
        dist = dpp.enumerate_pmf(E)
        marg = dist.cardinality_marginal()
        law = np.zeros(n + 1)
        law[: r + 1] = dpp.cardinality_law(E)
        assert 0.5 * np.abs(law - marg).sum() <= 1e-9
        K = dpp.correlation_kernel(E)
        for size in (1, 2, 3):
            for A in itertools.islice(itertools.combinations(range(n), size), 15):
                assert abs(np.linalg.det(K[np.ix_(A, A)]) - dist.inclusion_probability(A)) <= 1e-9
        for v in rng.normal(size=(50, n)):
            assert v @ K @ v >= -1e-12


# --------------------------------------------------------------------- 10


@criterion(10)
def test_classical_oracles():
    """HKPV and Wilson are uniform on K4 trees; vanilla RS estimates a"""
    rg = rooted(graphs.complete(4), 3)
    trees = [T for T in itertools.combinations(range(6), 3) if graphs.is_spanning_tree(rg.graph, T)]
    assert len(trees) == 16
    position = {T: i for i, T in enumerate(trees)}
    X = graphs.reduced_incidence(rg)
    for sampler in (lambda g: dpp.hkpv_sample(X, g), lambda g: graphs.wilson_sample(rg, g)):
        rng = np.random.default_rng(100)
        counts = np.zeros(16)
        for _ in range(10_000):
            counts[position[sampler(rng)]] += 1
        assert stats.chisquare(counts).pvalue > 0.05
    for g, a in [(graphs.complete(4), 16 / 27), (graphs.barbell(3, 0), 3 / 16)]:
        est = graphs.vanilla_rs_acceptance_estimate(rooted(g, 3), 100_000, seed=101)
        assert abs(est - a) <= 0.01


# --------------------------------------------------------------------- 11


def sketch_families():
    out = [("identity 0.5", 0.5 * np.eye(4), 0.4), ("identity 0.8", 0.8 * np.eye(6), 0.7)]
    barbell = rooted(graphs.barbell(3, 0), 3)
    Lb = graphs.reduced_laplacian(barbell, True)
    out.append(("barbell", Lb, 0.9 * smallest_eigenvalue(Lb)))
    for name, rg in [("hub K5", rooted(graphs.complete(5), 0)), ("hub fan6", rooted(fan(6), 0))]:
        out.append((name, graphs.reduced_laplacian(rg, True), graphs.theta1_for(rg, "hub")))
    for nv in (5, 6):
        rg = rooted(graphs.path(nv), 0)
        out.append((f"path{nv}", graphs.reduced_laplacian(rg, True), graphs.theta1_for(rg, "path")))
    return out


@criterion(11)
def test_sketching():
    """sketched acceptance lands in the relative band"""
    eps, delta = 0.1, 0.05
    for name, A, theta1 in sketch_families():
        lam = smallest_eigenvalue(A)
        assert theta1 < lam
        a = np.linalg.det(A)
        lo, hi = a ** (1 + 2 * eps), a ** (1 - 2 * eps)
        hits = 0
        for trial in range(200):
            a_hat, _ = sketch_logdet(A, SketchConfig(eps, delta, theta1, seed=[11, trial]))
            hits += lo <= a_hat <= hi
        assert hits / 200 >= 0.93, (name, hits)


# --------------------------------------------------------------------- 12


@criterion(12)
def test_epsilon_plan_curves():
    """curves approach 1 - a_hat and the bound holds on a sweep"""
    buf = io.StringIO()
    with redirect_stdout(buf):
        assert cli.main(["curves"]) == 0
    rows = [l.split(",") for l in buf.getvalue().splitlines() if l and not l.startswith("#")][1:]
    for a_hat in (0.05, 0.15, 0.30):
        mine = [r for r in rows if float(r[0]) == a_hat]
        first = min(mine, key=lambda r: float(r[1]))
        assert float(first[3]) >= 1 - a_hat - 1e-3

    rng = np.random.default_rng(120)
    checked = 0
    outside, outside_failures = 0, 0
    while checked < 100:
        n = int(rng.integers(3, 7))
        r = int(rng.integers(1, min(n, 4)))
        X = random_unit(rng, n, r)
        a = float(np.linalg.det(gram(X)))
        if not 1e-3 < a < 0.5:
            continue
        eps = float(rng.uniform(0.001, 0.2))
        a_hat = min(1.0, a ** (1 + 2 * eps - 4 * eps * rng.random()))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            plan = sampling.plan_from_estimate(a_hat, eps)
        measured = sim.project_hamming(sampling.amplified_state(X, plan.m), r)[1]
        if not plan.condition_holds:
            # outside the guarantee: tallied for the report, not asserted
            outside += 1
            outside_failures += measured < plan.q_lower_bound - 1e-12
            continue
        assert measured >= plan.q_lower_bound - 1e-12
        checked += 1
    print(f"bound violated on {outside_failures}/{outside} triples where (m + 1/2) theta_plus > pi/4")


# --------------------------------------------------------------------- 13


@criterion(13)
def test_spectral_formulas():
    """path eigenvalues, hub lower bound, complete-graph acceptance range"""
    for nv in range(3, 13):
        lam = smallest_eigenvalue(graphs.reduced_laplacian(rooted(graphs.path(nv), 0)))
        expected = 4 * math.sin(math.pi / (4 * nv - 2)) ** 2
        assert abs(lam - expected) <= 1e-8 * expected
    hubs = [graphs.complete(n) for n in range(3, 9)] + [graphs.star(n) for n in range(3, 9)]
    hubs += [fan(n) for n in range(4, 9)] + [wheel(n) for n in range(5, 9)]
    for g in hubs:
        assert smallest_eigenvalue(graphs.reduced_laplacian(rooted(g, 0))) >= 1 - 1e-10
    for n in range(3, 13):
        a = graphs.acceptance_probability(rooted(graphs.complete(n), 0))
        assert 2 / n <= a <= math.e / n


if __name__ == "__main__":
    tests = sorted((fn for fn in list(globals().values()) if hasattr(fn, "criterion")),
                   key=lambda fn: fn.criterion)
    for fn in tests:
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report and keep going
            status = f"FAIL ({type(exc).__name__}: {exc})"
        print(f"criterion {fn.criterion:2d}: {status}  {fn.__doc__.strip()}")
