"""Compiled kernels versus the numpy fallback.

    python3 benchmarks/bench_kernels.py [--widths 10 14 18] [--gates 200] [--repeat 3]
"""
import argparse
import time

import numpy as np

from dpploader import circuits as C
from dpploader import graphs, kernels
from dpploader import simulator as sim


def random_circuit(rng, w, n_gates):
    gates = []
    for _ in range(n_gates):
        i, j = sorted(rng.choice(w, size=2, replace=False).tolist())
        t = float(rng.uniform(-np.pi, np.pi))
        pick = int(rng.integers(6))
        if pick == 0:
            gates.append(C.H(i))
        elif pick == 1:
            gates.append(C.Rz(j, t))
        elif pick == 2:
            gates.append(C.CZ(i, j))
        elif pick == 3:
            gates.append(C.CRz(i, j, t))
        elif j > i + 1:
            gates.append(C.FBS(i, j, t))
        else:
            gates.append(C.RBS(i, j, t))
    return C.Circuit(w, gates)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--widths", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--gates", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the numpy fallback only")

    rng = np.random.default_rng(0)
    workloads = []
    for w in args.widths:
        workloads.append((f"random w={w}", random_circuit(rng, w, args.gates)))
    X = graphs.loader_matrix(graphs.RootedGraph(graphs.barbell(3, 1), 0))
    workloads.append(("grover barbell(3,1) m=2", C.build_grover(X, 2)))

    print(f"{'workload':28s} {'gates':>6s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, circ in workloads:
        secs = [best_of(lambda b=b: sim.run(circ, b), args.repeat) for b in backends]
        speedup = f"{secs[0] / secs[1]:8.1f}x" if len(secs) == 2 else ""
        print(f"{name:28s} {len(circ.gates):6d} " + " ".join(f"{s * 1e3:8.2f}ms" for s in secs) + "  " + speedup)


if __name__ == "__main__":
    main()
