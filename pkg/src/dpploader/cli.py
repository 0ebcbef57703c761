"""Command-line interface: ``dpploader {sample,enumerate,export,curves}``.

Every command writes versioned CSV (or QASM for ``export``) to ``--out``
or stdout. Exit codes: 0 ok, 1 usage, 2 trial budget exceeded, 3 numeric
failure.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
import warnings

import numpy as np

from . import dpp, graphs, sampling
from . import simulator as sim
from .circuits import ARCHITECTURES, build_grover, build_state_loader, plan_loader
from .errors import DPPLoaderError, GraphError, TrialBudgetExceeded
from .numerics import gram, normalize_columns
from .qasm import export_qasm, gate_counts

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ----------------------------------------------------------------- sources


class Source:
    """The ground set: either the edges of a rooted graph or the rows of a matrix."""

    def __init__(self, X, labels, rooted=None):
        self.X = X
        self.labels = labels
        self.rooted = rooted

    def format_subset(self, subset):
        return " ".join(self.labels[i] for i in subset)


def parse_graph(spec):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "complete":
            return graphs.complete(int(rest))
        if kind == "barbell":
            a, b = rest.split(":")
            return graphs.barbell(int(a), int(b))
        if kind == "path":
            return graphs.path(int(rest))
        if kind == "star":
            return graphs.star(int(rest))
        if kind == "square" and not rest:
            return graphs.square()
        if kind == "file":
            return graphs.read_edge_list(rest)
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad --graph {spec!r}: {exc}") from exc
    raise UsageError(f"unknown --graph {spec!r}")


def load_source(args):
    if (args.graph is None) == (args.matrix is None):
        raise UsageError("give exactly one of --graph or --matrix")
    if args.graph is not None:
        g = parse_graph(args.graph)
        root = args.root
        if root is None:
            root = int(np.argmax(g.degrees()))
        if not 0 <= root < g.n_nodes:
            raise UsageError(f"--root {root} is not a node of the graph")
        rg = graphs.RootedGraph(g, root)
        labels = [f"{i}-{j}" for i, j in g.edges]
        return Source(graphs.loader_matrix(rg), labels, rg)
    try:
        M = np.loadtxt(args.matrix, delimiter="," if args.matrix.endswith(".csv") else None, ndmin=2)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read --matrix {args.matrix!r}: {exc}") from exc
    return Source(normalize_columns(M), [str(i) for i in range(M.shape[0])])


def parse_m(text):
    """``None``, a single integer, or an inclusive range ``a..b``."""
    if text is None:
        return None
    try:
        if ".." in text:
            lo, hi = text.split("..")
            lo, hi = int(lo), int(hi)
            if lo < 0 or hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        m = int(text)
        if m < 0:
            raise ValueError
        return m
    except ValueError as exc:
        raise UsageError(f"bad --m {text!r}; expected N or A..B") from exc


def _fmt(x):
    return f"{x:.12g}"


def _csv(command, header, rows, comments=()):
    buf = io.StringIO()
    buf.write(f"# dpploader {command} v1\n")
    for c in comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(str(v) for v in row) + "\n")
    return buf.getvalue()


def _subset_key(subset):
    return (len(subset), subset)


# ----------------------------------------------------------------- commands


def cmd_sample(args):
    src = load_source(args)
    Xu = src.X
    r = Xu.shape[1]
    a = float(np.linalg.det(gram(Xu)))
    m_opt = parse_m(args.m)
    seed = args.seed

    if isinstance(m_opt, list):
        rows = []
        psi = sampling.loaded_state(Xu, args.arch)
        state = psi
        for m in range(max(m_opt) + 1):
            if m in m_opt:
                exact = sim.project_hamming(state, r)[1]
                idx = sim.sample_indices(state, args.samples, sampling.run_rng(seed, m))
                emp = float(np.mean(sim.hamming_weights(state.width)[idx] == r))
                rows.append([m, _fmt(exact), _fmt(sampling.amplified_probability(min(a, 1.0), m)),
                             _fmt(emp), args.samples])
            state = sim.grover_step_operator(state, psi, r)
        return _csv("sample", ["m", "acceptance_exact", "acceptance_formula",
                               "acceptance_empirical", "measurements"], rows,
                    [f"a={_fmt(a)}", f"r={r}"])

    comments = [f"algo={args.algo}", f"arch={args.arch}", f"a={_fmt(a)}"]
    if args.algo == "rs":
        m = 0 if m_opt is None else m_opt
    elif args.algo == "amp":
        m = sampling.num_grover_iterations(min(a, 1.0)) if m_opt is None else m_opt
    else:
        if args.theta1 is None:
            raise UsageError("--algo amp-sketch needs --theta1")
        from .sketch import SketchConfig, sketch_logdet

        a_hat, _ = sketch_logdet(gram(Xu), SketchConfig(args.eps, args.delta, args.theta1,
                                                        seed=sampling.run_rng(seed, args.samples)))
        a_hat = min(a_hat, 1.0)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            plan = sampling.plan_from_estimate(a_hat, args.eps)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        m = plan.m if m_opt is None else m_opt
        comments += [f"a_hat={_fmt(a_hat)}", f"q_lower_bound={_fmt(plan.q_lower_bound)}"]
    comments.append(f"m={m}")

    state = sampling.amplified_state(Xu, m, args.arch)
    sampler = sampling.RejectionSampler(state, r, args.budget)
    results = sampler.sample_many(args.samples, seed)
    counts = {}
    for res in results:
        counts[res.subset] = counts.get(res.subset, 0) + 1
    trials = sum(res.trials for res in results)
    comments += [f"samples={args.samples}", f"trials={trials}",
                 f"acceptance_rate={_fmt(args.samples / trials)}",
                 f"acceptance_exact={_fmt(sim.project_hamming(state, r)[1])}"]
    rows = []
    for subset in sorted(counts, key=_subset_key):
        rows.append([src.format_subset(subset), counts[subset],
                     _fmt(counts[subset] / args.samples), _fmt(dpp.conditioned_pmf(Xu, subset))])
    print(f"samples={args.samples} trials={trials} acceptance_rate={args.samples / trials:.4f}",
          file=sys.stderr)
    return _csv("sample", ["subset", "count", "frequency", "exact"], rows, comments)


def cmd_enumerate(args):
    src = load_source(args)
    Xu = src.X
    n, r = Xu.shape
    dist = dpp.enumerate_pmf(dpp.SkewEnsemble.from_loader(Xu))
    freq = {}
    if args.samples > 0:
        state = sampling.loaded_state(Xu, args.arch)
        idx = sim.sample_indices(state, args.samples, sampling.run_rng(args.seed, 0))
        for i, c in zip(*np.unique(idx, return_counts=True)):
            bits = sim.index_to_bits(i, n)
            freq[tuple(q for q in range(n) if bits[q])] = c / args.samples
    rows = []
    for subset in sorted(dist.entries, key=_subset_key):
        if not args.all_subsets and len(subset) % 2 != r % 2:
            continue
        rows.append([src.format_subset(subset), len(subset), _fmt(max(dist.entries[subset], 0.0)),
                     _fmt(freq.get(subset, 0.0))])
    return _csv("enumerate", ["subset", "size", "exact", "empirical"], rows,
                [f"r={r}", f"samples={args.samples}"])


def cmd_export(args):
    src = load_source(args)
    m = parse_m(args.m)
    if isinstance(m, list):
        raise UsageError("export takes a single --m")
    circ = build_state_loader(src.X, args.arch) if not m else build_grover(src.X, m, arch=args.arch)
    counts = gate_counts(circ)
    print("gate counts: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())), file=sys.stderr)
    rot = {a: sum(len(plan_loader(src.X[:, c], a).rotations) for c in range(src.X.shape[1]))
           for a in ARCHITECTURES}
    print("rotations per architecture: " + ", ".join(f"{a}={rot[a]}" for a in ARCHITECTURES),
          file=sys.stderr)
    return export_qasm(circ)


def cmd_curves(args):
    try:
        a_hats = [float(v) for v in args.ahat.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --ahat {args.ahat!r}") from exc
    eps_grid = np.linspace(args.eps_min, args.eps_max, args.points)
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for a_hat in a_hats:
            for eps in eps_grid:
                p = sampling.plan_from_estimate(a_hat, float(eps))
                rows.append([_fmt(a_hat), _fmt(eps), p.m, _fmt(p.q_lower_bound),
                             int(p.condition_holds), _fmt(1 - a_hat)])
    return _csv("curves", ["a_hat", "epsilon", "m", "q", "condition_holds", "one_minus_a_hat"], rows)


# ----------------------------------------------------------------- parser


def build_parser():
    parser = _Parser(prog="dpploader", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, samples=1000):
        p.add_argument("--graph", help="complete:n | barbell:n1:n2 | path:n | star:n | square | file:PATH")
        p.add_argument("--matrix", help="text/CSV file with the n x r matrix X")
        p.add_argument("--root", type=int, help="root node (default: a node of maximum degree)")
        p.add_argument("--arch", choices=ARCHITECTURES, default="sparse")
        p.add_argument("--m", help="Grover iterations N, or a sweep A..B")
        p.add_argument("--samples", type=int, default=samples)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("sample", help="run a sampler and tabulate accepted subsets")
    common(p)
    p.add_argument("--algo", choices=("rs", "amp", "amp-sketch"), default="rs")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--theta1", type=float)
    p.add_argument("--budget", type=int, default=sampling.DEFAULT_BUDGET)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enumerate", help="exact law of the loaded state with empirical frequencies")
    common(p, samples=10000)
    p.add_argument("--all-subsets", action="store_true", help="include parity-violating subsets")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("export", help="write the loader (or Grover) circuit as OpenQASM 3")
    common(p)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("curves", help="Grover count and acceptance bound versus epsilon")
    p.add_argument("--ahat", default="0.05,0.15,0.30")
    p.add_argument("--eps-min", type=float, default=0.001)
    p.add_argument("--eps-max", type=float, default=0.05)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=cmd_curves)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", 1) < 0:
        parser.error("--samples must be nonnegative")
    if args.command == "sample" and args.samples < 1:
        parser.error("sample needs --samples >= 1")
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"dpploader: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GraphError as exc:
        print(f"dpploader: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TrialBudgetExceeded as exc:
        print(f"dpploader: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DPPLoaderError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"dpploader: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
