"""Graphs as sources of DPPs over edges: incidence matrices, spanning trees,
dimer-rooted forests, and classical samplers used as oracles."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GraphError, KindMismatchError
from .numerics import normalize_columns


@dataclass(frozen=True)
class Graph:
    """Simple connected undirected graph; edges (i, j) with i < j, sorted."""

    n_nodes: int
    edges: tuple

    def __post_init__(self):
        edges = []
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise GraphError(f"self-loop at node {a}")
            if not (0 <= a < self.n_nodes and 0 <= b < self.n_nodes):
                raise GraphError(f"edge ({a}, {b}) outside 0..{self.n_nodes - 1}")
            edges.append((min(a, b), max(a, b)))
        edges.sort()
        if len(set(edges)) != len(edges):
            raise GraphError("duplicate edge")
        object.__setattr__(self, "edges", tuple(edges))
        if self.n_nodes < 1 or not self._connected():
            raise GraphError("graph must be non-empty and connected")

    def _connected(self):
        seen = {0}
        stack = [0]
        nbrs = self.neighbors()
        while stack:
            for v in nbrs[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n_nodes

    @property
    def n_edges(self):
        return len(self.edges)

    def neighbors(self):
        out = [[] for _ in range(self.n_nodes)]
        for a, b in self.edges:
            out[a].append(b)
            out[b].append(a)
        return out

    def degrees(self):
        return np.array([len(v) for v in self.neighbors()])

    def edge_index(self, edge):
        return self.edges.index((min(edge), max(edge)))


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int

    def __post_init__(self):
        if not 0 <= self.root < self.graph.n_nodes:
            raise GraphError(f"root {self.root} is not a node")

    @property
    def kept_nodes(self):
        return [v for v in range(self.graph.n_nodes) if v != self.root]


# ----------------------------------------------------------------- builders


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def barbell(n_clique, n_path):
    """Two n_clique-cliques joined through a path of n_path extra nodes."""
    if n_clique < 2:
        raise GraphError("barbell cliques need at least 2 nodes")
    second = n_clique + n_path
    edges = [(i, j) for i in range(n_clique) for j in range(i + 1, n_clique)]
    chain = [n_clique - 1] + list(range(n_clique, second)) + [second]
    edges += list(zip(chain[:-1], chain[1:]))
    edges += [(second + i, second + j) for i in range(n_clique) for j in range(i + 1, n_clique)]
    return Graph(second + n_clique, edges)


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(n):
    """Node 0 joined to nodes 1..n-1."""
    return Graph(n, [(0, i) for i in range(1, n)])


def square():
    """Four-cycle 0-1-3-2-0."""
    return Graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def read_edge_list(path_or_lines):
    """Parse ``i j`` pairs (0-based), one per line; '#' starts a comment."""
    if isinstance(path_or_lines, (str, os.PathLike)):
        with open(path_or_lines) as fh:
            lines = fh.read().splitlines()
    else:
        lines = list(path_or_lines)
    edges = []
    for raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line {raw!r}")
        edges.append((int(parts[0]), int(parts[1])))
    if not edges:
        raise GraphError("edge list is empty")
    n = max(max(e) for e in edges) + 1
    return Graph(n, edges)


# ----------------------------------------------------------------- matrices


def incidence(g):
    B = np.zeros((g.n_edges, g.n_nodes))
    for e, (i, j) in enumerate(g.edges):
        B[e, i] = 1.0
        B[e, j] = -1.0
    return B


def laplacian(g):
    B = incidence(g)
    return B.T @ B


def reduced_incidence(rg):
    return incidence(rg.graph)[:, rg.kept_nodes]


def loader_matrix(rg):
    """Incidence without the root column, columns scaled to unit norm."""
    return normalize_columns(reduced_incidence(rg))


def reduced_laplacian(rg, normalized=False):
    keep = rg.kept_nodes
    L = laplacian(rg.graph)[np.ix_(keep, keep)]
    if normalized:
        d = 1.0 / np.sqrt(rg.graph.degrees()[keep])
        L = L * np.outer(d, d)
    return L


def acceptance_probability(rg):
    """Spanning-tree count over the product of non-root degrees."""
    deg = rg.graph.degrees()[rg.kept_nodes]
    return float(np.linalg.det(reduced_laplacian(rg)) / np.prod(deg.astype(float)))


def count_spanning_trees(g):
    if g.n_nodes == 1:
        return 1
    value = np.linalg.det(reduced_laplacian(RootedGraph(g, 0)))
    count = int(round(value))
    if abs(value - count) > 1e-6 * max(1.0, abs(value)):
        raise ArithmeticError(f"tree count {value} is not close to an integer")
    return count


# ------------------------------------------------------- structural checks


def _union_find_acyclic(n_nodes, edges):
    parent = list(range(n_nodes))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def _edges_of(g, C):
    C = sorted(set(int(c) for c in C))
    if any(not 0 <= c < g.n_edges for c in C):
        raise GraphError("edge index out of range")
    return [g.edges[c] for c in C]


def is_spanning_tree(g, C):
    edges = _edges_of(g, C)
    return len(edges) == g.n_nodes - 1 and _union_find_acyclic(g.n_nodes, edges)


def _has_perfect_matching(n_vertices, adjacency):
    """Exhaustive search: match the lowest free vertex with each free neighbor."""
    full = (1 << n_vertices) - 1
    nbr_masks = [sum(1 << u for u in adjacency[v]) for v in range(n_vertices)]

    @lru_cache(maxsize=None)
    def solve(matched):
        if matched == full:
            return True
        free = ~matched & full
        v = (free & -free).bit_length() - 1
        options = nbr_masks[v] & free
        while options:
            low = options & -options
            if solve(matched | (1 << v) | low):
                return True
            options ^= low
        return False

    return n_vertices % 2 == 0 and solve(0)


def is_dimer_rooted_forest(rg, C):
    g = rg.graph
    edges = _edges_of(g, C)
    if not _union_find_acyclic(g.n_nodes, edges):
        return False
    if len(edges) % 2 != (g.n_nodes - 1) % 2:
        return False
    # augmented graph: edges of C become vertices tied to their non-root endpoints
    keep = rg.kept_nodes
    pos = {v: len(edges) + k for k, v in enumerate(keep)}
    adjacency = [set() for _ in range(len(edges) + len(keep))]
    for e, (a, b) in enumerate(edges):
        for v in (a, b):
            if v != rg.root:
                adjacency[e].add(pos[v])
                adjacency[pos[v]].add(e)
    for a, b in g.edges:
        if a != rg.root and b != rg.root:
            adjacency[pos[a]].add(pos[b])
            adjacency[pos[b]].add(pos[a])
    return _has_perfect_matching(len(adjacency), adjacency)


# ------------------------------------------------------- classical samplers


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def vanilla_rs_acceptance_estimate(rg, trials, seed=None, batch=20000):
    """Fraction of draws where every non-root node's random neighbor pointer
    leads to the root, i.e. the pointers form no cycle."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = _rng(seed)
    g = rg.graph
    nbrs = g.neighbors()
    deg = g.degrees()
    table = np.full((g.n_nodes, deg.max()), -1)
    for v, lst in enumerate(nbrs):
        table[v, : len(lst)] = lst
    steps = max(1, math.ceil(math.log2(g.n_nodes)) + 1)
    accepted = 0
    done = 0
    while done < trials:
        size = min(batch, trials - done)
        pick = (rng.random((size, g.n_nodes)) * deg).astype(np.int64)
        ptr = table[np.arange(g.n_nodes), pick]
        ptr[:, rg.root] = rg.root
        rows = np.arange(size)[:, None]
        for _ in range(steps):
            ptr = ptr[rows, ptr]
        accepted += int(np.all(ptr == rg.root, axis=1).sum())
        done += size
    return accepted / trials


def wilson_sample(rg, seed=None):
    """Uniform spanning tree by loop-erased random walks towards the root."""
    rng = _rng(seed)
    g = rg.graph
    nbrs = g.neighbors()
    in_tree = [False] * g.n_nodes
    in_tree[rg.root] = True
    nxt = [-1] * g.n_nodes
    for start in range(g.n_nodes):
        u = start
        while not in_tree[u]:
            nxt[u] = nbrs[u][int(rng.integers(len(nbrs[u])))]
            u = nxt[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return tuple(sorted(g.edge_index((v, nxt[v])) for v in range(g.n_nodes) if v != rg.root))


def theta1_for(rg, kind):
    """Strict lower bound on the smallest eigenvalue of the loader Gram matrix."""
    g = rg.graph
    nv = g.n_nodes
    deg = g.degrees()
    if kind == "hub":
        if deg[rg.root] != nv - 1:
            raise KindMismatchError("root is not adjacent to every other node")
        return 1.0 / nv
    if kind == "path":
        is_path = g.n_edges == nv - 1 and deg.max() <= 2
        if not is_path or deg[rg.root] != 1:
            raise KindMismatchError("graph is not a path rooted at an endpoint")
        return math.sin(math.pi / (4 * nv - 2)) ** 2
    raise ValueError(f"unknown kind {kind!r}; expected 'hub' or 'path'")
