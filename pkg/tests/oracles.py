"""Slow, direct reference implementations used only by the tests."""
import itertools
import math

import numpy as np

I2 = np.eye(2)
Z = np.diag([1.0, -1.0])
XM = np.array([[0.0, 1.0], [1.0, 0.0]])
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]])  # |0> -> |1>


def kron_all(mats):
    out = np.eye(1)
    for m in mats:
        out = np.kron(out, m)
    return out


def creation(q, n):
    """Jordan-Wigner creation operator on qubit q of n (qubit 0 leftmost)."""
    return kron_all([Z] * q + [SIGMA_PLUS] + [I2] * (n - q - 1))


def majorana(q, n):
    c = creation(q, n)
    return c + c.T


def clifford_matrix(x):
    n = len(x)
    return sum(x[q] * majorana(q, n) for q in range(n))


def loaded_state_dense(X):
    """C(x_1)...C(x_r)|0...0> by dense matrices."""
    X = np.asarray(X, dtype=float)
    n, r = X.shape
    v = np.zeros(2 ** n)
    v[0] = 1.0
    for col in range(r - 1, -1, -1):
        v = clifford_matrix(X[:, col]) @ v
    return v


def pfaffian_contractions(A):
    """Sum over perfect matchings with crossing signs (recursive expansion)."""
    A = np.asarray(A)
    n = A.shape[0]
    if n == 0:
        return 1.0
    if n % 2:
        return 0.0
    total = 0.0
    for j in range(1, n):
        if A[0, j] == 0:
            continue
        rest = [k for k in range(1, n) if k != j]
        total += (-1) ** (j - 1) * A[0, j] * pfaffian_contractions(A[np.ix_(rest, rest)])
    return total


def givens_dense(i, j, theta, n, fermionic):
    """Direct construction of RBS/FBS from its action on basis states."""
    dim = 2 ** n
    U = np.zeros((dim, dim))
    c, s = math.cos(theta), math.sin(theta)
    for idx in range(dim):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        sign = (-1) ** sum(bits[i + 1:j]) if fermionic else 1
        if bits[i] == bits[j]:
            U[idx, idx] = 1.0
            continue
        other = bits.copy()
        other[i], other[j] = bits[j], bits[i]
        jdx = int("".join(map(str, other)), 2)
        if bits[i] == 1:  # |i> -> c|i> + sign s|j>
            U[idx, idx] = c
            U[jdx, idx] = sign * s
        else:  # |j> -> -sign s|i> + c|j>
            U[idx, idx] = c
            U[jdx, idx] = -sign * s
    return U


def enumerate_loaded_probabilities(X):
    v = loaded_state_dense(X)
    return np.abs(v) ** 2


def all_subsets(n):
    for size in range(n + 1):
        yield from itertools.combinations(range(n), size)


def dft_matrix(k):
    """Fourier matrix in the little-endian control encoding of the package."""
    N = 2 ** k
    F = np.exp(2j * np.pi * np.outer(np.arange(N), np.arange(N)) / N) / math.sqrt(N)
    # statevector index of the integer s: qubit l (bit l of s) sits at position k-1-l
    perm = np.array([int(format(s, f"0{k}b")[::-1], 2) for s in range(N)])
    P = np.zeros((N, N))
    P[perm, np.arange(N)] = 1.0
    return P @ F @ P.T


def count_spanning_trees_brute(nodes, edges):
    count = 0
    for C in itertools.combinations(range(len(edges)), nodes - 1):
        parent = list(range(nodes))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        ok = True
        for e in C:
            a, b = find(edges[e][0]), find(edges[e][1])
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count
