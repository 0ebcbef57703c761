"""Exact laws of projection DPPs and of the skew-kernel DPP produced by a
product of Clifford loaders, plus the classical chain-rule sampler.

Subsets are sorted tuples of 0-based item indices.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    GroundSetTooLargeError,
    NotUnitNormError,
    WrongCardinalityError,
)
from .numerics import (
    _as_matrix,
    check_rank,
    gram,
    has_unit_columns,
    inverse_sqrt_psd,
    is_skew_symmetric,
    pfaffian,
    skew_part,
    youla,
)

MAX_ENUMERATION = 22


@dataclass(frozen=True)
class SkewEnsemble:
    """Pair (X, A): X is n x r of rank r and A is r x r skew-symmetric."""

    X: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        X = _as_matrix(self.X)
        A = np.asarray(self.A, dtype=float).reshape(X.shape[1], X.shape[1])
        check_rank(X)
        if not is_skew_symmetric(A):
            raise ValueError("A must be exactly skew-symmetric")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "A", A)
        if np.linalg.det(A + gram(X)) <= 0:
            raise ValueError("det(A + X^T X) must be positive")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def r(self):
        return self.X.shape[1]

    @classmethod
    def from_loader(cls, Xu):
        """Ensemble whose law is that of measuring the loaded state of Xu."""
        Xu = _require_unit(Xu)
        return cls(Xu, skew_part(gram(Xu)))


@dataclass
class SubsetDistribution:
    ground_size: int
    entries: dict

    def total(self):
        return float(sum(self.entries.values()))

    def support(self, tol=0.0):
        return {C: p for C, p in self.entries.items() if p > tol}

    def cardinality_marginal(self):
        out = np.zeros(self.ground_size + 1)
        for C, p in self.entries.items():
            out[len(C)] += p
        return out

    def inclusion_probability(self, items):
        items = set(items)
        return float(sum(p for C, p in self.entries.items() if items.issubset(C)))


def _require_unit(Xu):
    Xu = _as_matrix(Xu)
    if not has_unit_columns(Xu):
        raise NotUnitNormError("columns must have unit norm")
    return Xu


def _subset(C):
    return tuple(sorted(int(c) for c in C))


# ------------------------------------------------------------ projection DPP


def hkpv_sample(X, seed=None):
    """Chain-rule sample of the projection DPP onto range(X)."""
    X = _as_matrix(X)
    check_rank(X)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Q, _ = np.linalg.qr(X)
    n, r = Q.shape
    chosen = []
    for _ in range(r):
        weights = np.einsum("ij,ij->i", Q, Q)
        weights[chosen] = 0.0
        weights = np.clip(weights, 0.0, None)
        i = int(rng.choice(n, p=weights / weights.sum()))
        chosen.append(i)
        v = Q[i] / np.linalg.norm(Q[i])
        Q = Q - np.outer(Q @ v, v)
    return tuple(sorted(chosen))


def conditioned_pmf(X, C):
    X = _as_matrix(X)
    C = _subset(C)
    if len(C) != X.shape[1]:
        raise WrongCardinalityError(f"|C| = {len(C)} but r = {X.shape[1]}")
    d = np.linalg.det(X[list(C), :])
    return float(d * d / np.linalg.det(gram(X)))


# ------------------------------------------------------------ skew-kernel DPP


def bordered_matrix(X, A, C):
    """[[0, X_C], [-X_C^T, A]] for the rows C of X."""
    C = list(_subset(C))
    ell, r = len(C), X.shape[1]
    M = np.zeros((ell + r, ell + r))
    XC = X[C, :]
    M[:ell, ell:] = XC
    M[ell:, :ell] = -XC.T
    M[ell:, ell:] = A
    return M


def _bordered_det(X, A, C):
    if (len(C) + X.shape[1]) % 2:
        return 0.0  # odd-dimensional skew matrix
    return float(np.linalg.det(bordered_matrix(X, A, C)))


def skew_dpp_pmf(E, C):
    return _bordered_det(E.X, E.A, C) / float(np.linalg.det(E.A + gram(E.X)))


def loader_dpp_pmf(Xu, C):
    """Probability of observing C after loading the columns of Xu."""
    Xu = _require_unit(Xu)
    return _bordered_det(Xu, skew_part(gram(Xu)), C)


def _batched_bordered_dets(X, A, size):
    n, r = X.shape
    subsets = list(itertools.combinations(range(n), size))
    if (size + r) % 2:
        return subsets, np.zeros(len(subsets))
    if size == 0:
        return subsets, np.array([np.linalg.det(A)])
    idx = np.array(subsets)
    M = np.zeros((len(subsets), size + r, size + r))
    XC = X[idx]  # (batch, size, r)
    M[:, :size, size:] = XC
    M[:, size:, :size] = -np.transpose(XC, (0, 2, 1))
    M[:, size:, size:] = A
    return subsets, np.linalg.det(M)


def enumerate_pmf(E):
    if E.n > MAX_ENUMERATION:
        raise GroundSetTooLargeError(f"n = {E.n} exceeds {MAX_ENUMERATION}")
    norm = float(np.linalg.det(E.A + gram(E.X)))
    entries = {}
    for size in range(E.n + 1):
        subsets, dets = _batched_bordered_dets(E.X, E.A, size)
        entries.update(zip(subsets, (dets / norm).tolist()))
    return SubsetDistribution(E.n, entries)


def correlation_kernel(E):
    return E.X @ np.linalg.solve(E.A + gram(E.X), E.X.T)


def cardinality_law(E):
    """Distribution of |Y| as an array indexed by cardinality 0..r."""
    G_inv_half = inverse_sqrt_psd(gram(E.X))
    S = G_inv_half @ E.A @ G_inv_half
    S = 0.5 * (S - S.T)
    nus = youla(S).nus
    law = np.array([1.0])
    for nu in nus:
        p = 1.0 / (1.0 + nu * nu)
        law = np.convolve(law, [1.0 - p, p])
    out = np.zeros(E.r + 1)
    out[(E.r % 2) + 2 * np.arange(law.size)] = law
    return out


# ---------------------------------------------------------- loaded amplitudes


def state_coefficients(Xu):
    """Amplitude of every basis state |S> in C(x_1)...C(x_r)|0...0>.

    |S> for ascending S is the occupation-number state, equal to
    ``c*_{s_1} ... c*_{s_l}|0>`` (creation order reversed from S), so the
    amplitude is ``(-1)^{l(l-1)/2}`` times the bordered Pfaffian.
    """
    Xu = _require_unit(Xu)
    n, r = Xu.shape
    if n > MAX_ENUMERATION:
        raise GroundSetTooLargeError(f"n = {n} exceeds {MAX_ENUMERATION}")
    A = skew_part(gram(Xu))
    out = {}
    for size in range(r % 2, n + 1, 2):
        sign = -1.0 if (size * (size - 1) // 2) % 2 else 1.0
        for S in itertools.combinations(range(n), size):
            out[S] = sign * float(pfaffian(bordered_matrix(Xu, A, S)))
    return out


def loaded_amplitudes(Xu):
    """``state_coefficients`` laid out as a statevector (qubit 0 most significant)."""
    Xu = _as_matrix(Xu)
    n = Xu.shape[0]
    v = np.zeros(2 ** n)
    for S, amp in state_coefficients(Xu).items():
        v[sum(1 << (n - 1 - q) for q in S)] = amp
    return v


def overlap(Xu, Xv):
    """<columns(Xv)|columns(Xu)> via the vacuum expectation of Majorana products.

    The bra contributes its columns in reverse order, so the product reads
    ``C(v_r')...C(v_1) C(u_1)...C(u_r)`` and its vacuum expectation is the
    Pfaffian of the skew part of the Gram matrix of that sequence.
    """
    Xu, Xv = _require_unit(Xu), _require_unit(Xv)
    if (Xu.shape[1] + Xv.shape[1]) % 2:
        return 0.0
    V = np.hstack([Xv[:, ::-1], Xu])
    return float(pfaffian(skew_part(gram(V))))
