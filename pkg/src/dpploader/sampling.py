"""End-to-end samplers: plain rejection sampling on the loaded state, and
amplitude-amplified variants with exact or sketched acceptance probability."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import simulator as sim
from .circuits import build_grover, build_state_loader, register_size_for
from .errors import OutOfRangeError, TrialBudgetExceeded
from .numerics import _as_matrix, gram, normalize_columns, smallest_eigenvalue
from .sketch import SketchConfig, sketch_logdet

DEFAULT_BUDGET = 10 ** 6
_BATCH = 4096


@dataclass(frozen=True)
class SampleResult:
    bits: tuple
    trials: int

    @property
    def subset(self):
        return tuple(q for q, b in enumerate(self.bits) if b)


@dataclass(frozen=True)
class AmplificationPlan:
    a_estimate: float
    epsilon: float
    m: int
    q_lower_bound: float
    theta_plus: float
    condition_holds: bool


# ----------------------------------------------------------------- arithmetic


def _check_a(a):
    if not 0 < a <= 1:
        raise OutOfRangeError(f"acceptance probability {a} outside (0, 1]")


def num_grover_iterations(a):
    _check_a(a)
    if a >= 0.5:
        return 0
    return math.floor(math.pi / (4 * math.asin(math.sqrt(a))))


def amplified_probability(a, m):
    _check_a(a)
    if m < 0:
        raise OutOfRangeError("m must be nonnegative")
    return math.sin((2 * m + 1) * math.asin(math.sqrt(a))) ** 2


def plan_from_estimate(a_hat, epsilon):
    """Grover count and guaranteed acceptance for an estimate within
    ``a^(1+2 eps) <= a_hat <= a^(1-2 eps)`` of the true value.

    The guarantee needs ``(m + 1/2) theta_plus <= pi/4``; when that fails a
    warning is issued and ``condition_holds`` is False.
    """
    _check_a(a_hat)
    if not 0 < epsilon < 0.5:
        raise OutOfRangeError(f"epsilon {epsilon} outside (0, 1/2)")
    theta_plus = math.asin(a_hat ** (1 / (2 + 4 * epsilon)))
    theta_minus = math.asin(a_hat ** (1 / (2 - 4 * epsilon)))
    if a_hat ** (1 / (1 + 2 * epsilon)) < 0.5:
        m = math.floor(math.pi / (4 * theta_plus))
    else:
        m = 0
    q = math.sin((2 * m + 1) * theta_minus) ** 2
    holds = (m + 0.5) * theta_plus <= math.pi / 4
    if not holds:
        warnings.warn(
            f"(m + 1/2) * theta_plus = {(m + 0.5) * theta_plus:.4f} exceeds pi/4; "
            "q_lower_bound is not guaranteed for this estimate",
            RuntimeWarning,
            stacklevel=2,
        )
    return AmplificationPlan(a_hat, epsilon, m, q, theta_plus, holds)


# ------------------------------------------------------------- state prep


def loaded_state(Xu, arch="sparse", backend=None):
    return sim.run(build_state_loader(Xu, arch), backend)


def amplified_state(Xu, m, arch="sparse", gate_level=False, backend=None):
    """Q^m applied to the loaded state of Xu, as an n-qubit state.

    The gate-level path runs the ancilla circuit and checks that the
    ancillas and padding qubits return to zero.
    """
    Xu = _as_matrix(Xu)
    n, r = Xu.shape
    if not gate_level:
        psi = loaded_state(Xu, arch, backend)
        state = psi
        for _ in range(m):
            state = sim.grover_step_operator(state, psi, r)
        return state
    k = register_size_for(n)
    full = sim.run(build_grover(Xu, m, k, arch), backend)
    data, leak = sim.reduce_ancillas(full, k)
    data, pad_leak = sim.strip_padding(data, n, 2 ** k - 1 - n)
    if leak > 1e-8 or pad_leak > 1e-8:
        raise ArithmeticError(f"ancilla leakage {leak:.2e}, padding leakage {pad_leak:.2e}")
    return sim.StateVector(data, n, normalized=False)


class RejectionSampler:
    """Measures a fixed prepared state until the Hamming weight equals r.

    Each measurement is an independent draw from the Born law of the same
    state, which is what re-preparing the state for every trial produces.
    """

    def __init__(self, state, r, budget=DEFAULT_BUDGET):
        self.state = state
        self.r = r
        self.budget = budget
        self._cdf = np.cumsum(state.probabilities())
        self._weights = sim.hamming_weights(state.width)

    def sample(self, seed=None):
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        trials = 0
        total = self._cdf[-1]
        while trials < self.budget:
            size = min(_BATCH, self.budget - trials)
            u = rng.random(size) * total
            idx = np.minimum(np.searchsorted(self._cdf, u, side="right"), self._cdf.size - 1)
            hits = np.flatnonzero(self._weights[idx] == self.r)
            if hits.size:
                first = int(hits[0])
                bits = sim.index_to_bits(int(idx[first]), self.state.width)
                return SampleResult(bits, trials + first + 1)
            trials += size
        raise TrialBudgetExceeded(self.budget)

    def sample_many(self, runs, seed=None):
        """Independent runs; run i uses the stream seeded by [seed, i]."""
        if seed is None:
            seed = int(np.random.SeedSequence().entropy % 2 ** 63)
        return [self.sample(run_rng(seed, i)) for i in range(runs)]


def run_rng(seed, index):
    return np.random.default_rng([int(seed), int(index)])


# --------------------------------------------------------------- pipelines


def rejection_sample(X, arch="sparse", seed=None, budget=DEFAULT_BUDGET, backend=None):
    Xu = normalize_columns(X)
    sampler = RejectionSampler(loaded_state(Xu, arch, backend), Xu.shape[1], budget)
    return sampler.sample(seed)


def amplified_sample_known_a(X, seed=None, arch="sparse", gate_level=False,
                             budget=DEFAULT_BUDGET, backend=None):
    Xu = normalize_columns(X)
    a = float(np.linalg.det(gram(Xu)))
    m = num_grover_iterations(min(a, 1.0))
    state = amplified_state(Xu, m, arch, gate_level, backend)
    return RejectionSampler(state, Xu.shape[1], budget).sample(seed)


@dataclass(frozen=True)
class SketchedSampleResult:
    bits: tuple
    trials: int
    a_hat: float
    plan: AmplificationPlan

    @property
    def subset(self):
        return tuple(q for q, b in enumerate(self.bits) if b)


def amplified_sample_sketched(X, epsilon, delta, theta1, seed=None, arch="sparse",
                              budget=DEFAULT_BUDGET, check_theta1=False):
    Xu = normalize_columns(X)
    G = gram(Xu)
    if check_theta1 and not theta1 < smallest_eigenvalue(G):
        raise OutOfRangeError("theta1 is not below the smallest eigenvalue")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    a_hat, _ = sketch_logdet(G, SketchConfig(epsilon, delta, theta1, seed=rng))
    a_hat = min(a_hat, 1.0)
    plan = plan_from_estimate(a_hat, epsilon)
    state = amplified_state(Xu, plan.m, arch)
    res = RejectionSampler(state, Xu.shape[1], budget).sample(rng)
    return SketchedSampleResult(res.bits, res.trials, a_hat, plan)
