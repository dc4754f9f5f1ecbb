"""Differential-privacy primitives.

Laplace noise, the exponential mechanism, a bounded-quality selection
mechanism with an abstain outcome, a pluggable private median over a
finite ordered domain, and composition accounting. Mechanisms are pure
given their random stream; concurrent calls need distinct streams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class PrivacyParams:
    """An (epsilon, delta) privacy budget.

    Zero epsilon is allowed so that composition arithmetic can express a
    free stage; mechanisms that actually spend budget require it positive.
    """

    epsilon: float
    delta: float = 0.0

    def __post_init__(self) -> None:
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not 0 <= self.delta < 1:
            raise ValueError("delta must be in [0, 1)")


@dataclass(frozen=True)
class ChoosingInstance:
    """Scores of a k-bounded quality function over a finite solution set.

    A quality is k-bounded when adding one dataset element raises at most
    ``k`` solution scores, each by exactly 1; ``n`` is the dataset size.
    """

    scores: Mapping[Hashable, int]
    k: int
    n: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if any(v < 0 for v in self.scores.values()):
            raise ValueError("scores must be nonnegative")


def laplace_sample(scale: float, rng: np.random.Generator) -> float:
    """One draw from the Laplace density ``exp(-|x|/b) / 2b``.

    Inverse-CDF from a single uniform draw, so a fixed stream position
    always yields the same noise.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    u = rng.random()
    w = 2.0 * u - 1.0
    w = max(w, -1.0 + 2.0 ** -53)
    return -scale * math.copysign(1.0, w) * math.log1p(-abs(w))


def exponential_mechanism(
    candidates: Sequence[tuple[Hashable, float]],
    sensitivity: float,
    epsilon: float,
    rng: np.random.Generator,
) -> Hashable:
    """Select an id with probability proportional to exp(eps * score / (2 * sens)).

    Scores are shifted by their maximum before exponentiation, so scores as
    large as the dataset never overflow.
    """
    if not candidates:
        raise ValueError("empty candidate list")
    if sensitivity <= 0:
        raise ValueError("sensitivity must be positive")
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    ids = [c[0] for c in candidates]
    scores = np.array([c[1] for c in candidates], dtype=np.float64)
    logits = epsilon * scores / (2.0 * sensitivity)
    logits -= logits.max()
    weights = np.exp(logits)
    probs = weights / weights.sum()
    return ids[int(rng.choice(len(ids), p=probs))]


def choosing_mechanism(
    inst: ChoosingInstance,
    privacy: PrivacyParams,
    beta: float,
    rng: np.random.Generator,
    *,
    gate_noise_scale: float = 4.0,
    gate_threshold_scale: float = 4.0,
) -> Hashable | None:
    """Privately select a high-scoring solution of a k-bounded quality, or abstain.

    Gate-then-choose: the noisy maximum score is tested against a
    threshold; below it the mechanism abstains (returns ``None``),
    otherwise half the budget runs the exponential mechanism over the
    solutions with nonzero score (at most k*n of them). With probability at
    least 1 - beta the returned solution scores within
    ``(16 / eps) * ln(4 k n / (beta eps delta))`` of the maximum.
    """
    eps = privacy.epsilon
    if not 0 < eps < 2:
        raise ValueError("epsilon must be in (0, 2)")
    if privacy.delta <= 0:
        raise ValueError("delta must be positive")
    if not 0 < beta < 1:
        raise ValueError("beta must be in (0, 1)")
    best = max(inst.scores.values(), default=0)
    n_eff = max(inst.n, 1)
    threshold = (gate_threshold_scale / eps) * math.log(
        4.0 * inst.k * n_eff / (beta * eps * privacy.delta)
    )
    if best + laplace_sample(gate_noise_scale / eps, rng) < threshold:
        return None
    active = [(z, float(s)) for z, s in inst.scores.items() if s >= 1]
    if not active:
        return None
    return exponential_mechanism(active, 1.0, eps / 2.0, rng)


def choosing_utility_bound(inst: ChoosingInstance, privacy: PrivacyParams, beta: float) -> float:
    """The score gap the selection mechanism guarantees with probability 1 - beta."""
    n_eff = max(inst.n, 1)
    return (16.0 / privacy.epsilon) * math.log(
        4.0 * inst.k * n_eff / (beta * privacy.epsilon * privacy.delta)
    )


MedianBackend = Callable[
    [Sequence[int], int, float, PrivacyParams, float, np.random.Generator], int
]


def rank_utility_median_backend(
    values: Sequence[int],
    domain_max: int,
    alpha: float,
    privacy: PrivacyParams,
    beta: float,
    rng: np.random.Generator,
) -> int:
    """Exponential mechanism over [0, domain_max] with rank utility.

    The utility of a candidate m is ``min(#{v <= m}, #{v >= m})``, which
    has sensitivity 1 and peaks at true medians, giving a pure
    epsilon-DP mechanism. ``beta`` enters only through the sample-size
    requirement (:func:`required_median_size`), not the sampling itself.
    """
    vals = np.sort(np.asarray(values, dtype=np.int64))
    cands = np.arange(domain_max + 1)
    n_le = np.searchsorted(vals, cands, side="right")
    n_ge = len(vals) - np.searchsorted(vals, cands, side="left")
    utility = np.minimum(n_le, n_ge).astype(np.float64)
    logits = privacy.epsilon * utility / 2.0
    logits -= logits.max()
    weights = np.exp(logits)
    probs = weights / weights.sum()
    return int(rng.choice(len(cands), p=probs))


def private_median(
    values: Sequence[int],
    domain_max: int,
    alpha: float,
    privacy: PrivacyParams,
    beta: float,
    rng: np.random.Generator,
    *,
    backend: MedianBackend | None = None,
) -> int:
    """A private alpha-median of integer values in [0, domain_max].

    With probability at least 1 - beta the output m has at least a
    (1/2 - alpha) fraction of the values on each side, provided the input
    is at least :func:`required_median_size` large. The default backend is
    the pure-DP rank-utility exponential mechanism; pass ``backend`` to
    substitute another construction behind the same contract.
    """
    values = list(values)
    if not values:
        raise ValueError("empty values")
    if privacy.epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < alpha <= 0.5:
        raise ValueError("alpha must be in (0, 1/2]")
    if min(values) < 0 or max(values) > domain_max:
        raise ValueError("values outside [0, domain_max]")
    impl = backend if backend is not None else rank_utility_median_backend
    return impl(values, domain_max, alpha, privacy, beta, rng)


def required_median_size(
    domain_max: int, alpha: float, beta: float, privacy: PrivacyParams
) -> int:
    """Sufficient input size for the default median backend's guarantee.

    The rank-utility exponential mechanism misses an alpha-median with
    probability at most (domain_max + 1) * exp(-eps * alpha * n / 2), so
    ``n >= (2 / (alpha * eps)) * ln((domain_max + 1) / beta)`` suffices.
    Grows additively by O(1 / (alpha * eps)) per doubling of the domain;
    a plug-in backend with milder domain dependence can replace this bound
    together with the mechanism.
    """
    if domain_max < 0:
        raise ValueError("domain_max must be nonnegative")
    if privacy.epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < alpha <= 0.5:
        raise ValueError("alpha must be in (0, 1/2]")
    if not 0 < beta < 1:
        raise ValueError("beta must be in (0, 1)")
    return math.ceil(
        2.0 / (alpha * privacy.epsilon) * math.log((domain_max + 1) / beta)
    )


def alpha_median_set(values: Sequence[int], alpha: float) -> set[int]:
    """Brute-force reference: all integer alpha-medians within the value range."""
    vals = sorted(values)
    n = len(vals)
    need = (0.5 - alpha) * n
    out = set()
    for m in range(min(vals), max(vals) + 1):
        n_le = sum(1 for v in vals if v <= m)
        n_ge = sum(1 for v in vals if v >= m)
        if min(n_le, n_ge) >= need:
            out.add(m)
    return out


def advanced_composition(
    epsilon_step: float, delta_step: float, k: int, delta_prime: float
) -> PrivacyParams:
    """Budget of k adaptive runs of an (eps, delta)-DP mechanism.

    Returns ``(sqrt(2 k ln(1/delta')) * eps, k * delta + delta')``.
    """
    if epsilon_step < 0 or delta_step < 0 or k < 0 or delta_prime <= 0:
        raise ValueError("composition parameters must be positive")
    eps = math.sqrt(2.0 * k * math.log(1.0 / delta_prime)) * epsilon_step
    return PrivacyParams(epsilon=eps, delta=k * delta_step + delta_prime)
