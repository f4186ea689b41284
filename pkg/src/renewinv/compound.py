"""Lattice discretization of equilibrium distributions and the compound
geometric sum.

The equilibrium law of a gamma mixture discretizes onto the grid {k/t} with
weights proportional to negative-binomial survival probabilities; the
compound geometric distribution of those lattice variables is evaluated by
Panjer's recursion.  Its cumulative sums are exactly the gamma-operator
approximation of the non-ruin probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NegativeWeightError
from .inversion import LatticeFunction
from .specfun import negbin_pmf_terms, RealShape
from .transforms import GammaMixture, TransformOracle

_NEGATIVE_TOL = 1e-12
_MASS_TOL = 1e-12


@dataclass(frozen=True)
class LatticePMF:
    """Probability weights on the grid {k/t, k = 0..K} plus truncated mass.

    ``mass_deficit`` is 1 - sum(weights), clamped at zero; it must stay
    below the configured truncation tolerance for downstream use.
    """

    t: float
    weights: np.ndarray = field(repr=False)
    mass_deficit: float = 0.0

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"lattice rate t must be positive, got {self.t}")
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise DomainError("weights must be a nonempty 1-d array")
        if w.min() < -_NEGATIVE_TOL:
            raise NegativeWeightError(f"weight {w.min()} below -{_NEGATIVE_TOL}")
        w = np.maximum(w, 0.0)
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @property
    def truncation_index(self) -> int:
        return self.weights.size - 1


def _fresh_pmf(t: float, weights: np.ndarray) -> LatticePMF:
    deficit = max(0.0, 1.0 - math.fsum(weights.tolist()))
    return LatticePMF(t=t, weights=weights, mass_deficit=deficit)


def equilibrium_truncation_index(
    mixture: GammaMixture, t: float, min_index: int = 0, mass_tol: float = _MASS_TOL
) -> int:
    """Smallest truncation K >= min_index with cumulative mass >= 1 - mass_tol.

    The per-component tails are eventually geometric with ratio
    t/(t + beta), so K grows one block at a time until the deficit clears
    the tolerance.
    """
    if not t > 0:
        raise DomainError(f"lattice rate t must be positive, got {t}")
    K = max(int(min_index), 8)
    while True:
        w = _equilibrium_weights(mixture, t, K)
        if 1.0 - math.fsum(w.tolist()) < mass_tol:
            return K
        if K > 10_000_000:
            raise DomainError("equilibrium discretization failed to reach mass tolerance")
        K *= 2


def _equilibrium_weights(mixture: GammaMixture, t: float, K: int) -> np.ndarray:
    out = np.zeros(K + 1)
    for p, alpha, beta in mixture.components:
        terms = negbin_pmf_terms(K, RealShape(alpha, beta / (t + beta)))
        survival = np.maximum(1.0 - np.cumsum(terms), 0.0)
        out += p * survival
    return out / (t * mixture.mean)


def discretize_equilibrium(mixture: GammaMixture, t: float, K: int) -> LatticePMF:
    """Lattice masses of the discretized equilibrium law of a gamma mixture.

    P(L = k/t) = sum_i p_i * P(NB(alpha_i, beta_i/(t+beta_i)) > k) divided
    by t * mean; the total over all k is exactly one, so the stored deficit
    is the truncated tail.
    """
    if not t > 0:
        raise DomainError(f"lattice rate t must be positive, got {t}")
    if K < 0:
        raise DomainError(f"truncation index must be >= 0, got {K}")
    return _fresh_pmf(t, _equilibrium_weights(mixture, t, K))


def discretize_general(oracle: TransformOracle, mu: float, t: float, K: int) -> LatticePMF:
    """Equilibrium discretization from a bare transform oracle of the claim law.

    P(L = k/t) = (1 - partial sums of the oracle weights) / (t * mu); the
    only route available when the claim law is not a gamma mixture, and the
    cross-check oracle when it is.  Raises :class:`NegativeWeightError`
    when cancellation in the partial sums turns materially negative.
    """
    if not mu > 0:
        raise DomainError(f"claim mean must be positive, got {mu}")
    if not t > 0:
        raise DomainError(f"lattice rate t must be positive, got {t}")
    if K < 0:
        raise DomainError(f"truncation index must be >= 0, got {K}")
    partial = np.cumsum(oracle.weights(t, K))
    w = (1.0 - partial) / (t * mu)
    if w.min() < -_NEGATIVE_TOL:
        raise NegativeWeightError(
            f"cancellation produced weight {w.min()} at t={t}; K={K} too large for doubles"
        )
    return _fresh_pmf(t, np.maximum(w, 0.0))


def panjer_geometric(severity: LatticePMF, phi: float, K: int) -> LatticePMF:
    """PMF of the geometric compound of a lattice severity, by Panjer recursion.

    The count is geometric with P(M = n) = (1-phi) phi**n.  O(K^2) with the
    inner convolution done as a dot product; the recursion is inherently
    sequential in k.
    """
    if not 0 < phi < 1:
        raise DomainError(f"compound-geometric parameter phi must be in (0, 1), got {phi}")
    if K < 0:
        raise DomainError(f"truncation index must be >= 0, got {K}")
    f = severity.weights
    denom = 1.0 - phi * float(f[0])
    out = np.zeros(K + 1)
    out[0] = (1.0 - phi) / denom
    k_sev = severity.truncation_index
    for k in range(1, K + 1):
        j_hi = min(k, k_sev)
        acc = float(np.dot(f[1 : j_hi + 1], out[k - 1 :: -1][:j_hi]))
        out[k] = phi * acc / denom
    return _fresh_pmf(severity.t, out)


def compound_cdf(pmf: LatticePMF) -> LatticeFunction:
    """Cumulative sums of a lattice PMF as an interpolating lattice function."""
    cdf = np.minimum(np.cumsum(pmf.weights), 1.0)
    return LatticeFunction(pmf.t, cdf)
