"""Laplace-transform derivative oracles.

Every oracle exposes, as its numerically stable primitive, the *normalized*
derivative weights

    w_k(t) = (-t)**k / k! * g~^(k)(t),   k = 0, 1, ...

where ``g~`` is the Laplace transform of the source function.  For a
probability density these weights are exactly the lattice masses
P(X^(t-grid) = k/t), so they live in [0, 1] and never overflow, while the
raw derivatives grow like k! and die around k ~ 300 in doubles.  Raw
derivatives are available through :meth:`TransformOracle.derivs` for the
moderate orders where they are representable.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularityError
from .specfun import negbin_pmf_terms, RealShape, reg_inc_gamma_lower, reg_inc_gamma_upper

_SINGULARITY_TOL = 1e-12


class TransformOracle(abc.ABC):
    """Supplies derivatives of a Laplace transform at points t > gamma_abscissa.

    ``gamma_abscissa`` is the growth bound of the source function
    (|g(u)| = O(exp(gamma * u))); the transform is defined strictly to the
    right of it.  Oracles are immutable and safe for concurrent use.
    """

    gamma_abscissa: float = 0.0

    @abc.abstractmethod
    def weights(self, t: float, k_max: int) -> np.ndarray:
        """Normalized weights (-t)**k / k! * g~^(k)(t) for k = 0..k_max."""

    def derivs(self, t: float, k_max: int) -> np.ndarray:
        """Raw derivatives [g~(t), g~'(t), ..., g~^(k_max)(t)].

        Scaled from the normalized weights; overflows to +-inf once
        k!/t**k leaves double range (k of a few hundred for t ~ 5).
        """
        w = self.weights(t, k_max)
        out = np.empty_like(w)
        factor = 1.0
        for k in range(k_max + 1):
            out[k] = w[k] * factor
            factor *= -(k + 1.0) / t
        return out

    def value(self, t: float) -> float:
        """The transform g~(t) itself."""
        return float(self.weights(t, 0)[0])

    def _require_valid_point(self, t: float, k_max: int) -> None:
        if not t > 0 or not t > self.gamma_abscissa:
            raise DomainError(
                f"transform point t={t} must be positive and exceed the "
                f"growth abscissa {self.gamma_abscissa}"
            )
        if k_max < 0:
            raise DomainError(f"k_max must be >= 0, got {k_max}")


class Component(NamedTuple):
    """One gamma-mixture component: weight ``p``, shape ``alpha``, rate ``beta``."""

    p: float
    alpha: float
    beta: float


@dataclass(frozen=True)
class GammaMixture:
    """Claim-amount model: finite mixture of gamma distributions.

    Weights must sum to one (tolerance 1e-9); shapes and rates must be
    positive.  Moments and transform derivatives are available in closed
    form, which keeps the downstream error bounds exact.
    """

    components: tuple[Component, ...]

    def __post_init__(self):
        comps = tuple(Component(*c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DomainError("mixture needs at least one component")
        for p, alpha, beta in comps:
            if not p > 0:
                raise DomainError(f"mixture weight must be positive, got {p}")
            if not alpha > 0 or not beta > 0:
                raise DomainError(f"gamma parameters must be positive, got alpha={alpha}, beta={beta}")
        total = math.fsum(p for p, _, _ in comps)
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"mixture weights sum to {total}, expected 1")

    @classmethod
    def exponential(cls, beta: float = 1.0) -> "GammaMixture":
        return cls((Component(1.0, 1.0, beta),))

    @property
    def min_alpha(self) -> float:
        return min(c.alpha for c in self.components)

    @property
    def mean(self) -> float:
        return math.fsum(p * alpha / beta for p, alpha, beta in self.components)

    def raw_moment(self, n: int) -> float:
        """E[X**n] = sum_i p_i * alpha_i (alpha_i+1) ... (alpha_i+n-1) / beta_i**n."""
        if n < 0:
            raise DomainError(f"moment order must be >= 0, got {n}")
        total = 0.0
        for p, alpha, beta in self.components:
            rising = 1.0
            for j in range(n):
                rising *= alpha + j
            total += p * rising / beta**n
        return total

    def cdf(self, u: float) -> float:
        if u <= 0:
            return 0.0
        return math.fsum(
            p * reg_inc_gamma_lower(alpha, beta * u) for p, alpha, beta in self.components
        )

    def survival(self, u: float) -> float:
        if u <= 0:
            return 1.0
        return math.fsum(
            p * reg_inc_gamma_upper(alpha, beta * u) for p, alpha, beta in self.components
        )

    def density(self, u: float) -> float:
        if u < 0:
            return 0.0
        total = 0.0
        for p, alpha, beta in self.components:
            if u == 0.0:
                if alpha == 1.0:
                    total += p * beta
                # alpha > 1 contributes 0; alpha < 1 diverges but is never
                # needed (bounds require alpha >= 1)
                continue
            total += p * beta * math.exp(
                -beta * u + (alpha - 1.0) * math.log(beta * u) - math.lgamma(alpha)
            )
        return total

    def equilibrium_cdf(self, u: float) -> float:
        """CDF of the equilibrium distribution, (1/mean) * int_0^u survival.

        Uses int_0^z (1 - F_a(x)) dx = z (1 - F_a(z)) + a P(a+1, z) per
        component.
        """
        if u <= 0:
            return 0.0
        total = 0.0
        for p, alpha, beta in self.components:
            z = beta * u
            partial = z * reg_inc_gamma_upper(alpha, z) + alpha * reg_inc_gamma_lower(alpha + 1.0, z)
            total += p * partial / beta
        return min(1.0, total / self.mean)

    def equilibrium_density(self, u: float) -> float:
        return self.survival(u) / self.mean


class GammaMixtureLST(TransformOracle):
    """Laplace-Stieltjes transform of a gamma mixture.

    Phi(t) = sum_i p_i (beta_i / (t + beta_i))**alpha_i; the normalized
    weights are mixtures of negative-binomial masses with success
    probability beta_i / (t + beta_i).
    """

    def __init__(self, mixture: GammaMixture):
        self.mixture = mixture

    def weights(self, t, k_max):
        self._require_valid_point(t, k_max)
        out = np.zeros(k_max + 1)
        for p, alpha, beta in self.mixture.components:
            out += p * negbin_pmf_terms(k_max, RealShape(alpha, beta / (t + beta)))
        return out

    def derivs(self, t, k_max):
        # Closed form Phi^(j)(t) = (-1)^j Gamma(a+j)/Gamma(a) b^a / (t+b)^(a+j),
        # assembled in log space so intermediate factors cannot overflow.
        self._require_valid_point(t, k_max)
        out = np.zeros(k_max + 1)
        for p, alpha, beta in self.mixture.components:
            base = alpha * math.log(beta) - math.lgamma(alpha)
            logtb = math.log(t + beta)
            for j in range(k_max + 1):
                logmag = base + math.lgamma(alpha + j) - (alpha + j) * logtb
                mag = math.exp(logmag) if logmag < 709.0 else math.inf
                out[j] += p * (mag if j % 2 == 0 else -mag)
        return out


def gamma_mixture_lst_derivs(mixture: GammaMixture, t: float, k_max: int) -> np.ndarray:
    """Raw transform derivatives [Phi(t), ..., Phi^(k_max)(t)] of the mixture LST."""
    return GammaMixtureLST(mixture).derivs(t, k_max)


class ExponentialDecayLST(TransformOracle):
    """Transform oracle for g(u) = exp(-a u), a >= 0 (a = 0 gives g == 1).

    g~(t) = 1/(t+a); the normalized weights form the geometric sequence
    t**k / (t+a)**(k+1).
    """

    def __init__(self, a: float = 0.0):
        if a < 0:
            raise DomainError(f"decay rate must be >= 0, got {a}")
        self.a = a
        self.gamma_abscissa = -a

    def weights(self, t, k_max):
        self._require_valid_point(t, k_max)
        ratio = t / (t + self.a)
        return ratio ** np.arange(k_max + 1) / (t + self.a)


class ConstantLST(TransformOracle):
    """Transform oracle for the constant function g == c (g~(t) = c/t)."""

    def __init__(self, c: float = 1.0):
        self.c = c

    def weights(self, t, k_max):
        self._require_valid_point(t, k_max)
        return np.full(k_max + 1, self.c / t)


class ScaledLST(TransformOracle):
    """c * g for an existing oracle of g."""

    def __init__(self, c: float, inner: TransformOracle):
        self.c = c
        self.inner = inner
        self.gamma_abscissa = inner.gamma_abscissa

    def weights(self, t, k_max):
        return self.c * self.inner.weights(t, k_max)


class SumLST(TransformOracle):
    """Pointwise sum of several source functions."""

    def __init__(self, *oracles: TransformOracle):
        if not oracles:
            raise DomainError("SumLST needs at least one oracle")
        self.oracles = oracles
        self.gamma_abscissa = max(o.gamma_abscissa for o in oracles)

    def weights(self, t, k_max):
        total = self.oracles[0].weights(t, k_max).copy()
        for oracle in self.oracles[1:]:
            total += oracle.weights(t, k_max)
        return total


class CumulativeLST(TransformOracle):
    """Transform of G(u) = int_0^u g, i.e. g~(t)/t, from the oracle of g.

    Normalized weights are the scaled partial sums of the inner weights.
    """

    def __init__(self, inner: TransformOracle):
        self.inner = inner
        self.gamma_abscissa = inner.gamma_abscissa

    def weights(self, t, k_max):
        return np.cumsum(self.inner.weights(t, k_max)) / t


class SurvivalLST(TransformOracle):
    """Transform of 1 - int_0^u g, i.e. (1 - g~(t))/t, for a density oracle g.

    The weights are (1 - partial sums)/t, the scaled tail masses of the
    inner discretization; tiny negative values from cancellation are
    clamped to zero.
    """

    def __init__(self, inner: TransformOracle):
        self.inner = inner
        self.gamma_abscissa = inner.gamma_abscissa

    def weights(self, t, k_max):
        tails = 1.0 - np.cumsum(self.inner.weights(t, k_max))
        return np.maximum(tails, 0.0) / t


def survival_to_density_oracle(mixture: GammaMixture) -> TransformOracle:
    """Oracle for the equilibrium density f = survival(X)/mean.

    Its transform is (1 - Phi_X(t)) / (t * mean), the integration-by-parts
    identity for the equilibrium law.
    """
    return ScaledLST(1.0 / mixture.mean, SurvivalLST(GammaMixtureLST(mixture)))


class RenewalRatioLST(TransformOracle):
    """Transform of the renewal solution, m~(t) = v~(t) / (1 - phi f~(t)).

    The normalized weights satisfy the convolution recursion

        W_k(m) = (W_k(v) + phi * sum_{j<k} W_j(m) W_{k-j}(f)) / (1 - phi f~(t))

    which is the Leibniz rule for m~ (1 - phi f~) = v~ rescaled so no
    binomial coefficients appear.  Inner sums use exact (fsum) accumulation.
    """

    def __init__(self, v_oracle: TransformOracle, f_oracle: TransformOracle, phi: float):
        if not 0 < phi < 1:
            raise DomainError(f"defect phi must be in (0, 1), got {phi}")
        self.v_oracle = v_oracle
        self.f_oracle = f_oracle
        self.phi = phi
        self.gamma_abscissa = max(v_oracle.gamma_abscissa, f_oracle.gamma_abscissa)

    def weights(self, t, k_max):
        self._require_valid_point(t, k_max)
        fw = self.f_oracle.weights(t, k_max)
        vw = self.v_oracle.weights(t, k_max)
        denom = 1.0 - self.phi * fw[0]
        if abs(denom) < _SINGULARITY_TOL:
            raise SingularityError(
                f"1 - phi*f~(t) = {denom} at t={t}: at or below the defective-equation singularity"
            )
        out = np.empty(k_max + 1)
        out[0] = vw[0] / denom
        for k in range(1, k_max + 1):
            inner = math.fsum((out[:k] * fw[k:0:-1]).tolist())
            out[k] = (vw[k] + self.phi * inner) / denom
        return out


def renewal_ratio_derivs(
    v_oracle: TransformOracle,
    f_oracle: TransformOracle,
    phi: float,
    t: float,
    k_max: int,
) -> np.ndarray:
    """Raw derivatives [m~(t), ..., m~^(k_max)(t)] of the renewal-solution transform."""
    if phi == 0.0:
        return v_oracle.derivs(t, k_max)
    return RenewalRatioLST(v_oracle, f_oracle, phi).derivs(t, k_max)
