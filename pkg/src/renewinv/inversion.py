"""Inversion operators built on transform-derivative oracles.

Four operators are provided: the gamma-type operator ``l_star`` (expectation
of g at a gamma point S([tu]+1)/t), its order-2 accelerated lattice variant
``m2_lattice``, the Post-Widder operator ``post_widder`` and its order-2
Stehfest combination ``stehfest2``.

In terms of the normalized oracle weights w_k(t) = (-t)**k/k! g~^(k)(t):

    L*_t g(u)  = t * w_[tu](t)
    W_n g(u)   = s * w_{n-1}(s),   s = n/u

so both reduce to a single weight lookup and never touch raw factorials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .transforms import TransformOracle

_SNAP = 1e-9


def lattice_index(t: float, u: float) -> tuple[int, float]:
    """Split t*u into integer lattice index and fractional part.

    Products within 1e-9 of an integer snap to it, so u = k/t computed in
    floating point lands exactly on index k.
    """
    x = t * u
    k = math.floor(x)
    frac = x - k
    if frac > 1.0 - _SNAP:
        return k + 1, 0.0
    if frac < _SNAP:
        return k, 0.0
    return k, frac


@dataclass(frozen=True)
class LatticeFunction:
    """Real values on the grid {k/t, k = 0..K} with linear interpolation.

    Off-lattice points u in (0, K/t) evaluate to the convex combination
    (tu - [tu]) * val([tu]+1) + ([tu]+1 - tu) * val([tu]).  Evaluation
    beyond K/t raises rather than extrapolating.
    """

    t: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"lattice rate t must be positive, got {self.t}")
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise DomainError("lattice values must be a nonempty 1-d array")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def truncation_index(self) -> int:
        return self.values.size - 1

    @property
    def u_max(self) -> float:
        return self.truncation_index / self.t

    def __call__(self, u: float) -> float:
        if u < 0:
            raise DomainError(f"lattice functions are defined on u >= 0, got {u}")
        k, frac = lattice_index(self.t, u)
        if k > self.truncation_index or (k == self.truncation_index and frac > 0.0):
            raise DomainError(
                f"u={u} beyond the lattice truncation {self.u_max}; refusing to extrapolate"
            )
        if frac == 0.0:
            return float(self.values[k])
        return frac * float(self.values[k + 1]) + (1.0 - frac) * float(self.values[k])


def l_star(oracle: TransformOracle, t: float, u: float) -> float:
    """Gamma-operator approximation of g(u) from transform derivatives at t.

    Equals E g(S([tu]+1)/t) with S(n) a standard Gamma(n, 1) variable; for
    a CDF source this is the CDF of the lattice-discretized variable.
    """
    if u < 0:
        raise DomainError(f"l_star requires u >= 0, got {u}")
    k, _ = lattice_index(t, u)
    w = oracle.weights(t, k)
    return t * float(w[k])


def m2_lattice(oracle: TransformOracle, t: float, K: int, g0: float) -> LatticeFunction:
    """Order-2 accelerated approximation on the lattice {k/t, k = 0..K}.

    Value at k/t is 2 L*_{2t} g((2k-1)/(2t)) - L*_t g((k-1)/t) for k >= 1
    and the caller-supplied g(0) at k = 0.  Oracle calls are batched per
    lattice rate.
    """
    if K < 1:
        raise DomainError(f"truncation index K must be >= 1, got {K}")
    w_fine = oracle.weights(2.0 * t, 2 * K - 1)
    w_coarse = oracle.weights(t, K - 1)
    vals = np.empty(K + 1)
    vals[0] = g0
    # indices 1,3,...,2K-1 on the 2t-lattice pair with 0,...,K-1 on the t-lattice
    vals[1:] = 4.0 * t * w_fine[1::2] - t * w_coarse
    return LatticeFunction(t, vals)


def post_widder(oracle: TransformOracle, n: int, u: float) -> float:
    """Post-Widder approximation of g(u) of integer order n >= 1.

    Equals E g(u S(n)/n); uses the (n-1)-th transform derivative at n/u.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"Post-Widder order must be a positive integer, got {n}")
    if not u > 0:
        raise DomainError(f"post_widder requires u > 0, got {u}")
    n = int(n)
    s = n / u
    w = oracle.weights(s, n - 1)
    return s * float(w[n - 1])


def stehfest2(oracle: TransformOracle, n: int, u: float) -> float:
    """Order-2 Stehfest acceleration of Post-Widder: 2 W_{2n} g(u) - W_n g(u)."""
    return 2.0 * post_widder(oracle, 2 * n, u) - post_widder(oracle, n, u)
