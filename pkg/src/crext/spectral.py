"""Joint spectrum bookkeeping and the fractional-order symbol.

A mode is the pair (lambda, k) of a nonzero Fourier frequency in the central
direction and a Landau level k >= 0, at dimension parameter n >= 1.  The
sublaplacian here is normalized as half the sum of squares of the standard
horizontal fields (X_j = d/dx_j + 2 y_j d/dt, Y_j = d/dy_j - 2 x_j d/dt), and
on a mode it acts by the scalar

    nu = 2 |lambda| (2k + n).

`mode_eigenvalue_symbolic` rebuilds that scalar from scratch in sympy by
applying the vector fields to an explicit eigenfunction, so the normalization
is pinned down by calculus rather than by convention.

The fractional symbol of order gamma' in (0, 2) on a mode is

    P_gamma'(lambda, k) = (4|lambda|)^gamma' * Gamma(a + gamma') / Gamma(a),
    a = (1 - gamma' + 2k + n) / 2,

and `theorem_constant` returns the closed-form ratio between the extension
Dirichlet-to-Neumann map and that symbol: a single positive number for
gamma in (0, 1), and for gamma in (1, 2) the pair attached to the two
boundary weights, the second of which is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import sympy

from .special import gamma_fn

__all__ = [
    "ModeIndex",
    "GammaParam",
    "mode_eigenvalue",
    "mode_eigenvalue_symbolic",
    "gjms_symbol",
    "theorem_constant",
    "DEFAULT_LAMBDAS",
    "DEFAULT_LEVELS",
    "DEFAULT_DIMENSIONS",
]

DEFAULT_LAMBDAS = (0.25, 0.5, 1.0, 2.0, 4.0)
DEFAULT_LEVELS = tuple(range(9))
DEFAULT_DIMENSIONS = (1, 2, 3)


@dataclass(frozen=True)
class ModeIndex:
    """One point (lambda, k) of the joint spectrum at dimension n."""

    lam: float
    k: int
    n: int

    def __post_init__(self):
        if not self.lam or not math.isfinite(self.lam):
            raise ValueError(f"central frequency must be finite and nonzero, got {self.lam}")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"level index must be a nonnegative integer, got {self.k}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"dimension parameter must be a positive integer, got {self.n}")


@dataclass(frozen=True)
class GammaParam:
    """Fractional order gamma in (0, 2) excluding the local value 1."""

    gamma: float

    def __post_init__(self):
        g = self.gamma
        if not (0.0 < g < 2.0) or g == 1.0:
            raise ValueError(
                f"order gamma = {g} is outside the admissible range (0, 2) minus {{1}}"
            )

    @property
    def is_high(self) -> bool:
        return self.gamma > 1.0

    @property
    def alpha(self) -> float:
        """Fractional part of gamma."""
        return self.gamma - 1.0 if self.is_high else self.gamma

    @property
    def tilde(self) -> float:
        """The complementary order 1 - alpha."""
        return 1.0 - self.alpha

    def branches(self) -> tuple[float, ...]:
        """Effective extension orders: (gamma,) below 1, (gamma, 2-gamma) above."""
        if self.is_high:
            return (self.gamma, 2.0 - self.gamma)
        return (self.gamma,)


def mode_eigenvalue(mode: ModeIndex) -> float:
    """Scalar action of minus the sublaplacian on the mode."""
    return 2.0 * abs(mode.lam) * (2 * mode.k + mode.n)


def mode_eigenvalue_symbolic(k: int, n: int, sign: int = 1):
    """Residual of the eigenvalue identity, built symbolically from the fields.

    Applies half the sum of squared horizontal fields to the explicit
    eigenfunction (x_1 - sign*i*y_1)^k e^{sign*i*lam*t} e^{-lam*|z|^2} and
    adds back 2*lam*(2k+n) times it.  Returns a sympy expression that must
    simplify to zero.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not isinstance(k, int) or k < 0 or not isinstance(n, int) or n < 1:
        raise ValueError("need integer k >= 0 and n >= 1")
    t = sympy.Symbol("t", real=True)
    lam = sympy.Symbol("lam", positive=True)
    xs = sympy.symbols(f"x1:{n + 1}", real=True)
    ys = sympy.symbols(f"y1:{n + 1}", real=True)
    radial = sum(x**2 + y**2 for x, y in zip(xs, ys))
    u = (xs[0] - sign * sympy.I * ys[0]) ** k * sympy.exp(
        sign * sympy.I * lam * t - lam * radial
    )

    def field_x(j, f):
        return sympy.diff(f, xs[j]) + 2 * ys[j] * sympy.diff(f, t)

    def field_y(j, f):
        return sympy.diff(f, ys[j]) - 2 * xs[j] * sympy.diff(f, t)

    lap = sum(
        field_x(j, field_x(j, u)) + field_y(j, field_y(j, u)) for j in range(n)
    ) / 2
    return sympy.simplify(lap + 2 * lam * (2 * k + n) * u)


def _half_shift(gamma_prime: float, mode: ModeIndex) -> float:
    return (1.0 - gamma_prime + 2 * mode.k + mode.n) / 2.0


def gjms_symbol(gamma_prime: float, mode: ModeIndex) -> float:
    """Spectral multiplier of the order-gamma' operator on the mode.

    Both gamma arguments are positive for gamma' < 2, so the ratio is safe to
    form in log space; that keeps high levels from overflowing.
    """
    if not 0.0 < gamma_prime < 2.0:
        raise ValueError(f"symbol order must lie in (0, 2), got {gamma_prime}")
    a = _half_shift(gamma_prime, mode)
    log_ratio = math.lgamma(a + gamma_prime) - math.lgamma(a)
    return (4.0 * abs(mode.lam)) ** gamma_prime * math.exp(log_ratio)


def theorem_constant(param: GammaParam):
    """DtN-to-symbol ratio: a scalar below order 1, an ordered pair above.

    For gamma in (1, 2) the first entry multiplies the order-gamma symbol and
    the second (negative) entry multiplies the order-(2-gamma) symbol.
    """
    g = param.gamma
    if not param.is_high:
        return 2.0 ** (1.0 - 2.0 * g) * gamma_fn(1.0 - g) / gamma_fn(g)
    tilde = param.tilde
    c_phi = 2.0 ** (3.0 - 2.0 * g) * gamma_fn(2.0 - g) / gamma_fn(g)
    c_psi = (
        2.0 ** (1.0 - 2.0 * tilde)
        * (tilde / (1.0 - tilde))
        * gamma_fn(-tilde)
        / gamma_fn(tilde)
    )
    return c_phi, c_psi
