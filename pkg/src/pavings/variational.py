"""Constrained variational problem behind the rank-3 counting constant.

Maximise the functional  F[u] = int_0^1 F(x, u(x)) dx  over continuously
differentiable u with 0 <= u(x) <= min(x, 1-x) and int u = 1/6, where

    F(x, y) = -2 - 6x h(y/x) - 6(1-x) h(y/(1-x)) - 6y ln(y / (x(1-x)))

and h(y) = (1-y) ln(1-y), with h(1) = 0 and 0 ln 0 = 0.  Stationarity
reduces to the quadratic (x-u)(1-x-u) = lam * u whose lower root
u_minus(x; lam) is feasible; the multiplier lam* is fixed by the integral
constraint, and beta is the functional's value at u_minus(.; lam*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from scipy.integrate import quad

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_ROOT_TOL = 1e-10
_SIXTH = 1.0 / 6.0


def _h(y: float) -> float:
    """(1-y) ln(1-y) with the conventions h(0) = h(1) = 0."""
    if y <= 0.0 or y >= 1.0:
        return 0.0
    return (1.0 - y) * math.log1p(-y)


def F_point(x: float, y: float) -> float:
    """Integrand value at (x, y); requires 0 <= y <= min(x, 1-x)."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if y < 0.0 or y > min(x, 1.0 - x) + 1e-15:
        raise ValueError(f"(x, y)=({x}, {y}) outside the feasible triangle")
    if y <= 0.0:
        return -2.0
    return (
        -2.0
        - 6.0 * x * _h(y / x)
        - 6.0 * (1.0 - x) * _h(y / (1.0 - x))
        - 6.0 * y * math.log(y / (x * (1.0 - x)))
    )


@dataclass
class AdmissibleFunction:
    """A candidate u: [0,1] -> R for the constrained problem."""

    evaluator: Callable[[float], float]
    description: str = ""

    def __call__(self, x: float) -> float:
        return self.evaluator(x)

    def check_box(self, grid_points: int = 1001) -> bool:
        """0 <= u(x) <= min(x, 1-x) on a uniform grid."""
        for i in range(grid_points):
            x = i / (grid_points - 1)
            y = self.evaluator(x)
            if y < -1e-12 or y > min(x, 1.0 - x) + 1e-12:
                return False
        return True


def functional_F(u: Callable[[float], float], quad_tol: float = DEFAULT_QUAD_TOL,
                 breakpoints: Sequence[float] | None = None,
                 counter: list[int] | None = None) -> float:
    """Adaptive quadrature of x -> F(x, u(x)) over [0, 1].

    The integrand extends continuously to the endpoints with value -2, so
    no singular weighting is needed.  ``breakpoints`` marks known interior
    discontinuities of u (e.g. step functions).  ``counter``, if given,
    accumulates the number of integrand evaluations in its first slot.
    """
    def integrand(x: float) -> float:
        if counter is not None:
            counter[0] += 1
        if x <= 0.0 or x >= 1.0:
            return -2.0
        y = u(x)
        m = min(x, 1.0 - x)
        if y < 0.0 or y > m + 1e-12:
            raise ValueError(f"u({x}) = {y} violates the box constraint")
        return F_point(x, min(y, m))

    pts = None
    if breakpoints is not None:
        pts = [p for p in breakpoints if 0.0 < p < 1.0] or None
    val, _ = quad(integrand, 0.0, 1.0, epsabs=quad_tol, limit=400, points=pts)
    return val


def u_minus(x: float, lambda_prime: float) -> float:
    """Lower root of (x-u)(1-x-u) = lam * u; stays in [0, min(x, 1-x)]."""
    if lambda_prime < 0.0:
        raise ValueError("the multiplier must be nonnegative")
    disc = (1.0 + lambda_prime) ** 2 - 4.0 * x * (1.0 - x)
    return 0.5 * (1.0 + lambda_prime - math.sqrt(disc))


def integral_u_minus(lambda_prime: float, quad_tol: float = DEFAULT_QUAD_TOL,
                     counter: list[int] | None = None) -> float:
    """int_0^1 u_minus(x; lam) dx; continuous and decreasing in lam,
    starting from 1/4 at lam = 0."""
    def integrand(x: float) -> float:
        if counter is not None:
            counter[0] += 1
        return u_minus(x, lambda_prime)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=quad_tol, limit=200)
    return val


def integral_u_minus_closed(lambda_prime: float) -> float:
    """Closed form of the same integral, used as an independent check:
    with c^2 = lam(lam+2), the square-root part integrates to
    (1/2)[sqrt(c^2+1) + c^2 ln((1+sqrt(c^2+1))/c)]."""
    if lambda_prime < 0.0:
        raise ValueError("the multiplier must be nonnegative")
    c2 = lambda_prime * (lambda_prime + 2.0)
    if c2 == 0.0:
        return 0.25
    s1 = math.sqrt(c2 + 1.0)
    j = 0.5 * (s1 + c2 * math.log((1.0 + s1) / math.sqrt(c2)))
    return 0.5 * (1.0 + lambda_prime) - 0.5 * j


@dataclass(frozen=True)
class VariationalSolution:
    """Solved multiplier and constant with the tolerances that produced
    them.  ``enclosure`` brackets beta by evaluating the functional at the
    multiplier interval endpoints (the functional is increasing in lam)."""

    lambda_star: float
    beta: float | None
    quad_tol: float
    root_tol: float
    bracket: tuple[float, float]
    enclosure: tuple[float, float] | None
    evaluations: int
    residual: float


def solve_lambda_star(root_tol: float = DEFAULT_ROOT_TOL,
                      quad_tol: float = DEFAULT_QUAD_TOL) -> VariationalSolution:
    """Bisection for the multiplier with int u_minus = 1/6.

    The integral is monotone decreasing, which guarantees a unique root;
    bisection proceeds on [0, 1] until the constraint residual drops
    below ``root_tol``.
    """
    if root_tol <= 0 or quad_tol <= 0:
        raise ValueError("tolerances must be positive")
    counter = [0]
    lo, hi = 0.0, 1.0
    flo = integral_u_minus(lo, quad_tol, counter) - _SIXTH
    fhi = integral_u_minus(hi, quad_tol, counter) - _SIXTH
    if flo < 0 or fhi > 0:
        raise RuntimeError("initial bracket [0, 1] does not straddle the constraint")
    mid = 0.5 * (lo + hi)
    res = math.inf
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        res = integral_u_minus(mid, quad_tol, counter) - _SIXTH
        if abs(res) < root_tol:
            break
        if res > 0:
            lo = mid
        else:
            hi = mid
    else:
        raise RuntimeError(f"bisection stalled; last residual {res}")
    return VariationalSolution(
        lambda_star=mid, beta=None, quad_tol=quad_tol, root_tol=root_tol,
        bracket=(lo, hi), enclosure=None, evaluations=counter[0], residual=res,
    )


def compute_beta(quad_tol: float = DEFAULT_QUAD_TOL,
                 root_tol: float = DEFAULT_ROOT_TOL) -> VariationalSolution:
    """Solve for the multiplier, then evaluate the functional there.

    Also evaluates the functional at the multiplier's reference interval
    endpoints 0.2 and 0.21, which bracket beta since the functional is
    increasing in the multiplier.
    """
    part = solve_lambda_star(root_tol, quad_tol)
    counter = [part.evaluations]
    lam = part.lambda_star

    def at(lmb: float) -> float:
        return functional_F(lambda x: u_minus(x, lmb), quad_tol, counter=counter)

    beta = at(lam)
    enclosure = (at(0.2), at(0.21))
    return VariationalSolution(
        lambda_star=lam, beta=beta, quad_tol=quad_tol, root_tol=root_tol,
        bracket=part.bracket, enclosure=enclosure,
        evaluations=counter[0], residual=part.residual,
    )
