"""Conformal factor e^{u(y)} of the induced metric, via Jacobi sn.

The first integral (w')^2 + 8 w^3 - 4 beta w^2 + 4 |psi|^2 = 0 of the Gauss
equation, w = e^u, is solved in closed form by

    w(y) = a1 (1 - q^2 sn^2(r y, k)),

an even function of y with period 2T, ranging over [a2, a1].  The derivative
follows from d/dz sn = cn dn.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .elliptic import jacobi
from .potential import DerivedConstants


@dataclass(frozen=True)
class MetricSample:
    y: float
    w: float        # e^{u(y)}
    w_prime: float
    u: float
    u_prime: float


def metric_at(c: DerivedConstants, y: float) -> MetricSample:
    """Conformal factor and derivatives at coordinate y."""
    sn, cn, dn = jacobi(c.r * y, c.k)
    w = c.a1 * (1.0 - c.q2 * sn * sn)
    wp = -2.0 * c.a1 * c.q2 * c.r * sn * cn * dn
    return MetricSample(y=y, w=w, w_prime=wp, u=math.log(w), u_prime=wp / w)


def first_integral_residual(c: DerivedConstants, y: float) -> float:
    """|(w')^2 + 8 w^3 - 4 beta w^2 + 4 |psi|^2| at y; zero analytically."""
    m = metric_at(c, y)
    return abs(m.w_prime**2 + 8.0 * m.w**3 - 4.0 * c.beta * m.w**2 + 4.0 * abs(c.psi) ** 2)


def gauss_residual(c: DerivedConstants, y: float, step: float = 1e-5) -> float:
    """|u''/4 + e^u - |psi|^2 e^{-2u}| with u'' by central differences."""
    um = metric_at(c, y - step).u
    u0 = metric_at(c, y).u
    up = metric_at(c, y + step).u
    upp = (up - 2.0 * u0 + um) / (step * step)
    return abs(0.25 * upp + math.exp(u0) - abs(c.psi) ** 2 * math.exp(-2.0 * u0))
