"""Monodromy phases, rationality certificates, cylinder/torus classification.

A translation z -> z + omega with omega = p + 2mTi preserves the metric and
acts on the extended frame by the monodromy matrix

    M(lambda) = exp(p D - m Re(beta1(2T)) D - i m Im(beta2(2T)) L0),

whose eigenvalues are exp(i theta_j) with

    theta_j = p d_j - m [Re(beta1) d_j + Im(beta2) (-d_j^2 + 2 beta / 3)]
            = p d_j + m G_j(2T),

the second equality being the exact cancellation identity between the
monodromy data and the lift phases.  The surface closes up under omega
iff theta_1, theta_2 are multiples of 2 pi (theta_3 follows since all
three sum to zero).  Rationality of d-ratios and of the 2T phase data is
certified with continued-fraction convergents under an explicit
(max_denominator, tolerance) policy.

In the real-cubic-form regime the beta integrals diverge, but sn and cn are
antiperiodic over 2T, so theta_j = p d_j + m pi on the sn/cn labels and
p d_j on the dn label; the possible torus lattices there are
p_f Z + 4Ti Z and p_f Z + (p_f/2 + 2Ti) Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import immersion, iwasawa
from .linalg3 import matexp_skew
from .potential import (
    DerivedConstants,
    _check_unit,
    commutant_matrix,
    eigensystem,
    potential_matrix,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RationalCertificate:
    """A certified rational approximation num/den of value."""

    value: float
    num: int
    den: int
    residual: float


@dataclass
class MonodromyPhases:
    p: float
    m: int
    lam: complex
    theta: np.ndarray  # phases of the monodromy eigenvalues, eigensystem order


@dataclass
class PeriodVerdict:
    tag: str  # "Torus" | "Cylinder" | "NoPeriodFound"
    lam: complex
    omega: complex | None = None
    lattice: tuple[complex, complex] | None = None
    certificates: dict[str, RationalCertificate] = field(default_factory=dict)


def rational_approx(x: float, max_den: int, tol: float) -> RationalCertificate | None:
    """Best continued-fraction convergent of x with denominator <= max_den.

    Returns None when even the best convergent misses x by more than tol.
    Increasing max_den never loses a certificate (later convergents only
    improve).
    """
    if max_den < 1:
        raise ValueError("max_den must be >= 1")
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x}")
    x0 = x
    h_prev, k_prev = 1, 0
    a = math.floor(x)
    h, k = int(a), 1
    for _ in range(64):
        frac = x - a
        if frac < 1e-15 * max(1.0, abs(x0)):
            break
        x = 1.0 / frac
        a = math.floor(x)
        h_next = int(a) * h + h_prev
        k_next = int(a) * k + k_prev
        if k_next > max_den:
            break
        h_prev, k_prev, h, k = h, k, h_next, k_next
    residual = abs(x0 - h / k)
    if residual > tol:
        return None
    return RationalCertificate(value=x0, num=h, den=k, residual=residual)


def _phase_data(c: DerivedConstants, lam: complex, tol: float) -> np.ndarray:
    """G_j(2T) in eigensystem order, from the cached monodromy integrals."""
    es = eigensystem(c, lam)
    re_b1, im_b2 = iwasawa.monodromy_data(c, lam, tol)
    return -(re_b1 * es.d + im_b2 * (-es.d**2 + 2.0 * c.beta / 3.0))


def monodromy_phases(
    c: DerivedConstants,
    p: float,
    m: int,
    lam: complex,
    tol: float = 1e-11,
    route: str = "auto",
) -> MonodromyPhases:
    """Eigenvalue phases theta_j of the monodromy of z -> z + p + 2mTi.

    route="beta" uses (Re beta1(2T), Im beta2(2T)); route="g" uses the lift
    phases G_j(2T); "auto" picks "beta" and falls back to the closed
    antiperiodicity form in the real-cubic-form regime (where the integrals
    do not exist).
    """
    lam = _check_unit(lam)
    es = eigensystem(c, lam)
    regime = immersion.regime_of(c, lam)
    if regime == "imaginary":
        from .potential import HyperplaneDegenerateError

        raise HyperplaneDegenerateError("monodromy undefined at hyperplane-degenerate lambda")
    if m == 0:
        theta = p * es.d
    elif regime == "real":
        # sn, cn pick up a sign over 2T; dn does not
        idx, _ = immersion._real_assignment(c, es)
        flip = np.zeros(3)
        flip[idx[0]] = flip[idx[1]] = 1.0
        theta = p * es.d + m * math.pi * flip
    elif route in ("auto", "beta"):
        re_b1, im_b2 = iwasawa.monodromy_data(c, lam, tol)
        theta = p * es.d - m * (re_b1 * es.d + im_b2 * (-es.d**2 + 2.0 * c.beta / 3.0))
    elif route == "g":
        g = np.array(immersion._g_full_period(c, lam, tol))
        theta = p * es.d + m * g
    else:
        raise ValueError(f"unknown route {route!r}")
    return MonodromyPhases(p=p, m=m, lam=lam, theta=theta)


def monodromy_matrix(c: DerivedConstants, p: float, m: int, lam: complex, tol: float = 1e-11) -> np.ndarray:
    """The monodromy matrix itself, by exponentiating the loop-algebra element."""
    lam = _check_unit(lam)
    re_b1, im_b2 = iwasawa.monodromy_data(c, lam, tol)
    gen = (p - m * re_b1) * potential_matrix(c, lam) - 1j * m * im_b2 * commutant_matrix(c, lam)
    return matexp_skew(gen, 1.0)


def _phase_defect(theta: float) -> float:
    """Distance of theta from the nearest multiple of 2 pi."""
    return abs(theta - TWO_PI * round(theta / TWO_PI))


def classify_cylinder(
    c: DerivedConstants,
    lam: complex,
    omega: complex,
    phase_tol: float = 1e-8,
    tol: float = 1e-11,
) -> PeriodVerdict:
    """Is omega = p + 2mTi a period of the immersion at lambda?

    The imaginary part must be an integer multiple of 2T (any period
    preserves the metric).  Cylinder iff theta_1 and theta_2 are multiples
    of 2 pi within phase_tol; the third phase is implied and checked.
    """
    lam = _check_unit(lam)
    omega = complex(omega)
    period = 2.0 * c.T
    m_real = omega.imag / period
    m = round(m_real)
    if abs(m_real - m) > 1e-9 * max(1.0, abs(m_real)):
        raise ValueError(
            f"Im(omega) = {omega.imag!r} is not an integer multiple of 2T = {period!r}"
        )
    ph = monodromy_phases(c, omega.real, m, lam, tol)
    defects = [_phase_defect(t) for t in ph.theta]
    if defects[0] <= phase_tol and defects[1] <= phase_tol:
        if defects[2] > 10.0 * phase_tol:
            raise ArithmeticError(
                "third monodromy phase inconsistent with the trace constraint"
            )
        return PeriodVerdict(tag="Cylinder", lam=lam, omega=omega)
    return PeriodVerdict(tag="NoPeriodFound", lam=lam, omega=omega)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def classify_torus(
    c: DerivedConstants,
    lam: complex,
    max_den: int = 64,
    tol: float = 1e-8,
    phase_tol: float = 1e-8,
    quad_tol: float = 1e-11,
    route: str = "beta",
) -> PeriodVerdict:
    """Torus / cylinder / no-period classification at lambda.

    Torus needs two certificates: the eigenvalue ratio d_2/d_1 rational
    (existence of the smallest real period p_f), and rationality of the
    2T phase data (existence of a non-real period).  The lattice returned
    is the normal form (p_f, omega_f) with p_f the smallest positive real
    period and omega_f the period of smallest positive height.
    """
    lam = _check_unit(lam)
    es = eigensystem(c, lam)
    regime = immersion.regime_of(c, lam)
    if regime == "imaginary":
        from .potential import HyperplaneDegenerateError

        raise HyperplaneDegenerateError("classification refused at hyperplane-degenerate lambda")

    certs: dict[str, RationalCertificate] = {}

    if regime == "real":
        idx, _ = immersion._real_assignment(c, es)
        d_sn, d_cn = float(es.d[idx[0]]), float(es.d[idx[1]])
        cert = rational_approx(d_sn / d_cn, max_den, tol)  # = a2/a1 in (0, 1)
        if cert is None:
            # no certified real period; the imaginary period 4Ti still exists
            # in this regime and classify_cylinder(..., 4Ti) confirms it
            return PeriodVerdict(tag="NoPeriodFound", lam=lam)
        certs["d_ratio"] = cert
        n_sn, n_cn = cert.num, cert.den
        gamma = d_sn / n_sn
        p_f = TWO_PI / abs(gamma)
        if n_sn % 2 == 1 and n_cn % 2 == 1:
            omega_f = 0.5 * p_f + 2.0 * c.T * 1j
        else:
            omega_f = 4.0 * c.T * 1j
        return PeriodVerdict(
            tag="Torus", lam=lam, lattice=(complex(p_f), omega_f), certificates=certs
        )

    # non-real regime
    cert = rational_approx(float(es.d[1] / es.d[0]), max_den, tol)
    if cert is None:
        return PeriodVerdict(tag="NoPeriodFound", lam=lam)
    certs["d_ratio"] = cert
    n1, n2 = cert.den, cert.num  # d1/d2 = n1/n2, gcd 1, n1 > 0
    p_f = TWO_PI * n1 / float(es.d[0])

    if route == "g":
        g = np.array(immersion._g_full_period(c, lam, quad_tol))
    else:
        g = _phase_data(c, lam, quad_tol)
    s = (n2 * g[0] - n1 * g[1]) / TWO_PI
    cert_s = rational_approx(float(s), max_den, tol)
    if cert_s is None:
        return PeriodVerdict(tag="Cylinder", lam=lam, omega=complex(p_f), certificates=certs)
    certs["phase"] = cert_s

    m_f, u = cert_s.den, cert_s.num
    _, alpha, beta_c = _egcd(n2, n1)  # alpha n2 + beta_c n1 = 1
    l1 = alpha * u
    p0 = (TWO_PI * l1 - m_f * g[0]) / float(es.d[0])
    p0 -= p_f * math.floor(p0 / p_f)
    omega_f = p0 + 2.0 * m_f * c.T * 1j
    ph = monodromy_phases(c, p0, m_f, lam, quad_tol)
    if max(_phase_defect(t) for t in ph.theta) > 10.0 * phase_tol:
        raise ArithmeticError("constructed lattice generator fails the phase check")
    return PeriodVerdict(tag="Torus", lam=lam, lattice=(complex(p_f), omega_f), certificates=certs)
