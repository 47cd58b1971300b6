"""Degree-one potential of a translationally equivariant surface.

A surface of the family is generated by two scalars: a1 = e^{u(0)} > 0, the
conformal factor at the origin (chosen where u' vanishes and where e^u is
maximal), and the constant cubic-form coefficient psi != 0.  Everything else
is derived: the first integral constant beta = 2 a1 + |psi|^2 / a1^2, the
remaining roots a2, -a3 of w^3 - (beta/2) w^2 + |psi|^2 / 2, the elliptic
modulus, and the constant loop-algebra matrix

    D(lambda) = [[0,          -lam*conj(b), a/lam],
                 [b/lam,       0,           -lam*conj(a)],
                 [-lam*conj(a), a/lam,       0]],

with a = i e^{u(0)/2}, b = -i psi e^{-u(0)}.  For |lambda| = 1, D is
skew-Hermitian and trace free with characteristic polynomial
mu^3 + beta mu - 2i Re(lambda^{-3} psi); its eigenvalues i*d_j and
orthonormal eigenvectors l_j drive all closed-form evaluation routes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import elliptic, linalg3


class SurfaceClassError(ValueError):
    """Raised when a degenerate member of the family is rejected."""


class TotallyGeodesicError(SurfaceClassError):
    """psi = 0: the totally geodesic RP^2, outside this family's scope."""


class FlatCliffordError(SurfaceClassError):
    """a1 = |psi|^(2/3): the flat Clifford torus, has multiple eigenvalues."""


class HyperplaneDegenerateError(SurfaceClassError):
    """Re(lambda^-3 psi) = 0: a zero eigenvalue; the lift degenerates to a hyperplane."""


class SurfaceClass(enum.Enum):
    GENERIC = "Generic"
    FLAT_CLIFFORD = "FlatClifford"
    TOTALLY_GEODESIC = "TotallyGeodesic"
    HYPERPLANE_DEGENERATE_LAMBDA = "HyperplaneDegenerateLambda"


@dataclass(frozen=True)
class SurfaceParams:
    """Generating scalars of the family: a1 = e^{u(0)} > 0 and psi != 0."""

    a1: float
    psi: complex

    def __post_init__(self):
        if not (self.a1 > 0.0 and math.isfinite(self.a1)):
            raise ValueError(f"a1 must be positive and finite, got {self.a1}")


@dataclass(frozen=True)
class DerivedConstants:
    """Everything computable from SurfaceParams for a generic surface.

    a1, a2, -a3 are the roots of w^3 - (beta/2) w^2 + |psi|^2/2 with
    a1 > a2 > a3 > 0; k^2 = (a1-a2)/(a1+a3); q2 = q^2 = (a1-a2)/a1;
    r = sqrt(2(a1+a3)); T = K(k)/r is the half period of e^u.
    """

    a1: float
    psi: complex
    beta: float
    a2: float
    a3: float
    k: float
    q2: float
    r: float
    T: float
    a: complex
    b: complex


_FLAT_TOL = 1e-9


def classify(params: SurfaceParams, lam: complex | None = None, tol: float = _FLAT_TOL) -> SurfaceClass:
    """Classify the input, optionally at a spectral parameter lambda.

    TotallyGeodesic (psi = 0) and FlatClifford (a1 = |psi|^(2/3)) do not
    depend on lambda; HyperplaneDegenerateLambda flags the at most six unit
    lambda with Re(lambda^-3 psi) = 0 where the canonical lift degenerates.
    """
    apsi = abs(params.psi)
    if apsi == 0.0:
        return SurfaceClass.TOTALLY_GEODESIC
    if abs(params.a1 - apsi ** (2.0 / 3.0)) < tol * params.a1:
        return SurfaceClass.FLAT_CLIFFORD
    if lam is not None:
        if abs((params.psi / lam**3).real) < tol * apsi:
            return SurfaceClass.HYPERPLANE_DEGENERATE_LAMBDA
    return SurfaceClass.GENERIC


def derive_constants(params: SurfaceParams) -> DerivedConstants:
    """Derived constants of a generic surface; rejects degenerate input.

    Raises TotallyGeodesicError for psi = 0, FlatCliffordError at the Clifford
    point, and ValueError when a1 is below |psi|^(2/3) (the origin convention
    requires e^{u(0)} to be the maximum of the conformal factor; the surface
    with e^{u(0)} at the minimum is the same one reparametrized).
    """
    tag = classify(params)
    if tag is SurfaceClass.TOTALLY_GEODESIC:
        raise TotallyGeodesicError("psi = 0 generates the totally geodesic RP^2")
    if tag is SurfaceClass.FLAT_CLIFFORD:
        raise FlatCliffordError("a1 = |psi|^(2/3) is the flat Clifford torus")
    a1 = params.a1
    psi = complex(params.psi)
    if a1 < abs(psi) ** (2.0 / 3.0):
        raise ValueError(
            "a1 must be the maximum of the conformal factor: a1 > |psi|^(2/3)"
        )
    beta = 2.0 * a1 + abs(psi) ** 2 / a1**2
    s = beta / 2.0 - a1  # = |psi|^2 / (2 a1^2) > 0
    root = math.sqrt(s * s + 4.0 * a1 * s)
    a2 = (s + root) / 2.0
    a3 = (-s + root) / 2.0
    k2 = (a1 - a2) / (a1 + a3)
    q2 = (a1 - a2) / a1
    r = math.sqrt(2.0 * (a1 + a3))
    k = math.sqrt(k2)
    T = elliptic.complete_K(k) / r
    a = 1j * math.sqrt(a1)
    b = -1j * psi / a1
    return DerivedConstants(a1, psi, beta, a2, a3, k, q2, r, T, a, b)


def potential_matrix(c: DerivedConstants, lam: complex) -> np.ndarray:
    """The constant potential D(lambda), lambda in C^* (unit circle for su(3))."""
    lam = complex(lam)
    if lam == 0:
        raise ValueError("lambda must be nonzero")
    a, b = c.a, c.b
    return np.array(
        [
            [0, -lam * np.conj(b), a / lam],
            [b / lam, 0, -lam * np.conj(a)],
            [-lam * np.conj(a), a / lam, 0],
        ],
        dtype=complex,
    )


def char_poly_eval(c: DerivedConstants, lam: complex, mu: complex) -> complex:
    """det(mu I - D(lambda)) = mu^3 + beta mu - i (lam^3 conj(psi) + lam^-3 psi).

    On |lambda| = 1 the constant term is -2i Re(lambda^-3 psi).
    """
    lam = complex(lam)
    return mu**3 + c.beta * mu - 1j * (lam**3 * np.conj(c.psi) + c.psi / lam**3)


def commutant_matrix(c: DerivedConstants, lam: complex) -> np.ndarray:
    """L0 = D^2 - (1/3) tr(D^2) I, spanning the commutant of D with D itself."""
    d = potential_matrix(c, lam)
    d2 = d @ d
    return d2 - (np.trace(d2) / 3.0) * np.eye(3)


@dataclass
class EigenSystem:
    """Eigendata of D(lambda) on the unit circle.

    d holds the three real numbers with eigenvalues i*d_j, sorted descending
    (d1 + d2 + d3 = 0, pair sums -beta, product -2 Re(lambda^-3 psi));
    vectors[j] is the orthonormal eigenvector l_j, phased so that its third
    component (the coefficient against e_3 = Q^{-1}(y=0) e_3) is real and
    nonnegative, falling back to a real-positive largest component when the
    third vanishes.
    """

    lam: complex
    d: np.ndarray
    vectors: np.ndarray  # shape (3, 3); vectors[j] is l_j


def _check_unit(lam: complex) -> complex:
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-8:
        raise ValueError(f"|lambda| = 1 required, got |lambda| = {abs(lam)!r}")
    return lam


def _fix_phase(v: np.ndarray, lam: complex) -> np.ndarray:
    """Positive-coefficient phase convention for an eigenvector.

    The third component (the expansion coefficient against e_3 at the
    origin) is made real and nonnegative.  When it vanishes -- the sn-mode
    of the real-cubic-form regime -- the coefficient seen first is the one
    in the y-derivative of the lift at the origin, which points along
    lam*e_2 - lam^{-1}*e_1; anchoring against that direction keeps the
    reconstructed frame equal to the identity at z = 0.
    """
    anchor = v[2]
    if abs(anchor) < 1e-9:
        anchor = -v[0] * lam + v[1] / lam
    if abs(anchor) < 1e-9:
        anchor = v[int(np.argmax(np.abs(v)))]
    return v * (np.conj(anchor) / abs(anchor))


def eigensystem(c: DerivedConstants, lam: complex) -> EigenSystem:
    """Eigenvalues i*d_j and orthonormal eigenvectors l_j of D(lambda), |lambda|=1.

    d_j are the descending roots of d^3 - beta d + 2 Re(lambda^-3 psi) = 0.
    Eigenvectors come from the closed form

        s_mu = (|a|^2 + mu^2, b mu / lam + lam^2 conj(a)^2,
                a b / lam^2 - lam conj(a) mu),     mu = i d_j,

    with a rank-2 cross-product fallback when s_mu degenerates.
    """
    lam = _check_unit(lam)
    q = 2.0 * (c.psi / lam**3).real
    roots, multiple = linalg3.solve_depressed_cubic(-c.beta, q)
    if multiple:
        raise FlatCliffordError("multiple eigenvalues of D: flat configuration")
    dmat = potential_matrix(c, lam)
    a, b = c.a, c.b
    vectors = []
    for dj in roots:
        mu = 1j * dj
        s = np.array(
            [
                abs(a) ** 2 + mu**2,
                b * mu / lam + lam**2 * np.conj(a) ** 2,
                a * b / lam**2 - lam * np.conj(a) * mu,
            ],
            dtype=complex,
        )
        ns = float(np.linalg.norm(s))
        if ns < 1e-10 * max(1.0, abs(a) ** 2):
            v = linalg3._kernel_vector(dmat - mu * np.eye(3))
            if v is None:
                raise ArithmeticError("eigenvector extraction failed")
        else:
            v = s / ns
        vectors.append(_fix_phase(v, lam))
    vecs = np.array(vectors)
    # orthonormal by the spectral theorem; polish cross terms
    for j in range(1, 3):
        for i in range(j):
            vecs[j] = vecs[j] - linalg3.herm_inner(vecs[j], vecs[i]) * vecs[i]
        vecs[j] /= np.linalg.norm(vecs[j])
        vecs[j] = _fix_phase(vecs[j], lam)
    return EigenSystem(lam=lam, d=roots, vectors=vecs)


def eigensystem_sweep(c: DerivedConstants, lams, track: bool = True) -> list[EigenSystem]:
    """Eigensystems along a lambda path.

    With track=True each sample's labels are permuted to follow the previous
    sample by eigenvalue proximity (useful across label collisions in plots);
    the per-sample descending order is then not guaranteed.
    """
    out: list[EigenSystem] = []
    for lam in lams:
        es = eigensystem(c, lam)
        if track and out:
            prev = out[-1].d
            perms = (
                (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0),
            )
            best = min(perms, key=lambda p: float(np.sum(np.abs(es.d[list(p)] - prev))))
            es = EigenSystem(lam=es.lam, d=es.d[list(best)], vectors=es.vectors[list(best)])
        out.append(es)
    return out
