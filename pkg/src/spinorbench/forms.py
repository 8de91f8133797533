"""Spinor bilinears: Dirac currents, induced p-forms, causal classification.

A spinor phi in Lorentzian signature induces a vector V (its Dirac current)
through ``g(V, X) = -<g(X) phi, phi>``, and more generally a real p-form
through ``alpha_I = -i^(p(p-1)/2) <gamma_I phi, phi>`` over strictly
increasing multi-indices I.  In index-2 signature the degree-2 case uses the
prefactor -i and is nonzero for every nonzero spinor.

Forms are stored with lower indices in the orthonormal coframe; raising and
lowering is the diagonal frame metric.  Interior products follow
``T . (a ^ b) = g(T,a) b - g(T,b) a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

import numpy as np

from .clifford import Signature, Spinor, gamma_product

__all__ = [
    "FrameVector",
    "PForm",
    "CausalType",
    "dirac_current",
    "associated_p_form",
    "two_form_from_spinor",
    "timelike_contraction",
    "causal_type",
    "minkowski_square",
    "wedge_covectors",
    "pform_to_json",
    "pform_from_json",
]

LIGHTLIKE_TOL = 1e-9


@dataclass
class FrameVector:
    """Real vector in an orthonormal frame of the given signature."""

    coeffs: np.ndarray
    signature: Signature

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)
        if self.coeffs.shape != (self.signature.n,):
            raise ValueError("vector length does not match signature dimension")

    def norm_euclid(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def minkowski_square(x: FrameVector | np.ndarray, sig: Signature | None = None) -> float:
    """g(X, X) with the diagonal frame metric."""
    if isinstance(x, FrameVector):
        sig = x.signature
        x = x.coeffs
    return float(np.sum(sig.epsilon * np.asarray(x, dtype=float) ** 2))


@dataclass
class PForm:
    """Antisymmetric form stored on strictly increasing multi-indices."""

    degree: int
    terms: dict = field(default_factory=dict)
    signature: Signature = None

    def __post_init__(self):
        n = self.signature.n
        if not 0 <= self.degree <= n:
            raise ValueError(f"degree {self.degree} out of range for n = {n}")
        clean = {}
        for idx, c in self.terms.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.degree:
                raise ValueError("multi-index length does not match degree")
            if any(not 0 <= i < n for i in idx) or any(
                idx[k] >= idx[k + 1] for k in range(len(idx) - 1)
            ):
                raise ValueError(f"multi-index {idx} not strictly increasing in range")
            clean[idx] = float(c)
        self.terms = clean

    def coefficient(self, idx) -> float:
        return self.terms.get(tuple(idx), 0.0)

    def max_abs(self) -> float:
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def as_matrix(self) -> np.ndarray:
        """Degree-2 forms only: antisymmetric matrix of coefficients."""
        if self.degree != 2:
            raise ValueError("as_matrix requires degree 2")
        n = self.signature.n
        omega = np.zeros((n, n))
        for (i, j), c in self.terms.items():
            omega[i, j] = c
            omega[j, i] = -c
        return omega

    @classmethod
    def from_matrix(cls, omega: np.ndarray, sig: Signature) -> "PForm":
        omega = np.asarray(omega, dtype=float)
        terms = {}
        n = sig.n
        for i in range(n):
            for j in range(i + 1, n):
                c = 0.5 * (omega[i, j] - omega[j, i])
                if c != 0.0:
                    terms[(i, j)] = c
        return cls(degree=2, terms=terms, signature=sig)


def wedge_covectors(covectors, sig: Signature) -> PForm:
    """Wedge product of 1-forms given by their (lower-index) coefficients."""
    covs = [np.asarray(c, dtype=float) for c in covectors]
    p = len(covs)
    terms = {}
    for idx in combinations(range(sig.n), p):
        sub = np.array([[c[i] for i in idx] for c in covs])
        val = float(np.linalg.det(sub))
        if val != 0.0:
            terms[idx] = val
    return PForm(degree=p, terms=terms, signature=sig)


class CausalType(Enum):
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"
    SPACELIKE = "spacelike"
    ZERO = "zero"


def causal_type(x: FrameVector | np.ndarray, tol: float = LIGHTLIKE_TOL,
                sig: Signature | None = None) -> CausalType:
    """Classify by the sign of g(X,X); |g(X,X)| <= tol * |X|^2 is lightlike."""
    if isinstance(x, FrameVector):
        sig = x.signature
        x = x.coeffs
    x = np.asarray(x, dtype=float)
    scale = float(x @ x)
    if scale == 0.0:
        return CausalType.ZERO
    g = float(np.sum(sig.epsilon * x**2))
    if abs(g) <= tol * scale:
        return CausalType.LIGHTLIKE
    return CausalType.TIMELIKE if g < 0 else CausalType.SPACELIKE


def _pairing(phi: Spinor, idx) -> complex:
    """<gamma_{i1}...gamma_{ip} phi, phi> for a strictly increasing index."""
    sp = phi.space
    vec = gamma_product(sp, idx) @ phi.coeffs
    return complex(np.conj(vec) @ sp.beta @ phi.coeffs)


def dirac_current(phi: Spinor) -> FrameVector:
    """Dirac current of a Lorentzian spinor: g(V, e_j) = -<gamma_j phi, phi>.

    Nonzero and causal for every nonzero spinor.  Raises for non-Lorentzian
    signature.
    """
    sig = phi.space.signature
    if sig.p != 1:
        raise ValueError("Dirac current requires Lorentzian signature (index 1)")
    eps = sig.epsilon
    comps = np.empty(sig.n)
    for j in range(sig.n):
        comps[j] = -_pairing(phi, (j,)).real / eps[j]
    return FrameVector(comps, sig)


def associated_p_form(phi: Spinor, p: int) -> PForm:
    """Induced p-form: alpha_I = -i^(p(p-1)/2) <gamma_I phi, phi>.

    The power of i is chosen so that the coefficients come out real; the
    residual imaginary parts are discarded (tests bound them independently).
    For p = 1 this reproduces the Dirac current with its index lowered.
    """
    sig = phi.space.signature
    if not 1 <= p <= sig.n:
        raise ValueError(f"degree {p} out of range")
    pref = -((1j) ** (p * (p - 1) // 2))
    terms = {}
    for idx in combinations(range(sig.n), p):
        val = pref * _pairing(phi, idx)
        if val != 0:
            terms[idx] = val.real
    return PForm(degree=p, terms=terms, signature=sig)


def two_form_from_spinor(gamma_spinor: Spinor) -> PForm:
    """Induced 2-form of a spinor in index-2 signature (prefactor -i)."""
    sig = gamma_spinor.space.signature
    if sig.p != 2:
        raise ValueError("induced 2-form requires signature index 2")
    return associated_p_form(gamma_spinor, 2)


def interior_product(x: FrameVector | np.ndarray, omega: PForm,
                     sig: Signature | None = None) -> np.ndarray:
    """(X . omega)_j = sum_i X^i omega_{ij}; returns lower-index coefficients."""
    if isinstance(x, FrameVector):
        sig = x.signature
        x = x.coeffs
    if omega.degree != 2:
        raise ValueError("interior_product implemented for degree 2")
    return np.asarray(x, dtype=float) @ omega.as_matrix()


def timelike_contraction(t: FrameVector, omega: PForm,
                         tol: float = LIGHTLIKE_TOL) -> FrameVector:
    """Contraction T . omega of a unit timelike vector with a 2-form.

    The resulting covector is index-raised and returned as a FrameVector in
    the same frame.  Raises unless omega has degree 2 and T is timelike of
    unit norm (|g(T,T) + 1| <= 1e-8).
    """
    sig = t.signature
    if omega.degree != 2:
        raise ValueError("contraction requires a 2-form")
    if omega.signature.as_tuple() != sig.as_tuple():
        raise ValueError("signature mismatch")
    g_tt = minkowski_square(t)
    if abs(g_tt + 1.0) > 1e-8:
        raise ValueError(f"T must be unit timelike, got g(T,T) = {g_tt}")
    cov = interior_product(t, omega)
    return FrameVector(sig.epsilon * cov, sig)


def pform_to_json(omega: PForm) -> dict:
    return {
        "degree": omega.degree,
        "terms": [
            {"idx": list(idx), "c": float(c)} for idx, c in sorted(omega.terms.items())
        ],
    }


def pform_from_json(data: dict, sig: Signature) -> PForm:
    terms = {tuple(t["idx"]): float(t["c"]) for t in data["terms"]}
    return PForm(degree=int(data["degree"]), terms=terms, signature=sig)
