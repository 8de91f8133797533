"""Matrix representations of real Clifford algebras in arbitrary signature.

Conventions (fixed once, used everywhere downstream):

* Clifford relation:  ``g_i g_j + g_j g_i = -2 eps_i delta_ij Id``, where
  ``eps_i = -1`` for the ``p`` timelike directions (listed first) and ``+1``
  for the ``q`` spacelike ones.  Hence a spacelike unit vector squares to
  ``-Id`` and a timelike one to ``+Id``.
* The representation is built from the Jordan-Wigner family of Hermitian
  matrices ``h_1 ... h_n`` (``h_i h_j + h_j h_i = 2 delta_ij``): spacelike
  slots use ``i*h``, timelike slots use ``i*(i*h) = -h``.  The construction
  is deterministic: the same signature always yields bitwise-identical
  matrices.
* The invariant inner product is ``<phi, psi> = phi^dagger beta psi`` with
  ``beta = i^(p(p-1)/2) g_0 ... g_(p-1)`` (product over the timelike
  gammas).  ``beta`` is Hermitian with eigenvalues +-1, so some spinor has
  ``<phi, phi> = 1`` exactly.  Vector adjointness holds with a uniform sign:
  ``<g(X) phi, psi> = s <phi, g(X) psi>`` with ``s = (-1)^(p-1)``; in
  particular ``s = +1`` in Lorentzian signature (index 1) and ``s = -1`` in
  index 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "Signature",
    "SpinorSpace",
    "Spinor",
    "build_spinor_space",
    "clifford_action",
    "inner_product",
    "half_spinor_split",
    "gamma_product",
    "spinor_space_to_json",
    "spinor_space_from_json",
]

_DIM_CAP = 12


@dataclass(frozen=True)
class Signature:
    """Signature (p, q): p timelike directions first, then q spacelike."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError(f"invalid signature ({self.p},{self.q})")

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def epsilon(self) -> np.ndarray:
        """Diagonal of the frame metric: -1 repeated p times, then +1."""
        return np.array([-1.0] * self.p + [1.0] * self.q)

    def as_tuple(self) -> tuple[int, int]:
        return (self.p, self.q)


def _pauli():
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    return sx, sy, sz


def _hermitian_generators(n: int) -> list[np.ndarray]:
    """Jordan-Wigner chain: n Hermitian matrices with h_i h_j + h_j h_i = 2 delta_ij.

    For n = 2m or 2m+1 the matrices are 2^m x 2^m:
        h_{2j-1} = sz^(j-1) (x) sx (x) 1^(m-j)
        h_{2j}   = sz^(j-1) (x) sy (x) 1^(m-j)
        h_{2m+1} = sz^m
    """
    sx, sy, sz = _pauli()
    if n == 1:
        return [np.array([[1.0 + 0j]])]
    m = n // 2

    def chain(j, mid):
        mats = [sz] * (j - 1) + [mid] + [np.eye(2)] * (m - j)
        out = mats[0]
        for mm in mats[1:]:
            out = np.kron(out, mm)
        return out

    hs = []
    for j in range(1, m + 1):
        hs.append(chain(j, sx))
        hs.append(chain(j, sy))
    if n % 2 == 1:
        vol = sz
        for _ in range(m - 1):
            vol = np.kron(vol, sz)
        hs.append(vol)
    return hs


@dataclass(frozen=True)
class SpinorSpace:
    """Concrete irreducible Clifford module with its invariant inner product.

    Attributes:
        signature: the (p, q) signature.
        gamma: tuple of n complex matrices, one per orthonormal basis vector.
        beta: Hermitian matrix of the invariant inner product.
        volume: ordered product gamma_0 ... gamma_(n-1).
        chirality_normalizer: unimodular c with (c * volume)^2 = Id (even n).
        adjoint_sign: uniform s in {+1,-1} with gamma_i^dagger beta = s beta gamma_i.
    """

    signature: Signature
    gamma: tuple = field(repr=False)
    beta: np.ndarray = field(repr=False)
    volume: np.ndarray = field(repr=False)
    chirality_normalizer: complex
    adjoint_sign: int

    @property
    def dim_spinor(self) -> int:
        return self.gamma[0].shape[0]

    @property
    def n(self) -> int:
        return self.signature.n

    def chirality_operator(self) -> np.ndarray:
        """c * volume; squares to +Id for even n."""
        return self.chirality_normalizer * self.volume

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        """Chirality projectors P+ = (Id + c*vol)/2, P- = (Id - c*vol)/2."""
        if self.n % 2 != 0:
            raise ValueError("chirality projectors require even dimension")
        chi = self.chirality_operator()
        eye = np.eye(self.dim_spinor)
        return (eye + chi) / 2, (eye - chi) / 2


@lru_cache(maxsize=None)
def _build_cached(p: int, q: int) -> SpinorSpace:
    sig = Signature(p, q)
    n = sig.n
    if n > _DIM_CAP:
        raise ValueError(f"dimension cap exceeded: p+q = {n} > {_DIM_CAP}")
    hs = _hermitian_generators(n)
    gammas = []
    for i, h in enumerate(hs):
        if i < p:
            gammas.append(-h)  # i * (i*h): timelike, squares to +Id
        else:
            gammas.append(1j * h)  # spacelike, squares to -Id
    beta = np.eye(gammas[0].shape[0], dtype=complex)
    for i in range(p):
        beta = beta @ gammas[i]
    beta = (1j) ** (p * (p - 1) // 2) * beta
    volume = np.eye(gammas[0].shape[0], dtype=complex)
    for g in gammas:
        volume = volume @ g
    vol2 = volume @ volume
    if abs(vol2[0, 0] - 1) < 1e-9:
        c = 1.0 + 0j
    else:
        c = 1j
    return SpinorSpace(
        signature=sig,
        gamma=tuple(g.copy() for g in gammas),
        beta=beta,
        volume=volume,
        chirality_normalizer=c,
        adjoint_sign=(-1) ** (p - 1) if p > 0 else -1,
    )


def build_spinor_space(sig: Signature | tuple[int, int]) -> SpinorSpace:
    """Construct the canonical spinor representation for a signature.

    Deterministic: the same signature returns the identical (cached) object.
    Raises ValueError when p + q exceeds the practical cap of 12.
    """
    if isinstance(sig, tuple):
        sig = Signature(*sig)
    return _build_cached(sig.p, sig.q)


@dataclass
class Spinor:
    """Complex coefficient vector in a SpinorSpace, optionally chiral."""

    space: SpinorSpace
    coeffs: np.ndarray
    chirality: str | None = None  # "plus" | "minus" | None

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.space.dim_spinor,):
            raise ValueError(
                f"coefficient length {self.coeffs.shape} does not match "
                f"spinor dimension {self.space.dim_spinor}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def gamma_product(space: SpinorSpace, indices) -> np.ndarray:
    """Ordered product gamma_{i1} ... gamma_{ip} for a multi-index."""
    out = np.eye(space.dim_spinor, dtype=complex)
    for i in indices:
        out = out @ space.gamma[i]
    return out


def vector_action_matrix(space: SpinorSpace, x) -> np.ndarray:
    """Matrix of Clifford multiplication by the frame vector x."""
    x = np.asarray(x, dtype=float)
    if x.shape != (space.n,):
        raise ValueError("vector length does not match signature dimension")
    out = np.zeros((space.dim_spinor, space.dim_spinor), dtype=complex)
    for i, xi in enumerate(x):
        if xi != 0.0:
            out += xi * space.gamma[i]
    return out


def form_action_matrix(space: SpinorSpace, form) -> np.ndarray:
    """Matrix of the multi-index action sum_I c_I gamma_{i1}...gamma_{ip}.

    ``form`` must expose ``signature`` and ``terms`` (mapping from strictly
    increasing index tuples to coefficients), as PForm does.
    """
    if form.signature.as_tuple() != space.signature.as_tuple():
        raise ValueError("form/space signature mismatch")
    out = np.zeros((space.dim_spinor, space.dim_spinor), dtype=complex)
    for idx, c in form.terms.items():
        if c != 0.0:
            out += c * gamma_product(space, idx)
    return out


def clifford_action(element, phi: Spinor) -> Spinor:
    """Clifford multiplication of a vector or p-form on a spinor.

    Vectors may be given as plain arrays or FrameVector-like objects with a
    ``coeffs``/``signature`` pair; forms as PForm-like objects with
    ``degree``/``terms``.  The element must be expressed in the orthonormal
    frame of ``phi.space``; mismatched signatures raise ValueError.
    """
    space = phi.space
    sig_of = getattr(element, "signature", None)
    if sig_of is not None and sig_of.as_tuple() != space.signature.as_tuple():
        raise ValueError("element/space signature mismatch")
    if hasattr(element, "terms"):
        mat = form_action_matrix(space, element)
    else:
        vec = getattr(element, "coeffs", element)
        mat = vector_action_matrix(space, vec)
    return Spinor(space, mat @ phi.coeffs)


def inner_product(phi: Spinor, psi: Spinor) -> complex:
    """Invariant inner product <phi, psi> = phi^dagger beta psi."""
    if phi.space is not psi.space and (
        phi.space.signature.as_tuple() != psi.space.signature.as_tuple()
    ):
        raise ValueError("spinor space mismatch")
    return complex(np.conj(phi.coeffs) @ phi.space.beta @ psi.coeffs)


def half_spinor_split(phi: Spinor) -> tuple[Spinor, Spinor]:
    """Split into chirality halves (P+ phi, P- phi); requires even n."""
    if phi.space.n % 2 != 0:
        raise ValueError("half-spinor split requires even total dimension")
    pp, pm = phi.space.projectors()
    return (
        Spinor(phi.space, pp @ phi.coeffs, chirality="plus"),
        Spinor(phi.space, pm @ phi.coeffs, chirality="minus"),
    )


def _complex_matrix_to_json(m: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def _complex_matrix_from_json(rows) -> np.ndarray:
    return np.array([[complex(a, b) for a, b in row] for row in rows])


def spinor_space_to_json(space: SpinorSpace) -> dict:
    """Serialize the representation matrices (row-major complex pairs)."""
    return {
        "signature": {"p": space.signature.p, "q": space.signature.q},
        "dim_spinor": space.dim_spinor,
        "gamma": [_complex_matrix_to_json(g) for g in space.gamma],
        "beta": _complex_matrix_to_json(space.beta),
        "volume": _complex_matrix_to_json(space.volume),
        "adjoint_sign": space.adjoint_sign,
    }


def spinor_space_from_json(data: dict) -> SpinorSpace:
    sig = Signature(data["signature"]["p"], data["signature"]["q"])
    gammas = tuple(_complex_matrix_from_json(g) for g in data["gamma"])
    beta = _complex_matrix_from_json(data["beta"])
    volume = _complex_matrix_from_json(data["volume"])
    vol2 = volume @ volume
    c = 1.0 + 0j if abs(vol2[0, 0] - 1) < 1e-9 else 1j
    return SpinorSpace(
        signature=sig,
        gamma=gammas,
        beta=beta,
        volume=volume,
        chirality_normalizer=c,
        adjoint_sign=int(data["adjoint_sign"]),
    )
