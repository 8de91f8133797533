"""Canonical block decompositions of skew-adjoint operators in index <= 2.

An operator ``b`` is skew-adjoint with respect to a nondegenerate symmetric
``gram`` when ``gram @ b + b.T @ gram = 0``.  For inner products of index at
most 2 every such operator decomposes into an orthogonal direct sum of a
finite menu of block pairs (inner-product matrix, operator matrix); this
module classifies an operator into that menu, producing an adapted basis and
a verified reconstruction residual.

The classifier proceeds by peeling one block at a time: eigenvalues are
clustered, one eigenvalue class is selected, a (generalized) eigenvector
chain is extracted and normalized into the canonical block shape, and the
search recurses on the invariant orthogonal complement.  The final adapted
basis is verified against the block-diagonal target; failure to verify
raises ClassificationError rather than returning a guess.

Conventions:

* ``B_IIa`` carries a signed parameter: the table's minus-labelled variant
  with parameter nu equals the plus-labelled variant with parameter -nu
  (explicit basis change), so one signed family covers both.
* The six-dimensional nilpotent block splits into two ``L12_nilp`` blocks
  and the split boost block into two ``L11`` blocks; the classifier emits
  the finest pieces.  Both composite shapes remain constructible through
  ``table_block`` for embedding tests.
* A 2-form ``omega`` corresponds to the operator ``b = gram^-1 Omega`` with
  ``Omega_ij = omega(e_i, e_j)``, i.e. ``omega(X, Y) = h(X, b Y)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .clifford import Signature
from .forms import PForm

__all__ = [
    "ClassificationError",
    "SkewOperator",
    "ValidationReport",
    "Block",
    "BlockDecomposition",
    "GenericType",
    "CausalContractionResult",
    "table_block",
    "block_matrices",
    "validate",
    "classify",
    "detect_generic_type",
    "causal_contraction_test",
    "stabilizer_dimension",
    "operator_from_form",
    "random_isometry",
]


class ClassificationError(RuntimeError):
    """Raised when the eigenstructure cannot be resolved at tolerance."""


# ---------------------------------------------------------------------------
# operators and validation
# ---------------------------------------------------------------------------

@dataclass
class SkewOperator:
    """Real matrix b, skew-adjoint for the symmetric invertible gram."""

    b: np.ndarray
    gram: np.ndarray

    def __post_init__(self):
        self.b = np.asarray(self.b, dtype=float)
        self.gram = np.asarray(self.gram, dtype=float)
        n = self.b.shape[0]
        if self.b.shape != (n, n) or self.gram.shape != (n, n):
            raise ValueError("b and gram must be square matrices of equal size")

    @property
    def n(self) -> int:
        return self.b.shape[0]


@dataclass
class ValidationReport:
    ok: bool
    skew_residual: float
    symmetry_residual: float
    gram_index: int
    messages: list = field(default_factory=list)


def validate(op: SkewOperator, tol: float = 1e-10) -> ValidationReport:
    """Check the SkewOperator invariants; returns a report, never raises."""
    msgs = []
    sym = float(np.max(np.abs(op.gram - op.gram.T)))
    if sym > tol:
        msgs.append(f"gram not symmetric: residual {sym:.3e}")
    w = np.linalg.eigvalsh(0.5 * (op.gram + op.gram.T))
    if np.min(np.abs(w)) < 1e-12 * max(1.0, np.max(np.abs(w))):
        msgs.append("gram numerically singular")
    index = int(np.sum(w < 0))
    if index > 2:
        msgs.append(f"gram index {index} exceeds 2")
    scale = max(1.0, float(np.max(np.abs(op.b))))
    skew = float(np.max(np.abs(op.gram @ op.b + op.b.T @ op.gram))) / scale
    if skew > tol:
        msgs.append(f"skew-adjointness violated: residual {skew:.3e}")
    return ValidationReport(
        ok=not msgs,
        skew_residual=skew,
        symmetry_residual=sym,
        gram_index=index,
        messages=msgs,
    )


# ---------------------------------------------------------------------------
# block menu
# ---------------------------------------------------------------------------

def _rot(nu: float) -> np.ndarray:
    return np.array([[0.0, -nu], [nu, 0.0]])


_A_IIA = np.array(
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=float
)
_A_IIB = np.array(
    [[0, 0, 1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float
)
_A_24 = np.zeros((6, 6))
_A_24[0, 4] = _A_24[4, 0] = -1.0
_A_24[1, 5] = _A_24[5, 1] = -1.0
_A_24[2, 2] = _A_24[3, 3] = 1.0


def block_matrices(kind: str, params=(), signature=None):
    """Canonical (inner product, operator) pair for a block kind."""
    params = tuple(float(x) for x in params)
    if kind == "Zero":
        if signature == (1, 0):
            return np.array([[-1.0]]), np.array([[0.0]])
        return np.array([[1.0]]), np.array([[0.0]])
    if kind == "Euclid_B":
        (nu,) = params
        return np.eye(2), _rot(nu)
    if kind == "L11":
        (lam,) = params
        return np.array([[0.0, 1.0], [1.0, 0.0]]), np.diag([lam, -lam])
    if kind == "L12_nilp":
        a = np.array([[0, 0, -1], [0, 1, 0], [-1, 0, 0]], dtype=float)
        bm = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=float)
        return a, bm
    if kind == "B_Ia":
        bm = np.zeros((4, 4))
        bm[0, 2] = bm[1, 3] = 1.0
        return _A_IIA.copy(), bm
    if kind == "B_Ib":
        a = np.array([[0, 0, 1], [0, -1, 0], [1, 0, 0]], dtype=float)
        bm = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=float)
        return a, bm
    if kind == "B_II":
        (nu,) = params
        return -np.eye(2), _rot(nu)
    if kind == "B_IIa":
        (nu,) = params
        bm = np.zeros((4, 4))
        bm[:2, :2] = _rot(nu)
        bm[2:, 2:] = _rot(nu)
        bm[0, 2] = bm[1, 3] = 1.0
        return _A_IIA.copy(), bm
    if kind == "B_IIb":
        nu, xi = params
        r = np.array([[xi, -nu], [nu, xi]])
        bm = np.zeros((4, 4))
        bm[:2, :2] = r
        bm[2:, 2:] = -r
        return _A_IIB.copy(), bm
    if kind == "Mixed_22":
        (lam,) = params
        bm = np.diag([lam, -lam, lam, -lam]).astype(float)
        bm[0, 2] = bm[1, 3] = 1.0
        return _A_IIA.copy(), bm
    if kind == "Kahler_24":
        (nu,) = params
        bm = np.zeros((6, 6))
        for k in range(3):
            bm[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = _rot(nu)
        bm[0, 2] = bm[1, 3] = bm[2, 4] = bm[3, 5] = 1.0
        return _A_24.copy(), bm
    if kind == "Nilp_24":
        bm = np.zeros((6, 6))
        bm[0, 2] = bm[1, 3] = bm[2, 4] = bm[3, 5] = 1.0
        return _A_24.copy(), bm
    if kind == "Split_22":
        (lam,) = params
        a = np.zeros((4, 4))
        a[:2, 2:] = np.eye(2)
        a[2:, :2] = np.eye(2)
        return a, np.diag([lam, lam, -lam, -lam]).astype(float)
    raise ValueError(f"unknown block kind {kind!r}")


_BLOCK_SIGNATURES = {
    "Euclid_B": (0, 2),
    "L11": (1, 1),
    "L12_nilp": (1, 2),
    "B_Ia": (2, 2),
    "B_Ib": (2, 1),
    "B_II": (2, 0),
    "B_IIa": (2, 2),
    "B_IIb": (2, 2),
    "Mixed_22": (2, 2),
    "Kahler_24": (2, 4),
    "Nilp_24": (2, 4),
    "Split_22": (2, 2),
}


@dataclass(frozen=True)
class Block:
    """One line of the block menu with its parameters."""

    kind: str
    params: tuple = ()
    block_signature: tuple = ()

    @property
    def size(self) -> int:
        return sum(self.block_signature)

    def a_matrix(self) -> np.ndarray:
        return block_matrices(self.kind, self.params, self.block_signature)[0]

    def b_matrix(self) -> np.ndarray:
        return block_matrices(self.kind, self.params, self.block_signature)[1]

    def label(self) -> str:
        if self.params:
            inner = ",".join(f"{p:.8g}" for p in self.params)
            return f"{self.kind}({inner})"
        if self.kind == "Zero":
            return f"Zero{self.block_signature}"
        return self.kind


def table_block(kind: str, *params, signature=None) -> Block:
    """Construct a Block for any table line, including the composite ones."""
    if kind == "Zero":
        sig = signature if signature is not None else (0, 1)
        if sig not in ((0, 1), (1, 0)):
            raise ValueError("Zero blocks are one-dimensional")
        return Block("Zero", (), sig)
    if kind not in _BLOCK_SIGNATURES:
        raise ValueError(f"unknown block kind {kind!r}")
    a, _ = block_matrices(kind, params, signature)
    return Block(kind, tuple(float(p) for p in params), _BLOCK_SIGNATURES[kind])


@dataclass
class BlockDecomposition:
    """Adapted basis (columns) plus the ordered block list."""

    basis: np.ndarray
    blocks: list
    residual: float
    operator: SkewOperator

    def block_diagonal(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.basis.shape[0]
        a0 = np.zeros((n, n))
        b0 = np.zeros((n, n))
        k = 0
        for blk in self.blocks:
            s = blk.size
            a0[k : k + s, k : k + s] = blk.a_matrix()
            b0[k : k + s, k : k + s] = blk.b_matrix()
            k += s
        return a0, b0

    def block_multiset(self, param_decimals: int = 6):
        return sorted(
            (b.kind, b.block_signature, tuple(round(p, param_decimals) for p in b.params))
            for b in self.blocks
        )


class GenericType(Enum):
    IA = "I_a"
    IB = "I_b"
    IIA = "II_a"
    IIB = "II_b"
    OTHER = "other"


# ---------------------------------------------------------------------------
# numerical helpers
# ---------------------------------------------------------------------------

def _gap_rank(svals: np.ndarray, scale: float, loose: float = 1e-4,
              strict: float = 1e-10) -> int:
    """Numerical rank with gap detection.

    Singular values below ``strict * scale`` are always noise; values above
    ``loose * scale`` are always signal.  In between, the largest ratio gap
    decides; an ambiguous spectrum (no gap of at least 1e3) raises.
    """
    s = np.asarray(svals, dtype=float)
    if s.size == 0:
        return 0
    hi = loose * scale
    lo = strict * scale
    rank = int(np.sum(s > hi))
    mid = s[(s <= hi) & (s > lo)]
    if mid.size == 0:
        return rank
    # look for the dominant gap inside the ambiguous band (band edges count)
    band = np.concatenate(([hi], mid, [max(lo, 1e-300)]))
    ratios = band[:-1] / band[1:]
    k = int(np.argmax(ratios))
    if ratios[k] < 1e3:
        raise ClassificationError(
            "singular-value spectrum has no resolvable gap at tolerance"
        )
    return rank + k


def _nullspace(m: np.ndarray, scale: float) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical null space.

    A matrix whose largest singular value sits below the noise floor of the
    ambient operator (1e-8 * scale) counts as zero; otherwise ranks are
    measured relative to the matrix's own top singular value.
    """
    u, s, vh = np.linalg.svd(m)
    n = m.shape[1]
    svals = np.concatenate([s, np.zeros(n - s.size)])
    top = float(svals[0]) if svals.size else 0.0
    if top <= 1e-8 * scale:
        return np.eye(n, dtype=vh.dtype)
    rank = _gap_rank(svals, top)
    return vh[rank:].conj().T


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Deterministic phase/sign: largest-modulus entry made real positive."""
    k = int(np.argmax(np.abs(v)))
    piv = v[k]
    if abs(piv) == 0:
        return v
    if np.iscomplexobj(v):
        return v * (np.conj(piv) / abs(piv))
    return v * np.sign(piv)


def random_isometry(gram: np.ndarray, rng, scale: float = 0.5) -> np.ndarray:
    """Random gram-orthogonal matrix: expm of a random gram-skew generator."""
    from scipy.linalg import expm

    n = gram.shape[0]
    w = rng.normal(size=(n, n))
    m = np.linalg.solve(gram, (w - w.T) / 2) * scale
    return expm(m)


# ---------------------------------------------------------------------------
# the classifier
# ---------------------------------------------------------------------------

def _cluster_eigenvalues(vals: np.ndarray, tol: float):
    """Greedy transitive clustering; returns list of (mean, count)."""
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    clusters = []
    for v in vals:
        for c in clusters:
            if abs(v - c[-1]) <= tol or abs(v - np.mean(c)) <= tol:
                c.append(v)
                break
        else:
            clusters.append([v])
    return [(complex(np.mean(c)), len(c)) for c in clusters]


def _class_representatives(clusters, tol: float):
    """Group clusters into classes {mu, -mu, conj mu, -conj mu}.

    Returns a list of dicts with the canonical representative (re >= 0,
    im >= 0) and the member means.  Near-zero clusters are pooled into one
    zero class first: a defective zero eigenvalue smears into a pattern that
    is conjugation- but not negation-symmetric at finite precision.  Raises
    when nonzero symmetric partners are missing.
    """
    remaining = []
    zero_count = 0
    for mu, cnt in clusters:
        if abs(mu) <= tol:
            zero_count += cnt
        else:
            remaining.append((mu, cnt))
    classes = []
    if zero_count:
        classes.append({"rep": 0j, "count": zero_count, "members": [0j]})
    while remaining:
        mu, cnt = remaining.pop(0)
        members = [(mu, cnt)]
        for target in (-mu, np.conj(mu), -np.conj(mu)):
            if any(abs(target - m[0]) <= tol for m in members):
                continue
            hit = None
            for j, (nu, c2) in enumerate(remaining):
                if abs(nu - target) <= tol:
                    hit = j
                    break
            if hit is None:
                raise ClassificationError(
                    f"spectrum not symmetric: partner of {mu:.6g} missing"
                )
            members.append(remaining.pop(hit))
        counts = {c for _, c in members}
        if len(counts) != 1:
            raise ClassificationError("unequal multiplicities in eigenvalue class")
        rep = complex(abs(np.real(mu)), abs(np.imag(mu)))
        classes.append({"rep": rep, "count": cnt, "members": [m[0] for m in members]})
    return classes


def _sesq(a_mat, u, v):
    return complex(np.conj(u) @ a_mat @ v)


def _bilin(a_mat, u, v):
    return complex(u @ a_mat @ v)


def _chain_generator(bmat, lam, length, scale):
    """Deterministic generator of a maximal Jordan chain for eigenvalue lam.

    Returns w with (b-lam)^length w = 0 but (b-lam)^(length-1) w != 0.
    """
    n = bmat.shape[0]
    N = bmat - lam * np.eye(n)
    k_top = _nullspace(np.linalg.matrix_power(N, length), scale)
    if k_top.shape[1] == 0:
        raise ClassificationError("no (generalized) eigenvector at tolerance")
    if length == 1:
        return _fix_phase(k_top[:, 0]), N
    k_lower = _nullspace(np.linalg.matrix_power(N, length - 1), scale)
    # project K_top off K_lower and take the dominant direction
    proj = k_top - k_lower @ (k_lower.conj().T @ k_top)
    u, s, vh = np.linalg.svd(proj, full_matrices=False)
    if s[0] < 1e-8:
        raise ClassificationError("Jordan chain extraction failed")
    return _fix_phase(u[:, 0]), N


def _max_chain_length(bmat, lam, cap, scale):
    """Smallest k with ker (b-lam)^k = ker (b-lam)^(k+1), capped."""
    n = bmat.shape[0]
    N = bmat - lam * np.eye(n)
    prev = 0
    power = np.eye(n, dtype=complex)
    for k in range(1, min(cap, n) + 2):
        power = power @ N
        d = _nullspace(power, scale).shape[1]
        if d == prev:
            return k - 1
        prev = d
    return min(cap, n) + 1


def _peel_quadruple(bmat, amat, rep, scale):
    """One B_IIb block for the eigenvalue quadruple +-xi +- i nu."""
    xi, nu = rep.real, rep.imag
    mu = xi - 1j * nu
    z_basis = _nullspace(bmat - mu * np.eye(bmat.shape[0]), scale)
    w_basis = _nullspace(bmat + mu * np.eye(bmat.shape[0]), scale)
    if z_basis.shape[1] != 1 or w_basis.shape[1] != 1:
        raise ClassificationError(
            "quadruple eigenvalue with multiplicity > 1 is outside index 2"
        )
    z = _fix_phase(z_basis[:, 0])
    w = w_basis[:, 0]
    pair = _bilin(amat, z, w)
    if abs(pair) < 1e-10 * scale:
        raise ClassificationError("degenerate pairing in quadruple block")
    w = w * (2.0 / pair)
    vecs = np.column_stack([z.real, z.imag, w.real, w.imag])
    return table_block("B_IIb", nu, xi), vecs


def _peel_real_pair(bmat, amat, rep, scale):
    lam = rep.real
    length = _max_chain_length(bmat, lam, 4, scale)
    eye = np.eye(bmat.shape[0])
    if length == 1:
        xs = _nullspace(bmat - lam * eye, scale)
        ys = np.real(_nullspace(bmat + lam * eye, scale))
        if xs.shape[1] == 0 or ys.shape[1] == 0:
            raise ClassificationError("missing eigenvector for a real pair")
        x = _fix_phase(np.real(_fix_phase(xs[:, 0])))
        x = x / np.linalg.norm(x)
        pairings = x @ amat @ ys
        j = int(np.argmax(np.abs(pairings)))
        if abs(pairings[j]) < 1e-10 * scale:
            raise ClassificationError("degenerate pairing in boost block")
        y = ys[:, j] / pairings[j]
        return table_block("L11", lam), np.column_stack([x, y])
    if length == 2:
        w, N = _chain_generator(bmat, lam, 2, scale)
        w = np.real(w)
        w = w / np.linalg.norm(w)
        v = N.real @ w
        wt, Nt = _chain_generator(bmat, -lam, 2, scale)
        wt = np.real(wt)
        vt = Nt.real @ wt
        a = _bilin(amat, v, wt).real
        if abs(a) < 1e-10 * scale:
            raise ClassificationError("degenerate pairing in Mixed_22 block")
        c = -1.0 / a
        vt, wt = c * vt, c * wt
        d = _bilin(amat, w, wt).real
        w = w + d * v
        vecs = np.column_stack([v, vt, w, wt])
        return table_block("Mixed_22", lam), vecs
    raise ClassificationError("real eigenvalue with Jordan length > 2")


def _peel_imaginary(bmat, amat, rep, scale):
    nu = rep.imag
    eye = np.eye(bmat.shape[0])
    length = _max_chain_length(bmat, -1j * nu, 4, scale)
    if length == 1:
        zs = _nullspace(bmat - 1j * nu * eye, scale)
        if zs.shape[1] == 0:
            raise ClassificationError("missing eigenvector for an imaginary pair")
        smat = zs.conj().T @ amat @ zs
        smat = 0.5 * (smat + smat.conj().T)
        w, vecs_h = np.linalg.eigh(smat)
        if np.min(np.abs(w)) < 1e-10 * scale:
            raise ClassificationError("degenerate Hermitian pairing on eigenspace")
        j = 0 if w[0] < 0 else int(np.argmax(w))
        u = zs @ vecs_h[:, j]
        sigma = w[j]
        u = u / np.sqrt(abs(sigma))
        x = np.sqrt(2.0) * u.real
        y = np.sqrt(2.0) * u.imag
        # eigenvector for +i nu: b x = -nu y, b y = nu x; basis (x, -y)
        vecs = np.column_stack([x, -y])
        kind = "B_II" if sigma < 0 else "Euclid_B"
        return table_block(kind, nu), vecs
    if length == 2:
        for lam_e, param in ((-1j * nu, nu), (1j * nu, -nu)):
            w, N = _chain_generator(bmat, lam_e, 2, scale)
            v = N @ w
            c = _sesq(amat, v, w)
            if c.imag < -1e-10 * scale:
                break
        else:
            raise ClassificationError("B_IIa orientation could not be determined")
        rho = _sesq(amat, w, w).real
        w = w + (-rho / (2.0 * c.imag)) * 1j * v
        c = _sesq(amat, v, w)
        t = np.sqrt(2.0 / abs(c.imag))
        v, w = t * v, t * w
        vecs = np.column_stack([v.real, v.imag, w.real, w.imag])
        return table_block("B_IIa", param), vecs
    if length == 3:
        for lam_e, param in ((-1j * nu, nu), (1j * nu, -nu)):
            w, N = _chain_generator(bmat, lam_e, 3, scale)
            v2 = N @ w
            v1 = N @ v2
            t = _sesq(amat, v1, w).real
            if t < -1e-10 * scale:
                break
        else:
            raise ClassificationError("Kahler_24 orientation could not be determined")
        # generator shifts: w <- w + beta N w kills Im S(v2, v3);
        # then w <- w + delta N^2 w kills S(v3, v3)
        s23 = _sesq(amat, v2, w)
        beta = 1j * (s23.imag / (2.0 * t))
        w = w + beta * v2
        v2 = N @ w
        v1 = N @ v2
        s33 = _sesq(amat, w, w).real
        t = _sesq(amat, v1, w).real
        delta = -s33 / (2.0 * t)
        w = w + delta * v1
        v2 = N @ w
        v1 = N @ v2
        t = _sesq(amat, v1, w).real
        sc = np.sqrt(2.0 / abs(t))
        v1, v2, w = sc * v1, sc * v2, sc * w
        vecs = np.column_stack([v1.real, v1.imag, v2.real, v2.imag, w.real, w.imag])
        return table_block("Kahler_24", param), vecs
    raise ClassificationError("imaginary eigenvalue with Jordan length > 3")


def _peel_nilpotent(bmat, amat, scale):
    n = bmat.shape[0]
    N = bmat.real
    length = _max_chain_length(bmat, 0.0, n, scale)
    if length >= 4:
        raise ClassificationError("nilpotent Jordan length > 3 is outside index 2")
    if length == 3:
        k3 = np.real(_nullspace(np.linalg.matrix_power(N, 3), scale))
        k2 = np.real(_nullspace(np.linalg.matrix_power(N, 2), scale))
        proj = k3 - k2 @ (k2.T @ k3)
        u, s, vh = np.linalg.svd(proj, full_matrices=False)
        cands = [u[:, j] for j in range(int(np.sum(s > 1e-8)))]
        taus = [float(_bilin(amat, N @ w, N @ w).real) for w in cands]
        j = int(np.argmax(np.abs(taus)))
        w, tau = np.real(_fix_phase(cands[j])), taus[j]
        if abs(tau) < 1e-10 * scale:
            raise ClassificationError("degenerate pairing in length-3 chain")
        w = w + (_bilin(amat, w, w).real / (2.0 * tau)) * (N @ N @ w)
        tau = _bilin(amat, N @ w, N @ w).real
        c = 1.0 / np.sqrt(abs(tau))
        w = c * w
        u_vec = N @ w
        v_vec = N @ u_vec
        vecs = np.column_stack([v_vec, u_vec, w])
        kind = "L12_nilp" if tau > 0 else "B_Ib"
        return table_block(kind), vecs
    if length == 2:
        k2 = np.real(_nullspace(np.linalg.matrix_power(N, 2), scale))
        k1 = np.real(_nullspace(N, scale))
        proj = k2 - k1 @ (k1.T @ k2)
        u, s, vh = np.linalg.svd(proj, full_matrices=False)
        tops = [u[:, j] for j in range(int(np.sum(s > 1e-8)))]
        if len(tops) < 2:
            raise ClassificationError("unpaired length-2 chain")
        w = np.real(_fix_phase(tops[0]))
        qs = [float(_bilin(amat, w, N @ t).real) for t in tops[1:]]
        j = int(np.argmax(np.abs(qs)))
        if abs(qs[j]) < 1e-10 * scale:
            raise ClassificationError("degenerate symplectic pairing of chains")
        wp = tops[1 + j] / qs[j]
        w = w - (_bilin(amat, w, w).real / 2.0) * (N @ wp)
        wp = wp + (_bilin(amat, wp, wp).real / 2.0) * (N @ w)
        w = w + _bilin(amat, w, wp).real * (N @ w)
        vecs = np.column_stack([N @ w, N @ wp, w, wp])
        return table_block("B_Ia"), vecs
    # pure kernel: one zero block, most negative direction first
    kern = np.real(_nullspace(N, scale))
    if kern.shape[1] == 0:
        raise ClassificationError("empty kernel for a nominally nilpotent block")
    smat = kern.T @ amat @ kern
    smat = 0.5 * (smat + smat.T)
    w, vecs_h = np.linalg.eigh(smat)
    if np.min(np.abs(w)) < 1e-10 * scale:
        raise ClassificationError("degenerate inner product on kernel")
    j = 0 if w[0] < 0 else int(np.argmax(w))
    v = np.real(_fix_phase(kern @ vecs_h[:, j])) / np.sqrt(abs(w[j]))
    sig = (1, 0) if w[j] < 0 else (0, 1)
    return table_block("Zero", signature=sig), v.reshape(-1, 1)


def _peel_one_block(bmat, amat, cluster_tol, scale):
    vals = np.linalg.eigvals(bmat)
    clusters = _cluster_eigenvalues(vals, cluster_tol)
    classes = _class_representatives(clusters, 2 * cluster_tol)

    def priority(cl):
        rep = cl["rep"]
        if rep.real > cluster_tol and rep.imag > cluster_tol:
            group = 0
        elif rep.real > cluster_tol:
            group = 1
        elif rep.imag > cluster_tol:
            group = 2
        else:
            group = 3
        return (group, -abs(rep))

    classes.sort(key=priority)
    cl = classes[0]
    rep = cl["rep"]
    if rep.real > cluster_tol and rep.imag > cluster_tol:
        return _peel_quadruple(bmat, amat, rep, scale)
    if rep.real > cluster_tol:
        return _peel_real_pair(bmat, amat, rep, scale)
    if rep.imag > cluster_tol:
        return _peel_imaginary(bmat, amat, rep, scale)
    return _peel_nilpotent(bmat, amat, scale)


def _orthogonal_complement(amat, vecs, scale):
    """Basis of the A-orthogonal complement of span(vecs)."""
    m = vecs.T @ amat
    u, s, vh = np.linalg.svd(m)
    rank = vecs.shape[1]
    if s.size < rank or s[rank - 1] < 1e-10 * scale:
        raise ClassificationError("degenerate block span")
    return vh[rank:].T


_BLOCK_ORDER = {
    "B_IIb": 0, "Kahler_24": 1, "B_IIa": 2, "Mixed_22": 3, "B_II": 4,
    "B_Ia": 5, "B_Ib": 6, "L12_nilp": 7, "L11": 8, "Euclid_B": 9, "Zero": 10,
}


def _sort_blocks(blocks, columns):
    def key(item):
        blk = item[0]
        zero_rank = 0 if blk.block_signature == (1, 0) else 1
        return (
            _BLOCK_ORDER[blk.kind],
            zero_rank,
            tuple(-p for p in blk.params),
        )

    paired = sorted(zip(blocks, columns), key=key)
    return [p[0] for p in paired], [p[1] for p in paired]


def classify(op: SkewOperator, cluster_rtol: float = 1e-8,
             residual_tol: float = 1e-8) -> BlockDecomposition:
    """Decompose a skew-adjoint operator into canonical blocks.

    The cluster tolerance starts at ``cluster_rtol * |b|`` and is widened
    (up to 1e-4 relative) when the spectrum of a defective operator smears
    eigenvalue clusters; the verified reconstruction residual is the final
    arbiter.  Raises ClassificationError when no tolerance level yields a
    decomposition that reconstructs to ``residual_tol``.
    """
    report = validate(op)
    if not report.ok:
        raise ValueError("operator does not validate: " + "; ".join(report.messages))
    if op.n > 12:
        raise ValueError("dimension cap exceeded (n > 12)")

    bnorm = float(np.linalg.norm(op.b, 2))
    scale = max(bnorm, 1.0)
    errors = []
    for widen in (1.0, 1e1, 1e2, 1e3, 1e4):
        tol = cluster_rtol * scale * widen
        try:
            dec = _classify_at_tolerance(op, tol, scale, residual_tol)
            return dec
        except (ClassificationError, np.linalg.LinAlgError) as exc:
            errors.append(f"tol {tol:.2e}: {exc}")
    raise ClassificationError(
        "classification failed at all cluster tolerances: " + " | ".join(errors)
    )


def _classify_at_tolerance(op, cluster_tol, scale, residual_tol):
    n = op.n
    blocks = []
    columns = []
    work = np.eye(n)
    while work.shape[1] > 0:
        bw = np.linalg.lstsq(work, op.b @ work, rcond=None)[0]
        aw = work.T @ op.gram @ work
        blk, vecs_w = _peel_one_block(bw, aw, cluster_tol, scale)
        vecs = work @ vecs_w
        blocks.append(blk)
        columns.append(vecs)
        comp = _orthogonal_complement(aw, vecs_w, scale)
        work = work @ comp
    blocks, columns = _sort_blocks(blocks, columns)
    basis = np.hstack(columns)
    dec = BlockDecomposition(basis=basis, blocks=blocks, residual=0.0, operator=op)
    a0, b0 = dec.block_diagonal()
    rec_b = np.linalg.solve(basis, op.b @ basis)
    rec_a = basis.T @ op.gram @ basis
    r1 = float(np.max(np.abs(rec_b - b0))) / scale
    r2 = float(np.max(np.abs(rec_a - a0)))
    dec.residual = max(r1, r2)
    if dec.residual > residual_tol:
        raise ClassificationError(
            f"reconstruction residual {dec.residual:.3e} exceeds {residual_tol:.1e}"
        )
    return dec


# ---------------------------------------------------------------------------
# 2-forms, generic types, causal contractions, stabilizers
# ---------------------------------------------------------------------------

def standard_gram(sig: Signature) -> np.ndarray:
    return np.diag(sig.epsilon)


def operator_from_form(omega: PForm, gram: np.ndarray | None = None) -> SkewOperator:
    """Skew-adjoint operator of a 2-form: omega(X, Y) = h(X, b Y)."""
    if omega.degree != 2:
        raise ValueError("operator_from_form requires a 2-form")
    if gram is None:
        gram = standard_gram(omega.signature)
    b = np.linalg.solve(gram, omega.as_matrix())
    return SkewOperator(b=b, gram=gram)


def _param_groups(dec: BlockDecomposition):
    pseudo = [b for b in dec.blocks if b.kind not in ("Zero", "Euclid_B")]
    euclid = [b for b in dec.blocks if b.kind == "Euclid_B"]
    zero_e = [b for b in dec.blocks if b.kind == "Zero" and b.block_signature == (0, 1)]
    zero_t = [b for b in dec.blocks if b.kind == "Zero" and b.block_signature == (1, 0)]
    return pseudo, euclid, zero_e, zero_t


def detect_generic_type(omega: PForm, gram: np.ndarray | None = None,
                        param_rtol: float = 1e-6) -> GenericType:
    """Tag a nonzero 2-form in index-2 signature with its generic type.

    I_a:  B_Ia plus zero blocks;  I_b:  B_Ib plus zero blocks;
    II_a: B_II(nu) plus (m-1) Euclid_B(nu) with one common nu and nothing
    else;  II_b: the same rotation family plus at least one Euclidean zero
    block (the form vanishes on a nontrivial Euclidean factor and is
    pseudo-Kahler on its complement);  everything else is ``other``.
    """
    if omega.max_abs() == 0.0:
        raise ValueError("generic type of the zero form is undefined")
    dec = classify(operator_from_form(omega, gram))
    return _generic_type_of(dec, param_rtol)


def _generic_type_of(dec: BlockDecomposition, param_rtol: float = 1e-6) -> GenericType:
    pseudo, euclid, zero_e, zero_t = _param_groups(dec)
    kinds = sorted(b.kind for b in pseudo)
    if kinds == ["B_Ia"] and not euclid and not zero_t:
        return GenericType.IA
    if kinds == ["B_Ib"] and not euclid and not zero_t:
        return GenericType.IB
    if kinds == ["B_II"] and not zero_t:
        nu = pseudo[0].params[0]
        same = all(
            abs(e.params[0] - nu) <= param_rtol * max(1.0, abs(nu)) for e in euclid
        )
        if same and not zero_e:
            return GenericType.IIA
        if same and zero_e:
            return GenericType.IIB
    return GenericType.OTHER


@dataclass
class CausalContractionResult:
    verdict: str  # "all_timelike" | "all_causal" | "fails"
    all_causal: bool
    all_timelike: bool
    witness: np.ndarray | None
    rule_verdict: str
    max_sampled: float
    lightlike_attained: bool

    def __bool__(self):
        return self.verdict != "fails"


def _rule_verdict(dec: BlockDecomposition, param_rtol: float = 1e-6) -> str:
    """Causality of T . omega decided on the normal form.

    The degree-2 contraction with T equals -(bT) flat, so the question is
    whether b maps the timelike cone into the causal cone.  Exact block
    analysis: nilpotent families B_Ia/B_Ib stay causal only with pure zero
    Euclidean part; rotation families need every Euclidean frequency to stay
    at or below the pseudo-Euclidean one; B_IIa needs a positive signed
    parameter.  For B_IIb the stated condition nu^2 >= xi^2 is applied here
    and then cross-checked by sampling (which overrides with a witness).
    """
    pseudo, euclid, zero_e, zero_t = _param_groups(dec)
    kinds = sorted(b.kind for b in pseudo)
    numax = max((e.params[0] for e in euclid), default=0.0)
    if not pseudo:
        return "fails" if euclid else "all_causal"
    if kinds == ["B_Ia"] or kinds == ["B_Ib"]:
        return "all_causal" if not euclid else "fails"
    if kinds == ["B_II"]:
        nu = pseudo[0].params[0]
        return "all_timelike" if numax <= nu * (1 + param_rtol) else "fails"
    if kinds == ["B_IIa"]:
        nu = pseudo[0].params[0]
        if nu > 0 and numax <= nu * (1 + param_rtol):
            return "all_timelike"
        return "fails"
    if kinds == ["B_IIb"]:
        nu, xi = pseudo[0].params
        return "all_timelike" if nu**2 >= xi**2 else "fails"
    return "fails"


def _sample_timelike(gram: np.ndarray, rng, count: int):
    """Unit timelike vectors for an index-2 gram, heavy-tailed in the boost."""
    w, u = np.linalg.eigh(gram)
    order = np.argsort(w)
    w = w[order]
    u = u[:, order]
    if np.sum(w < 0) != 2:
        raise ValueError("sampling requires gram of index exactly 2")
    c = u / np.sqrt(np.abs(w))
    n = gram.shape[0]
    ts = rng.normal(size=(count, 2))
    ts /= np.linalg.norm(ts, axis=1, keepdims=True)
    if n > 2:
        ss = rng.normal(size=(count, n - 2))
        norms = np.linalg.norm(ss, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        rho = np.abs(rng.standard_cauchy(size=(count, 1)))
        rho = np.minimum(rho, 1e3)
        ss = ss / norms * rho
        radial = np.sqrt(1.0 + np.sum(ss**2, axis=1, keepdims=True))
        diag = np.hstack([ts * radial, ss])
    else:
        diag = ts
    return diag @ c.T


def causal_contraction_test(omega: PForm, gram: np.ndarray | None = None,
                            seed: int = 0, samples: int = 10_000,
                            tol: float = 1e-9) -> CausalContractionResult:
    """Decide whether T . omega is causal (timelike) for every timelike T.

    The normal-form rule gives the verdict; 10^4 sampled unit timelike
    directions cross-check it, and a sampled spacelike contraction always
    wins and is returned as the witness.
    """
    if omega.degree != 2:
        raise ValueError("causal contraction test requires a 2-form")
    op = operator_from_form(omega, gram)
    if omega.max_abs() == 0.0:
        return CausalContractionResult(
            "all_causal", True, False, None, "all_causal", 0.0, True
        )
    dec = classify(op)
    rule = _rule_verdict(dec)
    rng = np.random.default_rng(seed)
    ts = _sample_timelike(op.gram, rng, samples)
    bts = ts @ op.b.T
    q = np.einsum("ij,jk,ik->i", bts, op.gram, bts)
    scale = (np.linalg.norm(op.b, 2) * np.linalg.norm(ts, axis=1)) ** 2 + 1e-300
    ratio = q / scale
    imax = int(np.argmax(ratio))
    witness = None
    lightlike = bool(np.any(np.abs(ratio) <= tol))
    if ratio[imax] > tol:
        witness = ts[imax]
        verdict = "fails"
    else:
        verdict = rule
        if rule == "fails":
            # rule knows structure the sampler may have missed; keep it
            verdict = "fails"
    all_causal = verdict in ("all_causal", "all_timelike")
    all_timelike = verdict == "all_timelike"
    return CausalContractionResult(
        verdict=verdict,
        all_causal=all_causal,
        all_timelike=all_timelike,
        witness=witness,
        rule_verdict=rule,
        max_sampled=float(ratio[imax]),
        lightlike_attained=lightlike,
    )


def _transpose_permutation(n: int) -> np.ndarray:
    p = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            p[i * n + j, j * n + i] = 1.0
    return p


def stabilizer_dimension(dec: BlockDecomposition | SkewOperator,
                         tol: float = 1e-6) -> int:
    """Dimension of the gram-skew matrices commuting with b.

    Computed as the nullity of A |-> (gram A + A^T gram, A b - b A) on the
    block-diagonal reconstruction; this is the Lie algebra dimension of the
    stabilizer and is invariant under gram-orthogonal conjugation.
    """
    if isinstance(dec, BlockDecomposition):
        a0, b0 = dec.block_diagonal()
    else:
        a0, b0 = dec.gram, dec.b
    n = a0.shape[0]
    eye = np.eye(n)
    perm = _transpose_permutation(n)
    row1 = np.kron(a0, eye) + np.kron(eye, a0.T) @ perm
    row2 = np.kron(eye, b0.T) - np.kron(b0, eye)
    m = np.vstack([row1, row2])
    s = np.linalg.svd(m, compute_uv=False)
    smax = max(1.0, float(s[0]) if s.size else 1.0)
    return int(np.sum(s < tol * smax)) + (n * n - s.size if s.size < n * n else 0)
