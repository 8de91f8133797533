"""Metric charts, curvature tensors, and spinor field calculus.

A MetricChart is a coordinate box with an analytic metric evaluator and an
orthonormal frame evaluator (timelike direction first).  Curvature is
computed by finite differences with fourth-order stencils; first-level
derivatives use a small step, nested derivatives a larger one, keeping
second-derivative quantities accurate to ~1e-8 against test tolerances of
1e-5/1e-6.

Curvature conventions (fixed so that the decomposition chain below closes):

* ``R(X,Y)Z = grad_[X,Y] Z - [grad_X, grad_Y] Z``; in components
  ``R^a_bcd = -(d_c Gamma^a_db - d_d Gamma^a_cb + Gamma Gamma - Gamma Gamma)``.
* ``Ric_bd = sum_a R^a_bda`` (trace over first and last slot), so the
  n-dimensional hyperbolic-type charts carry ``Ric = -(n-1) g`` and
  ``scal = -n(n-1)``.
* Schouten ``L = (scal / (2(n-1)) g - Ric) / (n-2)`` and
  ``W = R - g * L`` (Kulkarni-Nomizu), which vanishes on conformally flat
  charts with these signs.

The spinor derivative acts in the orthonormal frame as
``d phi + (1/2) sum_{a<b} eps_a eps_b omega_ab gamma_a gamma_b phi`` with
``omega_ab(X) = g(grad_X s_a, s_b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .clifford import SpinorSpace, Spinor, build_spinor_space, gamma_product
from .forms import CausalType, FrameVector, PForm, causal_type, dirac_current

__all__ = [
    "MetricChart",
    "CurvaturePack",
    "SpinorField",
    "curvature",
    "killing_residual",
    "dirac_operator_residual",
    "integrability_checks",
    "dirac_current_field",
    "sasaki_check",
    "brinkmann_check",
    "sample_points",
    "special_killing_fit",
]

# first-level / nested finite-difference steps (fourth-order stencils)
H_METRIC = 1e-3
H_NESTED = 1e-2
H_FIELD = 1e-5


def _d4(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, mu: int, h: float):
    """Fourth-order central difference of f along coordinate mu."""
    e = np.zeros_like(x)
    e[mu] = 1.0
    return (
        -f(x + 2 * h * e) + 8 * f(x + h * e) - 8 * f(x - h * e) + f(x - 2 * h * e)
    ) / (12 * h)


def _d2(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, mu: int, h: float):
    """Second-order central difference of f along coordinate mu."""
    e = np.zeros_like(x)
    e[mu] = 1.0
    return (f(x + h * e) - f(x - h * e)) / (2 * h)


@dataclass
class MetricChart:
    """Coordinate chart with metric, frame, and optional analytic extras.

    Attributes:
        name: catalog identifier.
        dim: chart dimension n; the signature is Lorentzian (1, n-1) unless
            an explicit spinor space is supplied.
        box: list of (lo, hi) coordinate ranges.
        metric: x -> (n, n) symmetric matrix.
        frame: x -> (n, n) matrix whose columns are the orthonormal frame
            vectors in coordinates, timelike first.  Defaults to sequential
            Gram-Schmidt over the coordinate basis.
        metric_derivative: optional analytic x -> dg[mu, a, b].
        christoffel: optional analytic x -> Gamma[a, b, c].
        margin: sampling margin kept from the box boundary.
    """

    name: str
    dim: int
    box: list
    metric: Callable
    frame: Callable | None = None
    metric_derivative: Callable | None = None
    christoffel: Callable | None = None
    margin: float = 0.06
    spinor_space: SpinorSpace | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.spinor_space is None:
            self.spinor_space = build_spinor_space((1, self.dim - 1))
        if self.frame is None:
            self.frame = self._gram_schmidt_frame

    @property
    def signature(self):
        return self.spinor_space.signature

    @property
    def epsilon(self) -> np.ndarray:
        return self.signature.epsilon

    def center(self) -> np.ndarray:
        return np.array([(lo + hi) / 2 for lo, hi in self.box])

    def _gram_schmidt_frame(self, x: np.ndarray) -> np.ndarray:
        g = self.metric(x)
        eps = self.epsilon
        vecs = []
        for k in range(self.dim):
            v = np.zeros(self.dim)
            v[k] = 1.0
            for j, s in enumerate(vecs):
                v = v - eps[j] * (v @ g @ s) * s
            norm2 = float(v @ g @ v)
            if abs(norm2) < 1e-12:
                raise ValueError(f"degenerate frame at {x}")
            if np.sign(norm2) != eps[k]:
                raise ValueError(
                    f"frame signature mismatch at {x}: slot {k} has g(v,v) = {norm2}"
                )
            vecs.append(v / np.sqrt(abs(norm2)))
        return np.column_stack(vecs)

    def metric_d1(self, x: np.ndarray) -> np.ndarray:
        """dg[mu, a, b] = d_mu g_ab."""
        if self.metric_derivative is not None:
            return self.metric_derivative(x)
        return np.stack([_d4(self.metric, x, mu, H_METRIC) for mu in range(self.dim)])

    def christoffels(self, x: np.ndarray) -> np.ndarray:
        """Gamma[a, b, c] = Gamma^a_{bc}."""
        if self.christoffel is not None:
            return self.christoffel(x)
        g = self.metric(x)
        dg = self.metric_d1(x)
        ginv = np.linalg.inv(g)
        # Gamma^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{bd} - d_d g_{bc})
        braces = (
            np.einsum("bdc->bcd", dg)
            + np.einsum("cbd->bcd", dg)
            - np.einsum("dbc->bcd", dg)
        )
        return 0.5 * np.einsum("ad,bcd->abc", ginv, braces)

    def interior_sample_box(self):
        return [
            (lo + self.margin * (hi - lo), hi - self.margin * (hi - lo))
            for lo, hi in self.box
        ]


def sample_points(chart: MetricChart, count: int = 50, seed: int = 0) -> np.ndarray:
    """Scrambled-Sobol quasi-random points in the margin-shrunk box."""
    from scipy.stats import qmc

    box = chart.interior_sample_box()
    sampler = qmc.Sobol(d=chart.dim, scramble=True, seed=seed)
    u = sampler.random(count)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return lo + u * (hi - lo)


@dataclass
class CurvaturePack:
    """Curvature data at one point, all in coordinate components."""

    point: np.ndarray
    metric: np.ndarray
    christoffels: np.ndarray
    riemann: np.ndarray  # R^a_{bcd}
    riemann_low: np.ndarray  # R_{abcd}
    ricci: np.ndarray
    scal: float
    schouten: np.ndarray
    weyl: np.ndarray

    def first_bianchi_residual(self) -> float:
        r = self.riemann_low
        cyc = r + r.transpose(0, 2, 3, 1) + r.transpose(0, 3, 1, 2)
        return float(np.max(np.abs(cyc))) / max(1.0, float(np.max(np.abs(r))))

    def einstein_residual(self) -> float:
        n = self.metric.shape[0]
        return float(np.max(np.abs(self.ricci - (self.scal / n) * self.metric)))


def _kulkarni_nomizu(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    return (
        np.einsum("ac,bd->abcd", p, q)
        + np.einsum("bd,ac->abcd", p, q)
        - np.einsum("ad,bc->abcd", p, q)
        - np.einsum("bc,ad->abcd", p, q)
    )


def curvature(chart: MetricChart, x: np.ndarray) -> CurvaturePack:
    """Full curvature pack at an interior point."""
    x = np.asarray(x, dtype=float)
    n = chart.dim
    g = chart.metric(x)
    gamma = chart.christoffels(x)
    dgamma = np.stack(
        [_d4(chart.christoffels, x, mu, H_NESTED) for mu in range(n)]
    )  # dgamma[c, a, d, b] = d_c Gamma^a_{db}
    # standard curvature, then the global sign flip fixed in the module doc
    term = np.einsum("cadb->abcd", dgamma) - np.einsum("dacb->abcd", dgamma)
    quad = np.einsum("ace,edb->abcd", gamma, gamma) - np.einsum(
        "ade,ecb->abcd", gamma, gamma
    )
    riemann = -(term + quad)
    ricci = np.einsum("abda->bd", riemann)
    ginv = np.linalg.inv(g)
    scal = float(np.einsum("bd,bd->", ginv, ricci))
    riemann_low = np.einsum("ae,ebcd->abcd", g, riemann)
    if n > 2:
        schouten = (scal / (2 * (n - 1)) * g - ricci) / (n - 2)
        weyl = riemann_low - _kulkarni_nomizu(g, schouten)
    else:
        schouten = np.zeros_like(g)
        weyl = np.zeros_like(riemann_low)
    return CurvaturePack(
        point=x,
        metric=g,
        christoffels=gamma,
        riemann=riemann,
        riemann_low=riemann_low,
        ricci=ricci,
        scal=scal,
        schouten=schouten,
        weyl=weyl,
    )


# ---------------------------------------------------------------------------
# frame calculus and spinor fields
# ---------------------------------------------------------------------------

def frame_connection(chart: MetricChart, x: np.ndarray) -> np.ndarray:
    """omega[c, a, b] = g(grad_{s_c} s_a, s_b) in the orthonormal frame."""
    g = chart.metric(x)
    fr = chart.frame(x)
    gamma = chart.christoffels(x)
    dfr = np.stack([_d4(chart.frame, x, mu, H_METRIC) for mu in range(chart.dim)])
    # grad_mu s_a = d_mu s_a + Gamma^nu_{mu rho} s_a^rho
    cov = np.einsum("mna->mna", dfr.transpose(0, 1, 2)) + np.einsum(
        "nmr,ra->mna", gamma.transpose(0, 1, 2), fr
    )
    # contract direction with frame vector s_c and project on s_b
    omega = np.einsum("mc,mna,ng,gb->cab", fr, cov, g, fr)
    return omega


def spin_connection_matrices(chart: MetricChart, x: np.ndarray) -> np.ndarray:
    """Sigma[c] acting on spinors for the frame direction s_c."""
    sp = chart.spinor_space
    eps = chart.epsilon
    omega = frame_connection(chart, x)
    n, d = chart.dim, sp.dim_spinor
    sigmas = np.zeros((n, d, d), dtype=complex)
    for c in range(n):
        acc = np.zeros((d, d), dtype=complex)
        for a in range(n):
            for b in range(a + 1, n):
                w = omega[c, a, b]
                if w != 0.0:
                    acc += 0.5 * eps[a] * eps[b] * w * (sp.gamma[a] @ sp.gamma[b])
        sigmas[c] = acc
    return sigmas


@dataclass
class SpinorField:
    """Spinor-valued field on a chart, components in the chart's spin frame."""

    chart: MetricChart
    fn: Callable  # x -> complex coefficient vector

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=complex)

    def spinor(self, x: np.ndarray) -> Spinor:
        return Spinor(self.chart.spinor_space, self(x))


def spinor_covariant_derivative(field: SpinorField, x: np.ndarray,
                                h: float = H_FIELD) -> np.ndarray:
    """nabla[c] = spinor derivative along frame direction s_c; shape (n, dim)."""
    chart = field.chart
    n = chart.dim
    fr = chart.frame(x)
    sigmas = spin_connection_matrices(chart, x)
    partials = np.stack([_d2(field, x, mu, h) for mu in range(n)])
    phi = field(x)
    out = np.empty((n, phi.size), dtype=complex)
    for c in range(n):
        direction = fr[:, c]
        out[c] = direction @ partials + sigmas[c] @ phi
    return out


def killing_residual(chart: MetricChart, field: SpinorField, lam: complex,
                     samples: int = 50, seed: int = 0,
                     points: np.ndarray | None = None) -> dict:
    """Max over samples and frame directions of |nabla_c phi - lam gamma_c phi|."""
    sp = chart.spinor_space
    if points is None:
        points = sample_points(chart, samples, seed)
    worst = 0.0
    worst_point = None
    for x in points:
        nab = spinor_covariant_derivative(field, x)
        phi = field(x)
        for c in range(chart.dim):
            res = nab[c] - lam * (sp.gamma[c] @ phi)
            r = float(np.linalg.norm(res))
            if r > worst:
                worst, worst_point = r, x
    return {"max_residual": worst, "worst_point": worst_point, "count": len(points)}


def dirac_operator_residual(chart: MetricChart, field: SpinorField, lam: complex,
                            points: np.ndarray) -> float:
    """Max residual of D phi = -n lam phi, D = sum_c eps_c gamma_c nabla_c."""
    sp = chart.spinor_space
    eps = chart.epsilon
    worst = 0.0
    for x in points:
        nab = spinor_covariant_derivative(field, x)
        phi = field(x)
        dphi = np.zeros_like(phi)
        for c in range(chart.dim):
            dphi += eps[c] * (sp.gamma[c] @ nab[c])
        worst = max(worst, float(np.linalg.norm(dphi + chart.dim * lam * phi)))
    return worst


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def _weyl_frame(pack: CurvaturePack, fr: np.ndarray) -> np.ndarray:
    """Weyl tensor converted to orthonormal-frame components."""
    return np.einsum("ma,nb,rc,sd,mnrs->abcd", fr, fr, fr, fr, pack.weyl)


def integrability_checks(chart: MetricChart, field: SpinorField, lam: complex,
                         samples: int = 12, seed: int = 0) -> dict:
    """Curvature conditions forced by a Killing spinor.

    Reports (a) the deviation of scal from 4 n (n-1) lam^2, (b) the largest
    Clifford action of Weyl contractions on the field over a basis of
    2-forms, and (c) the causal type of the trace-adjusted Ricci map on a
    frame basis, which must be lightlike or zero.
    """
    sp = chart.spinor_space
    eps = chart.epsilon
    n = chart.dim
    target_scal = 4 * n * (n - 1) * (lam**2)
    if abs(target_scal.imag) > 1e-12:
        raise ValueError("lambda must be real or purely imaginary")
    target_scal = target_scal.real
    pts = sample_points(chart, samples, seed)
    scal_dev = 0.0
    weyl_action = 0.0
    ric_branch = []
    for x in pts:
        pack = curvature(chart, x)
        scal_dev = max(scal_dev, abs(pack.scal - target_scal))
        fr = chart.frame(x)
        wf = _weyl_frame(pack, fr)
        phi = field(x)
        nphi = max(float(np.linalg.norm(phi)), 1e-30)
        wscale = max(float(np.max(np.abs(wf))), 1e-30)
        for a in range(n):
            for b in range(a + 1, n):
                # 2-form W(e_a ^ e_b) in frame components, then Clifford action
                coeff = np.einsum("cd->cd", wf[:, :, a, b]) * eps[a] * eps[b]
                mat = np.zeros((sp.dim_spinor, sp.dim_spinor), dtype=complex)
                for c in range(n):
                    for d in range(c + 1, n):
                        w = coeff[c, d] * eps[c] * eps[d]
                        if w != 0.0:
                            mat += w * gamma_product(sp, (c, d))
                weyl_action = max(
                    weyl_action, float(np.linalg.norm(mat @ phi)) / (nphi * wscale)
                )
        # Ricci operator in the frame: Ric^a_b - 4 lam^2 (n-1) delta
        ric_frame = np.einsum("ma,nb,mn->ab", fr, fr, pack.ricci)
        kmat = np.einsum("a,ab->ab", eps, ric_frame) - 4 * (lam**2).real * (n - 1) * np.eye(n)
        for b in range(n):
            vec = FrameVector(kmat[:, b], chart.signature)
            ric_branch.append(causal_type(vec, tol=1e-6))
    ok_branch = all(t in (CausalType.LIGHTLIKE, CausalType.ZERO) for t in ric_branch)
    return {
        "scal_residual": scal_dev,
        "target_scal": target_scal,
        "weyl_action_residual": weyl_action,
        "ricci_image_lightlike_or_zero": ok_branch,
        "ricci_image_types": sorted({t.value for t in ric_branch}),
    }


def vector_field_from_frame(chart: MetricChart, comp_fn: Callable) -> Callable:
    """Frame-component field a(x) -> coordinate-component field V^mu(x)."""

    def coord_field(x):
        return chart.frame(x) @ comp_fn(x)

    return coord_field


def covariant_derivative_vector(chart: MetricChart, vfield: Callable,
                                x: np.ndarray, h: float = H_METRIC) -> np.ndarray:
    """(grad V)[mu, nu] = grad_mu V^nu."""
    n = chart.dim
    dv = np.stack([_d4(vfield, x, mu, h) for mu in range(n)])
    gamma = chart.christoffels(x)
    return dv + np.einsum("nmr,r->mn", gamma, vfield(x))


def lie_derivative_metric(chart: MetricChart, vfield: Callable, x: np.ndarray) -> np.ndarray:
    """(L_V g)_{mu nu} = grad_mu V_nu + grad_nu V_mu."""
    g = chart.metric(x)
    grad = covariant_derivative_vector(chart, vfield, x)
    low = np.einsum("mn,nr->mr", grad, g)
    return low + low.T


def dirac_current_field(chart: MetricChart, field: SpinorField,
                        samples: int = 20, seed: int = 0) -> dict:
    """Dirac current of a spinor field with its Killing-vector diagnostics.

    Returns the coordinate vector field, the max Lie-derivative residual,
    pointwise causal types, and the inner products <phi, phi> at samples.
    """

    def comp(x):
        return dirac_current(field.spinor(x)).coeffs

    vfield = vector_field_from_frame(chart, comp)
    pts = sample_points(chart, samples, seed)
    killing = 0.0
    types = []
    lengths = []
    norms = []
    for x in pts:
        killing = max(killing, float(np.max(np.abs(lie_derivative_metric(chart, vfield, x)))))
        v = FrameVector(comp(x), chart.signature)
        types.append(causal_type(v, tol=1e-7).value)
        g_vv = float(np.sum(chart.epsilon * v.coeffs**2))
        lengths.append(g_vv)
        phi = field.spinor(x)
        norms.append(complex(np.conj(phi.coeffs) @ chart.spinor_space.beta @ phi.coeffs))
    return {
        "field": vfield,
        "killing_residual": killing,
        "causal_types": types,
        "current_squares": lengths,
        "spinor_lengths": norms,
        "points": pts,
    }


def special_killing_fit(chart: MetricChart, one_form_field: Callable,
                        points: np.ndarray) -> dict:
    """Best-fit constant c in grad_X d(alpha) = c (X flat ^ alpha), alpha a 1-form.

    ``one_form_field`` maps x to coordinate components alpha_mu.  The
    exterior derivative and its covariant derivative are finite-differenced
    with nested steps; the fit is least squares over all samples and index
    triples, with the residual reported at the fitted c.
    """
    n = chart.dim

    def dalpha(x):
        da = np.stack([_d4(one_form_field, x, mu, H_METRIC) for mu in range(n)])
        return da - da.T

    lhs = []
    rhs = []
    for x in points:
        g = chart.metric(x)
        gamma = chart.christoffels(x)
        dda = np.stack([_d4(dalpha, x, mu, H_NESTED) for mu in range(n)])
        da = dalpha(x)
        alpha = one_form_field(x)
        for s in range(n):
            # grad_s (d alpha)_{mu nu}
            cov = (
                dda[s]
                - np.einsum("rm,rn->mn", gamma[:, s, :], da)
                - np.einsum("rn,mr->mn", gamma[:, s, :], da)
            )
            wedge = np.outer(g[s], alpha) - np.outer(alpha, g[s])
            lhs.append(cov.ravel())
            rhs.append(wedge.ravel())
    lhs = np.concatenate(lhs)
    rhs = np.concatenate(rhs)
    denom = float(rhs @ rhs)
    if denom < 1e-20:
        return {"constant": 0.0, "residual": float(np.max(np.abs(lhs))), "fit_scale": 0.0}
    c = float(lhs @ rhs) / denom
    resid = float(np.max(np.abs(lhs - c * rhs)))
    return {"constant": c, "residual": resid, "fit_scale": float(np.max(np.abs(rhs)))}


def sasaki_check(chart: MetricChart, vfield: Callable, samples: int = 12,
                 seed: int = 0, unit_tol: float = 1e-8) -> dict:
    """The three structural identities of a unit timelike Killing field.

    With J(X) = grad_X V and kappa = scal/(n(n-1)) the identities are
    J(V) = 0, J^2(X) = kappa (X + g(V,X) V), and
    (grad_X J)(Y) = kappa (g(V,Y) X - g(X,Y) V).  Preconditions (unit
    length, Killing, V . W = 0, Einstein) are reported individually.
    """
    n = chart.dim
    pts = sample_points(chart, samples, seed)
    report = {
        "unit_length_residual": 0.0,
        "killing_residual": 0.0,
        "weyl_contraction_residual": 0.0,
        "einstein_residual": 0.0,
        "jv_residual": 0.0,
        "j_squared_residual": 0.0,
        "grad_j_residual": 0.0,
    }

    def jmat(x):
        return covariant_derivative_vector(chart, vfield, x).T  # J^nu_mu = grad_mu V^nu

    for x in pts:
        g = chart.metric(x)
        v = vfield(x)
        vv = float(v @ g @ v)
        report["unit_length_residual"] = max(report["unit_length_residual"], abs(vv + 1.0))
        report["killing_residual"] = max(
            report["killing_residual"], float(np.max(np.abs(lie_derivative_metric(chart, vfield, x))))
        )
        pack = curvature(chart, x)
        report["einstein_residual"] = max(report["einstein_residual"], pack.einstein_residual())
        vw = np.einsum("m,mbcd->bcd", v, pack.weyl)
        wscale = max(float(np.max(np.abs(pack.weyl))), 1.0)
        report["weyl_contraction_residual"] = max(
            report["weyl_contraction_residual"], float(np.max(np.abs(vw))) / wscale
        )
        kappa = pack.scal / (n * (n - 1))
        j = jmat(x)
        report["jv_residual"] = max(report["jv_residual"], float(np.max(np.abs(j @ v))))
        j2 = j @ j
        vlow = g @ v
        target = kappa * (np.eye(n) + np.outer(v, vlow))
        report["j_squared_residual"] = max(
            report["j_squared_residual"], float(np.max(np.abs(j2 - target)))
        )
        # grad_s J^m_n via nested differences
        dj = np.stack([_d4(jmat, x, mu, H_NESTED) for mu in range(n)])
        gamma = chart.christoffels(x)
        for s in range(n):
            covj = (
                dj[s]
                + np.einsum("mr,rn->mn", gamma[:, s, :], j)
                - np.einsum("rn,mr->mn", gamma[:, s, :], j)
            )
            # (grad_s J)(e_n) = kappa ( g(V, e_n) e_s - g(e_s, e_n) V )
            tgt = kappa * (np.outer(np.eye(n)[s], vlow) - np.outer(v, g[s]))
            report["grad_j_residual"] = max(
                report["grad_j_residual"], float(np.max(np.abs(covj - tgt)))
            )
    report["unit_ok"] = report["unit_length_residual"] <= unit_tol
    return report


def brinkmann_check(chart: MetricChart, samples: int = 20, seed: int = 0) -> dict:
    """Search the frame-constant ansatz space for a parallel lightlike field.

    Solves grad(sum_a c_a s_a) = 0 in least squares over sample points; a
    null vector of the stacked system gives a parallel candidate.  Reports
    whether a lightlike parallel field was found together with residuals.
    """
    n = chart.dim
    pts = sample_points(chart, samples, seed)
    rows = []
    for x in pts:
        gamma = chart.christoffels(x)
        dfr = np.stack([_d4(chart.frame, x, mu, H_METRIC) for mu in range(n)])
        fr = chart.frame(x)
        # grad_mu s_a^nu
        cov = dfr + np.einsum("nmr,ra->mna", gamma, fr)
        rows.append(cov.reshape(n * n, n))
    m = np.vstack(rows)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    tol = 1e-7 * max(1.0, s[0])
    null = vh[s <= tol].T if np.any(s <= tol) else np.zeros((n, 0))
    result = {
        "parallel_space_dim": null.shape[1],
        "found": False,
        "candidate": None,
        "residual": None,
        "smallest_singular_value": float(s[-1]),
    }
    if null.shape[1] == 0:
        return result
    # null columns are frame coefficients c with V = sum_a c_a s_a, so the
    # metric on the parallel space is the diagonal frame metric
    eps = chart.epsilon
    gn = null.T @ np.diag(eps) @ null
    gn = 0.5 * (gn + gn.T)
    w, vecs = np.linalg.eigh(gn)
    coeff = None
    if np.min(np.abs(w)) <= 1e-8:
        coeff = null @ vecs[:, int(np.argmin(np.abs(w)))]
    elif w[0] < 0 < w[-1]:
        a = null @ vecs[:, 0]
        b = null @ vecs[:, -1]
        coeff = a / np.sqrt(-w[0]) + b / np.sqrt(w[-1])
    if coeff is None:
        return result
    coeff = coeff / np.linalg.norm(coeff)

    def vfield(x):
        return chart.frame(x) @ coeff

    worst = 0.0
    for x in pts:
        grad = covariant_derivative_vector(chart, vfield, x)
        worst = max(worst, float(np.max(np.abs(grad))))
    gcc = float(np.sum(eps * coeff**2))
    result.update(
        found=abs(gcc) <= 1e-8 and worst <= 1e-6,
        candidate=coeff,
        residual=worst,
        lightlike_value=gcc,
    )
    return result
