import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinorbench.clifford import Signature, Spinor, build_spinor_space
from spinorbench.forms import (
    CausalType,
    FrameVector,
    PForm,
    associated_p_form,
    causal_type,
    dirac_current,
    minkowski_square,
    pform_from_json,
    pform_to_json,
    timelike_contraction,
    two_form_from_spinor,
    wedge_covectors,
)
from spinorbench.forms import _pairing


def random_spinor(space, rng):
    return Spinor(space, rng.normal(size=space.dim_spinor) + 1j * rng.normal(size=space.dim_spinor))


class TestDiracCurrent:
    def test_zero_spinor(self):
        sp = build_spinor_space((1, 3))
        v = dirac_current(Spinor(sp, np.zeros(4)))
        assert np.all(v.coeffs == 0)

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 6])
    def test_causal_and_nonzero(self, q):
        sp = build_spinor_space((1, q))
        rng = np.random.default_rng(100 + q)
        for _ in range(200):
            phi = random_spinor(sp, rng)
            v = dirac_current(phi)
            assert minkowski_square(v) <= 1e-10 * phi.norm() ** 4
            assert v.norm_euclid() > 1e-10 * phi.norm() ** 2

    def test_componentwise_oracle(self):
        # V_j matches the direct evaluation -<e_j phi, phi> / eps_j per slot
        sp = build_spinor_space((1, 3))
        phi = Spinor(sp, np.eye(4)[0])
        v = dirac_current(phi)
        eps = sp.signature.epsilon
        for j in range(4):
            direct = -(np.conj(sp.gamma[j] @ phi.coeffs) @ sp.beta @ phi.coeffs).real
            assert abs(v.coeffs[j] - direct / eps[j]) <= 1e-14

    def test_requires_lorentzian(self):
        sp = build_spinor_space((2, 2))
        with pytest.raises(ValueError):
            dirac_current(Spinor(sp, np.ones(4)))

    def test_eigenvector_alignment(self):
        # if gamma(X) phi = rho phi with real rho then X is parallel to V_phi
        sp = build_spinor_space((1, 3))
        rng = np.random.default_rng(11)
        found = 0
        for _ in range(50):
            x = rng.normal(size=4)
            g = float(np.sum(sp.signature.epsilon * x**2))
            if g >= -1e-6:
                continue
            x = x / np.sqrt(-g)
            mat = sum(xi * gi for xi, gi in zip(x, sp.gamma))
            w, vecs = np.linalg.eig(mat)
            for k in range(len(w)):
                if abs(w[k].imag) < 1e-10:
                    phi = Spinor(sp, vecs[:, k])
                    v = dirac_current(phi)
                    cross = np.outer(x, v.coeffs) - np.outer(v.coeffs, x)
                    assert np.max(np.abs(cross)) <= 1e-8 * v.norm_euclid()
                    found += 1
        assert found > 10


class TestAssociatedForms:
    def test_zero_spinor(self):
        sp = build_spinor_space((1, 4))
        form = associated_p_form(Spinor(sp, np.zeros(4)), 3)
        assert form.max_abs() == 0.0

    def test_degree_range(self):
        sp = build_spinor_space((1, 3))
        with pytest.raises(ValueError):
            associated_p_form(Spinor(sp, np.ones(4)), 5)

    def test_p1_matches_dirac_current(self):
        sp = build_spinor_space((1, 3))
        rng = np.random.default_rng(12)
        for _ in range(20):
            phi = random_spinor(sp, rng)
            v = dirac_current(phi)
            alpha = associated_p_form(phi, 1)
            lowered = sp.signature.epsilon * v.coeffs
            for j in range(4):
                assert abs(alpha.coefficient((j,)) - lowered[j]) <= 1e-12 * max(1, phi.norm() ** 2)

    @pytest.mark.parametrize("p", [1, 3])
    def test_realness(self, p):
        from itertools import combinations

        sp = build_spinor_space((1, 4))
        rng = np.random.default_rng(13)
        pref = -((1j) ** (p * (p - 1) // 2))
        for _ in range(50):
            phi = random_spinor(sp, rng)
            total = 0.0
            imag = 0.0
            for idx in combinations(range(5), p):
                val = pref * _pairing(phi, idx)
                total += abs(val)
                imag += abs(val.imag)
            assert imag <= 1e-12 * max(total, 1.0)


class TestTwoForm:
    def test_zero(self):
        sp = build_spinor_space((2, 3))
        assert two_form_from_spinor(Spinor(sp, np.zeros(4))).max_abs() == 0.0

    def test_nontrivial_for_nonzero_spinors(self):
        sp = build_spinor_space((2, 3))
        rng = np.random.default_rng(14)
        for _ in range(200):
            g = random_spinor(sp, rng)
            form = two_form_from_spinor(g)
            assert form.max_abs() > 1e-10 * g.norm() ** 2

    def test_pairwise_index_oracle(self):
        sp = build_spinor_space((2, 4))
        rng = np.random.default_rng(15)
        g = random_spinor(sp, rng)
        form = two_form_from_spinor(g)
        for i in range(6):
            for j in range(i + 1, 6):
                direct = (-1j * _pairing(g, (i, j))).real
                assert abs(form.coefficient((i, j)) - direct) <= 1e-13 * max(1, g.norm() ** 2)

    def test_wrong_signature(self):
        sp = build_spinor_space((1, 3))
        with pytest.raises(ValueError):
            two_form_from_spinor(Spinor(sp, np.ones(4)))


class TestContraction:
    def test_zero_form(self):
        sig = Signature(2, 3)
        t = FrameVector(np.eye(5)[0], sig)
        out = timelike_contraction(t, PForm(2, {}, sig))
        assert np.all(out.coeffs == 0)

    def test_direct_contraction_oracle(self):
        sig = Signature(1, 3)
        eps = sig.epsilon
        om = wedge_covectors([eps * np.eye(4)[0], eps * np.eye(4)[1]], sig)
        t = FrameVector(np.eye(4)[0], sig)
        out = timelike_contraction(t, om)
        # e0_flat ^ e1_flat contracted with e0 gives -e1_flat, raised to -e1
        assert np.allclose(out.coeffs, [0.0, -1.0, 0.0, 0.0])

    def test_spinor_contraction_is_causal(self):
        # contraction of an induced 2-form with any unit timelike T is causal
        sig = Signature(2, 3)
        sp = build_spinor_space((2, 3))
        rng = np.random.default_rng(16)
        for _ in range(50):
            g = random_spinor(sp, rng)
            om = two_form_from_spinor(g)
            s = rng.normal(size=3) * 0.5
            tvec = np.concatenate([[np.sqrt(1 + s @ s), 0.0], s])
            t = FrameVector(tvec, sig)
            out = timelike_contraction(t, om)
            assert minkowski_square(out) <= 1e-9 * max(out.norm_euclid() ** 2, 1e-30)

    def test_rejects_bad_input(self):
        sig = Signature(1, 3)
        om = PForm(2, {(0, 1): 1.0}, sig)
        with pytest.raises(ValueError):
            timelike_contraction(FrameVector(np.eye(4)[1], sig), om)
        with pytest.raises(ValueError):
            timelike_contraction(FrameVector(np.eye(4)[0], sig), PForm(1, {(0,): 1.0}, sig))


class TestCausalType:
    def test_basic(self):
        sig = Signature(1, 3)
        assert causal_type(FrameVector(np.eye(4)[0], sig)) is CausalType.TIMELIKE
        assert causal_type(FrameVector(np.array([1.0, 1, 0, 0]), sig)) is CausalType.LIGHTLIKE
        assert causal_type(FrameVector(np.eye(4)[1], sig)) is CausalType.SPACELIKE
        assert causal_type(FrameVector(np.zeros(4), sig)) is CausalType.ZERO

    @given(st.integers(0, 10**6))
    @settings(max_examples=50, deadline=None)
    def test_scale_invariance(self, seed):
        sig = Signature(1, 3)
        rng = np.random.default_rng(seed)
        x = rng.normal(size=4)
        a = causal_type(FrameVector(x, sig))
        b = causal_type(FrameVector(3.7 * x, sig))
        assert a is b


def test_pform_json_roundtrip():
    sig = Signature(2, 3)
    om = PForm(2, {(0, 1): 1.25, (2, 4): -0.5}, sig)
    data = pform_to_json(om)
    assert data == {
        "degree": 2,
        "terms": [{"idx": [0, 1], "c": 1.25}, {"idx": [2, 4], "c": -0.5}],
    }
    back = pform_from_json(data, sig)
    assert back.terms == om.terms


def test_pform_validation():
    sig = Signature(1, 3)
    with pytest.raises(ValueError):
        PForm(2, {(1, 0): 1.0}, sig)
    with pytest.raises(ValueError):
        PForm(5, {}, sig)
