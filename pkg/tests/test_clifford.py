import numpy as np
import pytest

from spinorbench.clifford import (
    Signature,
    Spinor,
    build_spinor_space,
    clifford_action,
    gamma_product,
    half_spinor_split,
    inner_product,
    spinor_space_from_json,
    spinor_space_to_json,
)

ALL_SIGNATURES = [
    (p, q) for p in range(3) for q in range(0, 9 - p) if p + q >= 1
]


def random_spinor(space, rng):
    return Spinor(space, rng.normal(size=space.dim_spinor) + 1j * rng.normal(size=space.dim_spinor))


@pytest.mark.parametrize("p,q", ALL_SIGNATURES)
def test_clifford_relations(p, q):
    sp = build_spinor_space((p, q))
    eps = sp.signature.epsilon
    eye = np.eye(sp.dim_spinor)
    for i in range(sp.n):
        for j in range(sp.n):
            anti = sp.gamma[i] @ sp.gamma[j] + sp.gamma[j] @ sp.gamma[i]
            target = -2 * eps[i] * eye if i == j else np.zeros_like(eye)
            assert np.max(np.abs(anti - target)) <= 1e-12


@pytest.mark.parametrize("p,q", ALL_SIGNATURES)
def test_beta_compatibility(p, q):
    sp = build_spinor_space((p, q))
    assert np.max(np.abs(sp.beta - sp.beta.conj().T)) <= 1e-12
    # beta invertible with unit-modulus eigenvalues, so <phi,phi> = 1 is attained
    w = np.linalg.eigvalsh(sp.beta)
    assert np.max(np.abs(np.abs(w) - 1)) <= 1e-12
    for g in sp.gamma:
        assert np.max(np.abs(g.conj().T @ sp.beta - sp.adjoint_sign * sp.beta @ g)) <= 1e-12


@pytest.mark.parametrize("p,q", [s for s in ALL_SIGNATURES if (s[0] + s[1]) % 2 == 0])
def test_chirality_projectors(p, q):
    sp = build_spinor_space((p, q))
    pp, pm = sp.projectors()
    eye = np.eye(sp.dim_spinor)
    assert np.max(np.abs(pp @ pp - pp)) <= 1e-14
    assert np.max(np.abs(pm @ pm - pm)) <= 1e-14
    assert np.max(np.abs(pp @ pm)) <= 1e-14
    assert np.max(np.abs(pp + pm - eye)) <= 1e-14


def test_dimension_examples():
    assert build_spinor_space((0, 1)).dim_spinor == 1
    sp13 = build_spinor_space((1, 3))
    assert sp13.dim_spinor == 4
    eye = np.eye(4)
    assert np.allclose(sp13.gamma[0] @ sp13.gamma[0], eye)
    assert np.allclose(sp13.gamma[1] @ sp13.gamma[1], -eye)


def test_dimension_cap():
    with pytest.raises(ValueError):
        build_spinor_space((2, 11))


def test_determinism():
    a = build_spinor_space((2, 3))
    b = build_spinor_space(Signature(2, 3))
    assert a is b
    for g1, g2 in zip(a.gamma, b.gamma):
        assert g1.tobytes() == g2.tobytes()


def test_vector_action_squares_to_minus_norm():
    rng = np.random.default_rng(3)
    sp = build_spinor_space((1, 2))
    for _ in range(20):
        x = rng.normal(size=3)
        phi = random_spinor(sp, rng)
        xx = clifford_action(x, clifford_action(x, phi))
        g = float(np.sum(sp.signature.epsilon * x**2))
        assert np.allclose(xx.coeffs, -g * phi.coeffs, atol=1e-12)


def test_unit_spacelike_action():
    sp = build_spinor_space((1, 3))
    rng = np.random.default_rng(4)
    phi = random_spinor(sp, rng)
    e1 = np.array([0.0, 1.0, 0.0, 0.0])
    out = clifford_action(e1, clifford_action(e1, phi))
    assert np.allclose(out.coeffs, -phi.coeffs, atol=1e-14)
    zero = clifford_action(np.zeros(4), phi)
    assert np.allclose(zero.coeffs, 0.0)


def test_form_action_matches_gamma_product():
    # action of e0 ^ e1 equals the ordered product gamma_0 gamma_1
    from spinorbench.forms import PForm

    sp = build_spinor_space((1, 2))
    rng = np.random.default_rng(5)
    phi = random_spinor(sp, rng)
    form = PForm(2, {(0, 1): 1.0}, sp.signature)
    via_form = clifford_action(form, phi).coeffs
    via_product = gamma_product(sp, (0, 1)) @ phi.coeffs
    assert np.max(np.abs(via_form - via_product)) <= 1e-14


def test_inner_product_hermitian_and_adjointness():
    rng = np.random.default_rng(6)
    sp = build_spinor_space((1, 3))
    for _ in range(100):
        x = rng.normal(size=4)
        phi, psi = random_spinor(sp, rng), random_spinor(sp, rng)
        assert abs(inner_product(phi, psi) - np.conj(inner_product(psi, phi))) <= 1e-12
        lhs = inner_product(clifford_action(x, phi), psi)
        rhs = inner_product(phi, clifford_action(x, psi))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))
    zero = Spinor(sp, np.zeros(4))
    assert inner_product(zero, random_spinor(sp, rng)) == 0


def test_three_form_pairing_imaginary_in_1_4():
    # <rho^3 . phi, phi> is purely imaginary for 3-forms in (1,4)
    from spinorbench.forms import PForm
    from itertools import combinations

    rng = np.random.default_rng(7)
    sp = build_spinor_space((1, 4))
    for _ in range(50):
        terms = {idx: rng.normal() for idx in combinations(range(5), 3)}
        rho = PForm(3, terms, sp.signature)
        phi = random_spinor(sp, rng)
        val = inner_product(clifford_action(rho, phi), phi)
        assert abs(val.real) <= 1e-12 * max(1.0, abs(val))


def test_half_spinor_split():
    rng = np.random.default_rng(8)
    sp = build_spinor_space((2, 4))
    phi = random_spinor(sp, rng)
    plus, minus = half_spinor_split(phi)
    assert np.max(np.abs(plus.coeffs + minus.coeffs - phi.coeffs)) <= 1e-14
    pp, pm = sp.projectors()
    assert np.max(np.abs(pp @ plus.coeffs - plus.coeffs)) <= 1e-13
    assert np.max(np.abs(pm @ minus.coeffs - minus.coeffs)) <= 1e-13
    # already chiral input: plus part is itself, minus part vanishes
    again_p, again_m = half_spinor_split(plus)
    assert np.max(np.abs(again_p.coeffs - plus.coeffs)) <= 1e-13
    assert np.max(np.abs(again_m.coeffs)) <= 1e-13
    zero_p, zero_m = half_spinor_split(Spinor(sp, np.zeros(sp.dim_spinor)))
    assert zero_p.norm() == 0 and zero_m.norm() == 0
    with pytest.raises(ValueError):
        half_spinor_split(random_spinor(build_spinor_space((1, 2)), rng))


def test_space_mismatch_errors():
    rng = np.random.default_rng(9)
    sp1 = build_spinor_space((1, 3))
    with pytest.raises(ValueError):
        clifford_action(np.ones(3), random_spinor(sp1, rng))
    sp2 = build_spinor_space((2, 2))
    with pytest.raises(ValueError):
        inner_product(random_spinor(sp1, rng), random_spinor(sp2, rng))


def test_json_roundtrip():
    sp = build_spinor_space((2, 3))
    data = spinor_space_to_json(sp)
    back = spinor_space_from_json(data)
    for g1, g2 in zip(sp.gamma, back.gamma):
        assert np.array_equal(g1, g2)
    assert np.array_equal(sp.beta, back.beta)
    assert back.adjoint_sign == sp.adjoint_sign
