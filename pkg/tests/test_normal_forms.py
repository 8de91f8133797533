import numpy as np
import pytest
from scipy.linalg import block_diag

from spinorbench.clifford import Signature
from spinorbench.forms import PForm, wedge_covectors
from spinorbench.normal_forms import (
    ClassificationError,
    GenericType,
    SkewOperator,
    causal_contraction_test,
    classify,
    detect_generic_type,
    operator_from_form,
    random_isometry,
    stabilizer_dimension,
    standard_gram,
    table_block,
    validate,
)


def embed(blocks, pad_space=0, pad_time=0):
    """Block-diagonal operator padded with 1-dim zero blocks."""
    a_mats = [b.a_matrix() for b in blocks]
    b_mats = [b.b_matrix() for b in blocks]
    a_mats += [np.eye(1)] * pad_space + [-np.eye(1)] * pad_time
    b_mats += [np.zeros((1, 1))] * (pad_space + pad_time)
    return SkewOperator(block_diag(*b_mats), block_diag(*a_mats))


class TestValidate:
    def test_zero_ok(self):
        rep = validate(SkewOperator(np.zeros((4, 4)), np.diag([-1.0, -1, 1, 1])))
        assert rep.ok and rep.gram_index == 2

    def test_symmetric_operator_fails(self):
        gram = np.diag([-1.0, -1, 1, 1])
        b = np.diag([1.0, 2, 3, 4])
        rep = validate(SkewOperator(b, gram))
        assert not rep.ok and rep.skew_residual > 0.1

    def test_constructed_skew_passes(self):
        rng = np.random.default_rng(0)
        gram = np.diag([-1.0, -1, 1, 1, 1])
        for _ in range(20):
            s = rng.normal(size=(5, 5))
            b = np.linalg.solve(gram, (s - s.T) / 2)
            assert validate(SkewOperator(b, gram)).ok


class TestWorkedExamples:
    def test_kahler_multiple(self):
        # nu * standard Kahler form on R^{2,4}: B_II(nu) + (m-1) B(nu)
        sig = Signature(2, 4)
        om = PForm(2, {(0, 1): 2.0, (2, 3): 2.0, (4, 5): 2.0}, sig)
        dec = classify(operator_from_form(om))
        labels = sorted(b.kind for b in dec.blocks)
        assert labels == ["B_II", "Euclid_B", "Euclid_B"]
        for b in dec.blocks:
            assert abs(b.params[0] - 2.0) <= 1e-8

    def test_totally_lightlike_plane(self):
        sig = Signature(2, 4)
        eps = sig.epsilon
        l1 = np.array([1.0, 0, 1, 0, 0, 0])
        l2 = np.array([0.0, 1, 0, 1, 0, 0])
        om = wedge_covectors([eps * l1, eps * l2], sig)
        dec = classify(operator_from_form(om))
        kinds = sorted(b.kind for b in dec.blocks)
        assert kinds == ["B_Ia", "Zero", "Zero"]
        zeros = [b for b in dec.blocks if b.kind == "Zero"]
        assert all(b.block_signature == (0, 1) for b in zeros)

    def test_lightlike_wedge_timelike(self):
        sig = Signature(2, 3)
        eps = sig.epsilon
        l1 = np.array([1.0, 0, 1, 0, 0])
        t1 = np.array([0.0, 1, 0, 0, 0])
        om = wedge_covectors([eps * l1, eps * t1], sig)
        dec = classify(operator_from_form(om))
        kinds = sorted(b.kind for b in dec.blocks)
        assert kinds == ["B_Ib", "Zero", "Zero"]

    def test_zero_operator(self):
        op = SkewOperator(np.zeros((5, 5)), standard_gram(Signature(2, 3)))
        dec = classify(op)
        assert all(b.kind == "Zero" for b in dec.blocks)
        sigs = sorted(b.block_signature for b in dec.blocks)
        assert sigs == [(0, 1), (0, 1), (0, 1), (1, 0), (1, 0)]


LINES = [
    ("Euclid_B", [table_block("Euclid_B", 1.3)], 1, 1),
    ("L11", [table_block("L11", 0.7)], 2, 1),
    ("L12_nilp", [table_block("L12_nilp")], 2, 1),
    ("B_Ia", [table_block("B_Ia")], 2, 0),
    ("B_Ib", [table_block("B_Ib")], 3, 0),
    ("B_II", [table_block("B_II", 2.1)], 3, 0),
    ("B_IIa_plus", [table_block("B_IIa", 1.1)], 2, 0),
    ("B_IIa_minus", [table_block("B_IIa", -0.8)], 2, 0),
    ("B_IIb", [table_block("B_IIb", 0.9, 1.7)], 2, 0),
    ("Mixed_22", [table_block("Mixed_22", 1.4)], 2, 0),
    ("Kahler_24", [table_block("Kahler_24", 0.6)], 2, 0),
    ("Nilp_24", [table_block("Nilp_24")], 1, 0),
    ("Split_22", [table_block("Split_22", 2.2)], 2, 0),
    ("Zero_tt", [table_block("Zero", signature=(1, 0)), table_block("Zero", signature=(1, 0))], 3, 0),
]


class TestRoundTrip:
    @pytest.mark.parametrize("name,blocks,pe,pt", LINES, ids=[l[0] for l in LINES])
    def test_conjugation_invariance(self, name, blocks, pe, pt):
        op = embed(blocks, pe, pt)
        ref = classify(op)
        a0, b0 = ref.block_diagonal()
        assert ref.residual <= 1e-10
        rng = np.random.default_rng(abs(hash(name)) % 2**32)
        for _ in range(25):
            g = random_isometry(op.gram, rng)
            conj = SkewOperator(np.linalg.solve(g, op.b @ g), op.gram)
            dec = classify(conj)
            assert dec.block_multiset() == ref.block_multiset()
            assert dec.residual <= 1e-8
            # parameters recovered to 1e-6
            for blk_ref, blk in zip(
                sorted(ref.blocks, key=lambda b: (b.kind, b.params)),
                sorted(dec.blocks, key=lambda b: (b.kind, b.params)),
            ):
                assert blk.kind == blk_ref.kind
                for pr, pv in zip(blk_ref.params, blk.params):
                    assert abs(pr - pv) <= 1e-6

    def test_reconstruction_identity(self):
        op = embed([table_block("Kahler_24", 1.3)], 2, 0)
        rng = np.random.default_rng(77)
        g = random_isometry(op.gram, rng)
        conj = SkewOperator(np.linalg.solve(g, op.b @ g), op.gram)
        dec = classify(conj)
        a0, b0 = dec.block_diagonal()
        rec_b = np.linalg.solve(dec.basis, conj.b @ dec.basis)
        rec_a = dec.basis.T @ conj.gram @ dec.basis
        assert np.max(np.abs(rec_b - b0)) <= 1e-8 * max(1.0, np.linalg.norm(conj.b, 2))
        assert np.max(np.abs(rec_a - a0)) <= 1e-8


def test_spectral_symmetry():
    # eigenvalues of a validated operator occur in {mu, -mu, conj, -conj}
    rng = np.random.default_rng(5)
    gram = standard_gram(Signature(2, 4))
    for _ in range(50):
        s = rng.normal(size=(6, 6))
        b = np.linalg.solve(gram, (s - s.T) / 2)
        vals = np.linalg.eigvals(b)
        for mu in vals:
            for target in (-mu, np.conj(mu), -np.conj(mu)):
                assert np.min(np.abs(vals - target)) <= 1e-8 * max(1, np.abs(mu))


def test_ill_conditioned_raises_not_guesses():
    # two rotation frequencies straddling every tolerance rung of the ladder
    blk1 = table_block("B_II", 1.0)
    blk2 = table_block("Euclid_B", 1.0 + 3e-7)
    op = embed([blk1, blk2])
    try:
        dec = classify(op)
    except ClassificationError:
        return
    # if it does classify, the answer must reconstruct honestly
    assert dec.residual <= 1e-8


class TestGenericType:
    def test_kahler_type(self):
        sig = Signature(2, 4)
        om = PForm(2, {(0, 1): 1.0, (2, 3): 1.0, (4, 5): 1.0}, sig)
        assert detect_generic_type(om) is GenericType.IIA

    def test_lightlike_plane_type(self):
        sig = Signature(2, 4)
        eps = sig.epsilon
        om = wedge_covectors(
            [eps * np.array([1.0, 0, 1, 0, 0, 0]), eps * np.array([0.0, 1, 0, 1, 0, 0])], sig
        )
        assert detect_generic_type(om) is GenericType.IA

    def test_ib_type(self):
        sig = Signature(2, 3)
        eps = sig.epsilon
        om = wedge_covectors(
            [eps * np.array([1.0, 0, 1, 0, 0]), eps * np.array([0.0, 1, 0, 0, 0])], sig
        )
        assert detect_generic_type(om) is GenericType.IB

    def test_iib_type(self):
        # Kahler form of a (2,2) factor extended by zero on a Euclidean plane
        sig = Signature(2, 4)
        om = PForm(2, {(0, 1): 1.0, (2, 3): 1.0}, sig)
        assert detect_generic_type(om) is GenericType.IIB

    def test_other_type(self):
        sig = Signature(2, 2)
        om = PForm(2, {(0, 1): 1.0, (2, 3): 2.0}, sig)  # mismatched frequencies
        assert detect_generic_type(om) is GenericType.OTHER

    def test_zero_refused(self):
        sig = Signature(2, 2)
        with pytest.raises(ValueError):
            detect_generic_type(PForm(2, {}, sig))


class TestCausalContraction:
    def test_ia_all_causal_with_lightlike(self):
        sig = Signature(2, 4)
        eps = sig.epsilon
        om = wedge_covectors(
            [eps * np.array([1.0, 0, 1, 0, 0, 0]), eps * np.array([0.0, 1, 0, 1, 0, 0])], sig
        )
        res = causal_contraction_test(om, seed=1)
        assert res.verdict == "all_causal"
        assert res.all_causal and not res.all_timelike
        assert res.lightlike_attained

    def test_kahler_all_timelike(self):
        sig = Signature(2, 4)
        om = PForm(2, {(0, 1): 1.5, (2, 3): 1.5, (4, 5): 1.5}, sig)
        res = causal_contraction_test(om, seed=1)
        assert res.verdict == "all_timelike"

    def test_spacelike_wedge_fails_with_witness(self):
        sig = Signature(2, 4)
        om = PForm(2, {(2, 3): 1.0}, sig)
        res = causal_contraction_test(om, seed=1)
        assert res.verdict == "fails"
        assert res.witness is not None
        t = res.witness
        gram = standard_gram(sig)
        bt = operator_from_form(om).b @ t
        assert t @ gram @ t < 0
        assert bt @ gram @ bt > 0

    def test_biib_rule_overridden_by_sampling(self):
        # the stated nu^2 >= xi^2 condition admits a sampled spacelike witness
        blk = table_block("B_IIb", 2.0, 1.0)
        sig = Signature(2, 2)
        om = PForm.from_matrix(blk.a_matrix() @ blk.b_matrix(), sig)
        res = causal_contraction_test(om, gram=blk.a_matrix(), seed=3)
        assert res.rule_verdict == "all_timelike"
        assert res.verdict == "fails" and res.witness is not None

    def test_biia_sign_sensitivity(self):
        sig = Signature(2, 2)
        for nu, expected in ((1.2, "all_timelike"), (-1.2, "fails")):
            blk = table_block("B_IIa", nu)
            om = PForm.from_matrix(blk.a_matrix() @ blk.b_matrix(), sig)
            res = causal_contraction_test(om, gram=blk.a_matrix(), seed=0)
            assert res.verdict == expected

    def test_frequency_dominance(self):
        sig = Signature(2, 2)
        om_pass = PForm(2, {(0, 1): 2.0, (2, 3): 1.0}, sig)
        om_fail = PForm(2, {(0, 1): 1.0, (2, 3): 2.0}, sig)
        assert causal_contraction_test(om_pass, seed=0).verdict == "all_timelike"
        assert causal_contraction_test(om_fail, seed=0).verdict == "fails"

    def test_seed_reproducibility(self):
        sig = Signature(2, 3)
        om = PForm(2, {(2, 3): 1.0}, sig)
        r1 = causal_contraction_test(om, seed=9)
        r2 = causal_contraction_test(om, seed=9)
        assert np.array_equal(r1.witness, r2.witness)
        assert r1.max_sampled == r2.max_sampled


class TestStabilizer:
    def test_zero_operator_full_algebra(self):
        for n in (4, 5, 6):
            sig = Signature(2, n - 2)
            op = SkewOperator(np.zeros((n, n)), standard_gram(sig))
            assert stabilizer_dimension(classify(op)) == n * (n - 1) // 2

    def test_kahler_unitary_dimension(self):
        # u(1, m-1) has dimension m^2
        for m, n in ((2, 4), (3, 6)):
            sig = Signature(2, n - 2)
            terms = {(2 * i, 2 * i + 1): 1.0 for i in range(m)}
            om = PForm(2, terms, sig)
            dec = classify(operator_from_form(om))
            assert stabilizer_dimension(dec) == m * m

    def test_iib_split_dimension(self):
        # u(1,1) + so(2) = 4 + 1
        sig = Signature(2, 4)
        om = PForm(2, {(0, 1): 1.0, (2, 3): 1.0}, sig)
        assert stabilizer_dimension(classify(operator_from_form(om))) == 5

    def test_conjugation_invariant(self):
        rng = np.random.default_rng(21)
        op = embed([table_block("B_IIa", 1.5)], 2, 0)
        ref = stabilizer_dimension(classify(op))
        g = random_isometry(op.gram, rng)
        conj = SkewOperator(np.linalg.solve(g, op.b @ g), op.gram)
        assert stabilizer_dimension(classify(conj)) == ref


def test_type_maximal_stabilizer_consistency():
    # among causal-passing forms of one dimension class, maximal stabilizer
    # dimension occurs only at the four generic types
    sig = Signature(2, 4)
    eps = sig.epsilon
    population = [
        PForm(2, {(0, 1): 1.0, (2, 3): 1.0, (4, 5): 1.0}, sig),  # II_a
        PForm(2, {(0, 1): 1.0, (2, 3): 1.0}, sig),  # II_b
        wedge_covectors([eps * np.array([1.0, 0, 1, 0, 0, 0]),
                         eps * np.array([0.0, 1, 0, 1, 0, 0])], sig),  # I_a
        wedge_covectors([eps * np.array([1.0, 0, 1, 0, 0, 0]),
                         eps * np.array([0.0, 1, 0, 0, 0, 0])], sig),  # I_b
        PForm(2, {(0, 1): 1.0, (2, 3): 0.5, (4, 5): 0.25}, sig),  # other, causal
        PForm(2, {(0, 1): 1.0, (2, 3): 0.5}, sig),  # other, causal
    ]
    passing = []
    for om in population:
        res = causal_contraction_test(om, seed=0)
        if res.all_causal:
            dec = classify(operator_from_form(om))
            passing.append((detect_generic_type(om), stabilizer_dimension(dec)))
    assert passing
    dmax = max(d for _, d in passing)
    for tag, d in passing:
        if d == dmax:
            assert tag in (GenericType.IA, GenericType.IB, GenericType.IIA, GenericType.IIB)


def test_classify_determinism():
    op = embed([table_block("B_IIa", 1.5)], 2, 0)
    rng = np.random.default_rng(33)
    g = random_isometry(op.gram, rng)
    conj = SkewOperator(np.linalg.solve(g, op.b @ g), op.gram)
    d1 = classify(conj)
    d2 = classify(conj)
    assert d1.basis.tobytes() == d2.basis.tobytes()
    assert [b.label() for b in d1.blocks] == [b.label() for b in d2.blocks]
