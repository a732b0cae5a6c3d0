import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifftomo.clifford import (
    CNOT,
    CliffordTableau,
    GateSeq,
    H,
    S,
    X,
    Z,
    all_cliffords,
    compile,
    compose,
    conjugate,
    conjugate_transform,
    equal_up_to_phase,
    gates_to_matrix,
    inverse,
    random_clifford,
    tableau_from_text,
    tableau_to_text,
    to_matrix,
)
from clifftomo.densesim import DenseUnitary, distance
from clifftomo.f2la import F2Vec, symplectic_check
from clifftomo.pauli import DenseLimitError, SignedPauli, all_paulis, commutes
from clifftomo.pauli import to_matrix as pauli_matrix
from clifftomo.verify import phase_aligned_error

P = SignedPauli.from_str
HT = CliffordTableau.from_gates(1, [H(0)])
ST = CliffordTableau.from_gates(1, [S(0)])
CX = CliffordTableau.from_gates(2, [CNOT(0, 1)])
I1 = CliffordTableau.identity(1)

seeds = st.integers(0, 2**32 - 1)


def rand(n, seed):
    return random_clifford(n, np.random.default_rng(seed))


def random_pauli(n, rng):
    a, b = (F2Vec.from_bits(rng.integers(0, 2, size=n)) for _ in range(2))
    return SignedPauli(a, b, int(rng.integers(0, 4)))


def random_gates(n, rng, count):
    out = []
    for _ in range(count):
        kind = rng.integers(0, 5)
        q = int(rng.integers(0, n))
        if kind == 4 and n > 1:
            out.append(CNOT(q, int((q + rng.integers(1, n)) % n)))
        else:
            out.append([H, S, X, Z, H][kind](q))
    return out


class TestConjugate:
    def test_hadamard(self):
        assert conjugate(HT, P("Z")) == P("+X")

    def test_phase_gate(self):
        assert conjugate(ST, P("X")) == P("+Y")

    def test_cnot(self):
        assert conjugate(CX, P("XI")) == P("+XX")
        assert conjugate(CX, P("IZ")) == P("+ZZ")

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            conjugate(HT, P("XX"))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 4), seeds)
    def test_matches_dense_conjugation(self, n, seed):
        rng = np.random.default_rng(seed)
        t = random_clifford(n, rng)
        u = to_matrix(t).matrix
        p = random_pauli(n, rng)
        got = pauli_matrix(conjugate(t, p))
        assert np.allclose(u @ pauli_matrix(p) @ u.conj().T, got, atol=1e-10)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 12), seeds)
    def test_group_action(self, n, seed):
        rng = np.random.default_rng(seed)
        t1, t2 = random_clifford(n, rng), random_clifford(n, rng)
        p = random_pauli(n, rng)
        assert conjugate(compose(t1, t2), p) == conjugate(t1, conjugate(t2, p))

    @settings(max_examples=40, deadline=None)
    @given(st.integers(1, 12), seeds)
    def test_preserves_commutation(self, n, seed):
        rng = np.random.default_rng(seed)
        t = random_clifford(n, rng)
        p, q = random_pauli(n, rng), random_pauli(n, rng)
        assert commutes(p, q) == commutes(conjugate(t, p), conjugate(t, q))


class TestComposeInverse:
    def test_hh_is_identity(self):
        assert compose(HT, HT) == I1

    def test_ss_is_pauli_z(self):
        t = compose(ST, ST)
        assert t.s.mat.is_identity()
        assert str(t.f) == "0" and str(t.h) == "1"

    @pytest.mark.parametrize("n", [1, 2, 5, 20, 64])
    def test_inverse_cancels(self, n):
        t = rand(n, n)
        ident = CliffordTableau.identity(n)
        assert compose(inverse(t), t) == ident
        assert compose(t, inverse(t)) == ident
        assert inverse(inverse(t)) == t

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_compose_matches_dense(self, n):
        rng = np.random.default_rng(n)
        t1, t2 = random_clifford(n, rng), random_clifford(n, rng)
        prod = DenseUnitary(to_matrix(t1).matrix @ to_matrix(t2).matrix)
        assert distance(to_matrix(compose(t1, t2)), prod) < 1e-7

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            compose(HT, CX)


class TestConjugateTransform:
    @pytest.mark.parametrize(
        "t,alpha,beta",
        [(CliffordTableau.identity(3), "000", "000"), (HT, "0", "0"), (ST, "1", "0")],
        ids=["identity", "hadamard", "phase"],
    )
    def test_examples(self, t, alpha, beta):
        a, b = conjugate_transform(t)
        assert (str(a), str(b)) == (alpha, beta)

    def test_phase_gate_dense(self):
        m = to_matrix(ST).matrix
        assert phase_aligned_error(m.conj(), m @ pauli_matrix(P("Z"))) < 1e-12

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_complex_conjugate_is_pauli_multiple(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(10):
            t = random_clifford(n, rng)
            m = to_matrix(t).matrix
            alpha, beta = conjugate_transform(t)
            target = m @ pauli_matrix(SignedPauli(alpha, beta))
            assert phase_aligned_error(m.conj(), target) <= 1e-10


class TestCompile:
    def test_identity_is_empty(self):
        assert len(compile(CliffordTableau.identity(4))) == 0

    def test_hadamard(self):
        assert str(compile(HT)) == "H(0)"

    @pytest.mark.parametrize("n", range(1, 9))
    def test_round_trip(self, n):
        rng = np.random.default_rng(n)
        for _ in range(200):
            t = random_clifford(n, rng)
            seq = compile(t)
            replay = CliffordTableau.from_gates(n, seq)
            assert np.array_equal(replay.rows[2], t.rows[2])
            assert replay == t

    @pytest.mark.parametrize("n", [8, 16, 32])
    def test_gate_count_quadratic(self, n):
        worst = max(len(compile(rand(n, s))) for s in range(5))
        assert worst <= 6 * n * n + 4 * n

    def test_gate_validation(self):
        with pytest.raises(ValueError):
            GateSeq(2, [CNOT(0, 2)])
        with pytest.raises(ValueError):
            CNOT(1, 1)

    def test_gateseq_inverse(self):
        rng = np.random.default_rng(3)
        gates = GateSeq(3, random_gates(3, rng, 30))
        t = CliffordTableau.from_gates(3, gates)
        assert compose(CliffordTableau.from_gates(3, gates.inverse()), t) == CliffordTableau.identity(3)


class TestDense:
    def test_identity_exact(self):
        assert np.array_equal(to_matrix(CliffordTableau.identity(2)).matrix, np.eye(4))

    def test_phase_gate(self):
        assert np.allclose(to_matrix(ST).matrix, np.diag([1, 1j]), atol=1e-12)

    def test_canonical_phase(self):
        m = to_matrix(rand(3, 9)).matrix
        first = m[np.flatnonzero(np.abs(m[:, 0]) > 1e-12)[0], 0]
        assert abs(first.imag) < 1e-12 and first.real > 0

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_known_gate_list(self, n):
        rng = np.random.default_rng(n)
        gates = GateSeq(n, random_gates(n, rng, 40))
        t = CliffordTableau.from_gates(n, gates)
        assert distance(to_matrix(t), DenseUnitary(gates_to_matrix(gates))) < 1e-10

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_generator_images_with_signs(self, n):
        t = rand(n, 50 + n)
        u = to_matrix(t).matrix
        for i in range(n):
            for gen, img in ((SignedPauli.single(n, i, "Z"), t.z_image(i)), (SignedPauli.single(n, i, "X"), t.x_image(i))):
                assert np.allclose(u @ pauli_matrix(gen) @ u.conj().T, pauli_matrix(img), atol=1e-10)

    def test_dense_limit(self):
        with pytest.raises(DenseLimitError):
            to_matrix(CliffordTableau.identity(7))


class TestSampling:
    def test_single_qubit_group(self):
        assert len(set(all_cliffords(1))) == 24
        rng = np.random.default_rng(0)
        draws = {random_clifford(1, rng) for _ in range(2000)}
        assert len(draws) == 24

    def test_two_qubit_draws(self):
        rng = np.random.default_rng(1)
        draws = [random_clifford(2, rng) for _ in range(50)]
        assert len(set(draws)) > 40
        assert all(symplectic_check(t.s.mat) for t in draws)

    def test_enumeration_size_n2(self):
        assert sum(1 for _ in all_cliffords(2)) == 720 * 16


class TestEquality:
    def test_examples(self):
        t = rand(3, 1)
        assert equal_up_to_phase(t, t)
        assert not equal_up_to_phase(I1, ST)
        assert equal_up_to_phase(t, compose(t, CliffordTableau.identity(3)))

    def test_signs_matter(self):
        z = CliffordTableau.from_gates(1, [Z(0)])
        assert z != I1 and z.s == I1.s


class TestTextForm:
    def test_hadamard_text(self):
        assert tableau_to_text(HT) == "n=1\n+Z\n+X"

    @pytest.mark.parametrize("n", [1, 3, 10])
    def test_round_trip(self, n):
        t = rand(n, n)
        assert tableau_from_text(tableau_to_text(t)) == t

    @pytest.mark.parametrize("bad", ["+X\n+Z", "n=1\n+X", "n=1\n+X\n+X", "n=1\n+iX\n+Z"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            tableau_from_text(bad)

    def test_from_images(self):
        t = CliffordTableau.from_images([P("X")], [P("-Z")])
        assert conjugate(t, P("Z")) == P("X") and conjugate(t, P("X")) == P("-Z")
        for p in all_paulis(1):
            assert conjugate(t, p).equal_up_to_phase(conjugate(HT, p))
