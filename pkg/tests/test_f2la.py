import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifftomo.f2la import (
    F2Mat,
    F2Vec,
    SymplecticMat,
    SymplecticViolation,
    format_matrix_text,
    lambda_matrix,
    mat_mul,
    nwords,
    pack_rows,
    parse_matrix_text,
    random_symplectic,
    row_reduce_signed,
    symplectic_check,
    symplectic_from_index,
    symplectic_group_order,
    symplectic_inverse,
    unpack_rows,
)

I2 = F2Mat.identity(2)
SHEAR = F2Mat.from_array([[1, 1], [0, 1]])
SWAP = F2Mat.from_array([[0, 1], [1, 0]])


def naive_mul(a, b):
    # triple-loop boolean product
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0
            for k in range(a.shape[1]):
                acc ^= a[i, k] & b[k, j]
            out[i, j] = acc
    return out


def naive_symplectic(m):
    n = m.shape[0] // 2
    lam = np.block([[np.zeros((n, n), int), np.eye(n, dtype=int)], [np.eye(n, dtype=int), np.zeros((n, n), int)]])
    return np.array_equal((m.T.astype(int) @ lam @ m) % 2, lam)


bit_arrays = st.integers(1, 200).flatmap(lambda n: st.lists(st.integers(0, 1), min_size=n, max_size=n))


class TestPacking:
    @pytest.mark.parametrize("nbits,words", [(0, 1), (1, 1), (64, 1), (65, 2), (128, 2), (129, 3)])
    def test_word_count(self, nbits, words):
        assert nwords(nbits) == words

    def test_bit_order_is_little_endian(self):
        v = F2Vec.from_bits([0] * 64 + [1, 0, 1])
        assert v.words.tolist() == [0, 5]
        assert F2Vec.from_bits([1, 1, 0]).words.tolist() == [3]

    @given(bit_arrays)
    def test_pad_bits_zero_and_round_trip(self, bits):
        v = F2Vec.from_bits(bits)
        assert v.to_array().tolist() == bits
        pad = nwords(len(bits)) * 64 - len(bits)
        if pad:
            assert int(v.words[-1]) >> (64 - pad) == 0
        assert not (v ^ v).any()

    def test_rows_round_trip(self):
        rng = np.random.default_rng(0)
        bits = rng.integers(0, 2, size=(7, 130), dtype=np.uint8)
        assert np.array_equal(unpack_rows(pack_rows(bits, 130), 130), bits)


class TestF2Vec:
    def test_text_and_int_forms(self):
        v = F2Vec.from_str("0101")
        assert str(v) == "0101"
        assert v.to_int() == 0b1010
        assert F2Vec.from_int(10, 4) == v
        assert v[1] == 1 and v[0] == 0

    def test_ops(self):
        a, b = F2Vec.from_str("1100"), F2Vec.from_str("1010")
        assert str(a ^ b) == "0110"
        assert str(a & b) == "1000"
        assert a.dot(b) == 1
        assert a.weight() == 2
        assert str(a.concat(b)) == "11001010"

    def test_immutable(self):
        v = F2Vec.from_str("101")
        with pytest.raises(ValueError):
            v.words[0] = 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            F2Vec.zeros(3) ^ F2Vec.zeros(4)


class TestMatMul:
    def test_identity(self):
        assert mat_mul(I2, I2) == I2

    def test_shear_squares_to_identity(self):
        assert mat_mul(SHEAR, SHEAR) == I2

    def test_swap_involution(self):
        assert mat_mul(lambda_matrix(1), lambda_matrix(1)) == I2

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            mat_mul(F2Mat.zeros(2, 3), F2Mat.zeros(2, 3))

    @pytest.mark.parametrize("seed", range(3))
    def test_matches_naive_64(self, seed):
        rng = np.random.default_rng(seed)
        a = rng.integers(0, 2, size=(64, 64), dtype=np.uint8)
        b = rng.integers(0, 2, size=(64, 64), dtype=np.uint8)
        got = mat_mul(F2Mat.from_array(a), F2Mat.from_array(b)).to_array()
        assert np.array_equal(got, naive_mul(a, b))

    def test_rectangular_across_word_boundary(self):
        rng = np.random.default_rng(5)
        a = rng.integers(0, 2, size=(9, 70), dtype=np.uint8)
        b = rng.integers(0, 2, size=(70, 131), dtype=np.uint8)
        got = (F2Mat.from_array(a) @ F2Mat.from_array(b)).to_array()
        assert np.array_equal(got, naive_mul(a, b))


class TestRowReduce:
    def test_identity_untouched(self):
        s = F2Vec.from_str("101")
        m, sg = row_reduce_signed(F2Mat.identity(3), s)
        assert m == F2Mat.identity(3) and sg == s

    def test_upper_triangular(self):
        m, sg = row_reduce_signed(SHEAR, F2Vec.from_str("10"))
        assert m == I2 and str(sg) == "10"

    def test_row_swap(self):
        m, sg = row_reduce_signed(SWAP, F2Vec.from_str("01"))
        assert m == I2 and str(sg) == "10"

    def test_does_not_mutate_input(self):
        src = F2Mat.from_array(SHEAR.to_array())
        row_reduce_signed(src, F2Vec.from_str("10"))
        assert src == SHEAR

    def test_rank_deficient_allowed(self):
        m, _ = row_reduce_signed(F2Mat.from_array([[1, 1], [1, 1]]), F2Vec.from_str("11"))
        assert m.to_array().tolist() == [[1, 1], [0, 0]]

    @settings(max_examples=50)
    @given(st.integers(1, 12), st.integers(1, 80), st.integers(0, 2**32 - 1))
    def test_idempotent_and_sign_consistent(self, rows, cols, seed):
        rng = np.random.default_rng(seed)
        a = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
        s = F2Vec.from_bits(rng.integers(0, 2, size=rows))
        m, sg = row_reduce_signed(F2Mat.from_array(a), s)
        m2, sg2 = row_reduce_signed(m, sg)
        assert m2 == m and sg2 == sg
        # reduced rows with signs stay in the row space of the signed input
        aug = np.concatenate([a, s.to_array()[:, None]], axis=1)
        red = np.concatenate([m.to_array(), sg.to_array()[:, None]], axis=1)
        r_aug = F2Mat.from_array(aug).rank()
        assert F2Mat.from_array(np.concatenate([aug, red])).rank() == r_aug
        assert m.rank() == F2Mat.from_array(a).rank()


class TestSymplectic:
    @pytest.mark.parametrize(
        "m,expected",
        [(I2, True), (lambda_matrix(1), True), (F2Mat.from_array([[1, 1], [1, 1]]), False)],
    )
    def test_check_examples(self, m, expected):
        assert symplectic_check(m) is expected

    def test_odd_dimension_rejected(self):
        with pytest.raises(ValueError):
            symplectic_check(F2Mat.identity(3))

    def test_construction_validates(self):
        with pytest.raises(SymplecticViolation):
            SymplecticMat(F2Mat.from_array([[1, 1], [1, 1]]))

    def test_n1_exhaustive(self):
        valid = [
            bits
            for bits in itertools.product((0, 1), repeat=4)
            if symplectic_check(F2Mat.from_array(np.array(bits).reshape(2, 2)))
        ]
        brute = [b for b in itertools.product((0, 1), repeat=4) if naive_symplectic(np.array(b).reshape(2, 2))]
        assert valid == brute and len(valid) == 6

    @pytest.mark.parametrize(
        "m,inv",
        [(I2, I2), (SWAP, SWAP), (SHEAR, SHEAR)],
        ids=["identity", "hadamard", "phase"],
    )
    def test_inverse_examples(self, m, inv):
        assert symplectic_inverse(SymplecticMat(m)).mat == inv

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 33, 64])
    def test_inverse_properties(self, n):
        rng = np.random.default_rng(n)
        s = random_symplectic(n, rng)
        inv = symplectic_inverse(s)
        assert (inv @ s).mat.is_identity()
        assert symplectic_inverse(inv).mat == s.mat
        assert naive_symplectic(s.mat.to_array())

    def test_group_orders(self):
        assert [symplectic_group_order(n) for n in (1, 2, 3)] == [6, 720, 1451520]

    @pytest.mark.parametrize("n", [1, 2])
    def test_index_bijection(self, n):
        mats = {symplectic_from_index(i, n).mat for i in range(symplectic_group_order(n))}
        assert len(mats) == symplectic_group_order(n)

    def test_n1_uniform(self):
        rng = np.random.default_rng(11)
        counts = Counter(random_symplectic(1, rng).mat for _ in range(6000))
        assert len(counts) == 6
        sigma = np.sqrt(6000 * (1 / 6) * (5 / 6))
        assert all(abs(c - 1000) <= 5 * sigma for c in counts.values())

    def test_n2_chi_square(self):
        rng = np.random.default_rng(12)
        draws = 720 * 20
        counts = Counter(random_symplectic(2, rng).mat for _ in range(draws))
        assert len(counts) == 720
        chi2 = sum((c - 20) ** 2 / 20 for c in counts.values())
        # 719 degrees of freedom: mean 719, sd ~38
        assert chi2 < 719 + 5 * np.sqrt(2 * 719)

    def test_blocks(self):
        a, b, c, d = SymplecticMat(SHEAR).blocks()
        assert (a.tolist(), b.tolist(), c.tolist(), d.tolist()) == ([[1]], [[0]], [[1]], [[1]])


class TestTextFormat:
    def test_round_trip_with_signs(self):
        text = "10|1\n01|0"
        m, s = parse_matrix_text(text)
        assert m == I2 and str(s) == "10"
        assert format_matrix_text(m, s) == text

    def test_without_signs(self):
        m, s = parse_matrix_text("11\n01\n")
        assert m == SHEAR and s is None
        assert format_matrix_text(m) == "11\n01"

    @pytest.mark.parametrize("bad", ["12\n01", "10\n1", "10|1\n01"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ValueError):
            parse_matrix_text(bad)
