import pytest
from hypothesis import given, strategies as st

from qgdec.gf2 import (
    BitMatrix, BitVec, SingularError, format_bits, in_row_span, int_to_bits, invert, matmul,
    parse_bits, rank, solve_combination, transpose, vecmat,
)


def matrices(n_max=8, square=False):
    @st.composite
    def build(draw):
        r = draw(st.integers(1, n_max))
        c = r if square else draw(st.integers(1, n_max))
        rows = draw(st.lists(st.integers(0, (1 << c) - 1), min_size=r, max_size=r))
        return BitMatrix(r, c, tuple(rows))
    return build()


def test_bits_print_entry_zero_first():
    assert format_bits(0b0011, 4) == "1100"
    assert parse_bits("1100") == 0b0011
    assert int_to_bits(0b101, 4) == [1, 0, 1, 0]


def test_bitvec_ops():
    a, b = BitVec.from_str("1100"), BitVec.from_str("1010")
    assert str(a ^ b) == "0110"
    assert a.dot(b) == 1
    assert a.weight() == 2
    assert str(a.concat(BitVec.from_str("1"))) == "11001"
    with pytest.raises(ValueError):
        a ^ BitVec.from_str("1")


def test_identity_inverse_and_singular():
    assert invert(BitMatrix.identity(4)) == BitMatrix.identity(4)
    with pytest.raises(SingularError):
        invert(BitMatrix.from_lists([[1, 1], [1, 1]]))


@given(matrices(square=True))
def test_inverse_when_full_rank(m):
    if rank(m) < m.nrows:
        with pytest.raises(SingularError):
            invert(m)
    else:
        assert matmul(m, invert(m)) == BitMatrix.identity(m.nrows)


@given(matrices())
def test_rank_invariant_under_transpose(m):
    assert rank(m) == rank(transpose(m)) <= min(m.shape)


@given(matrices(), st.integers(0, 255))
def test_vecmat_matches_product(m, v):
    v &= (1 << m.nrows) - 1
    row = BitMatrix(1, m.nrows, (v,))
    assert vecmat(v, m) == matmul(row, m).rows[0]


@given(matrices(), st.integers(0, 255))
def test_solve_combination_reconstructs_target(m, combo):
    combo &= (1 << m.nrows) - 1
    target = vecmat(combo, m)
    sol = solve_combination(list(m.rows), target, m.ncols)
    assert sol is not None
    assert vecmat(sol, m) == target
    assert in_row_span(list(m.rows), target, m.ncols)
