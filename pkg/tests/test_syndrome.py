import itertools

import pytest
from hypothesis import given, strategies as st

from qgdec.gf2 import BitVec
from qgdec.pauli import PauliOperator, pauli_parse
from qgdec.syndrome import (
    SyndromeTable, alpha_direct, alpha_from_gamma, measure_beta, measure_beta_tilde, syndromes,
)

from conftest import BUILTINS, code_and_graph


def test_five_qubit_example_syndromes():
    code, _ = code_and_graph("five_qubit")
    assert str(measure_beta(code, pauli_parse("IIIZI"))) == "1001"
    assert str(measure_beta(code, pauli_parse("IIIIX"))) == "0011"


def test_identity_has_trivial_syndromes(builtin):
    code, ext = builtin
    s = syndromes(code, ext, PauliOperator.identity(code.n))
    assert s.gamma.weight() == 0 and s.alpha.weight() == 0


def test_logical_z_flips_no_logical_syndrome(builtin):
    code, _ = builtin
    assert measure_beta_tilde(code, code.logical_z[0]).weight() == 0
    assert measure_beta_tilde(code, code.logical_x[0]).weight() == 1


@pytest.mark.parametrize("name", ["five_qubit", "steane", "noncss11", "surface:3"])
def test_cross_path_all_weight_two(name):
    code, ext = code_and_graph(name)
    n = code.n
    singles = [PauliOperator.single(n, q, k) for q in range(n) for k in "XYZ"]
    for a, b in itertools.combinations_with_replacement(singles, 2):
        e = a * b
        assert syndromes(code, ext, e).alpha == alpha_direct(ext, e)


@pytest.mark.parametrize("name", BUILTINS)
@given(data=st.data())
def test_cross_path_random(name, data):
    code, ext = code_and_graph(name)
    n = code.n
    e = PauliOperator(n, data.draw(st.integers(0, (1 << n) - 1)), data.draw(st.integers(0, (1 << n) - 1)))
    assert syndromes(code, ext, e).alpha == alpha_direct(ext, e)


@pytest.mark.parametrize("name", ["noncss25", "color:5"])
@given(data=st.data())
def test_syndrome_table_matches_direct(name, data):
    code, _ = code_and_graph(name)
    n = code.n
    e = PauliOperator(n, data.draw(st.integers(0, (1 << n) - 1)), data.draw(st.integers(0, (1 << n) - 1)))
    assert SyndromeTable(code).beta_bits(e) == measure_beta(code, e).bits


def test_gamma_length_checked():
    _, ext = code_and_graph("steane")
    with pytest.raises(ValueError):
        alpha_from_gamma(ext, BitVec(6, 0))


def test_css_error_types_light_one_side():
    code, ext = code_and_graph("steane")
    for q in range(7):
        for kind, mask in (("Z", ext.left_mask), ("X", ext.right_mask)):
            e = PauliOperator.single(7, q, kind)
            alpha = alpha_direct(ext, e).bits
            beta_tilde = measure_beta_tilde(code, e).bits
            if beta_tilde == 0:
                assert alpha & ~mask == 0
            if kind == "Z":
                assert alpha & ~mask == 0
