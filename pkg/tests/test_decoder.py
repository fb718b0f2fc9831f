import itertools
import random

import pytest
from hypothesis import given, strategies as st

from qgdec.codes import AtLeast, BudgetExceeded, in_stabilizer_group
from qgdec.decoder import (
    CachedDecoder, DecodeConfig, NotCSS, SyndromeMismatch, build_ffn, coset_member, coset_minimum,
    decode, decode_css, is_logical_error, oracle_decode,
)
from qgdec.gf2 import BitMatrix, vecmat
from qgdec.pauli import PauliOperator, pauli_parse
from qgdec.syndrome import alpha_direct, measure_beta, measure_beta_tilde

from conftest import code_and_graph

SMALL = ["five_qubit", "steane", "noncss11", "noncss17", "color:3", "surface:3"]


def errors_up_to(n, w):
    for q in range(1, w + 1):
        for pos in itertools.combinations(range(n), q):
            for kinds in itertools.product("XYZ", repeat=q):
                e = PauliOperator.identity(n)
                for p, k in zip(pos, kinds):
                    e = e * PauliOperator.single(n, p, k)
                yield e


def brute_minimum(gamma, alpha):
    n = gamma.nrows
    return min((m | (vecmat(m, gamma) ^ alpha)).bit_count() for m in range(1 << n))


# --- config ---------------------------------------------------------------

def test_config_resolution():
    code, _ = code_and_graph("noncss11")
    cfg = DecodeConfig().resolve(code)
    assert cfg.T == 2 and cfg.css_fastpath is False
    assert DecodeConfig(exhaustive_mld=True).resolve(code).T == 11
    assert DecodeConfig().resolve(code_and_graph("steane")[0]).css_fastpath is True
    with pytest.raises(ValueError):
        DecodeConfig(T=12).resolve(code)
    with pytest.raises(ValueError):
        DecodeConfig(T=3, exhaustive_mld=True).resolve(code)


# --- coset members and FFN ------------------------------------------------

def test_coset_member_examples():
    _, ext = code_and_graph("five_qubit")
    alpha = 0b10010
    base = coset_member(ext.gamma, alpha, 0)
    assert base.x == 0 and base.z == alpha
    m = coset_member(ext.gamma, 0, 1 << 2)
    assert m.x == 1 << 2 and m.z == ext.gamma.rows[2]


@given(st.integers(0, 31), st.integers(0, 31))
def test_coset_member_reproduces_alpha(alpha, mu):
    _, ext = code_and_graph("five_qubit")
    member = coset_member(ext.gamma, alpha, mu)
    assert vecmat(member.x, ext.gamma) ^ member.z == alpha
    assert member.weight() >= bin(mu).count("1")


def test_ffn_examples():
    _, ext = code_and_graph("five_qubit")
    assert build_ffn(ext.gamma, 0).layers == ()
    ffn = build_ffn(ext.gamma, 1 << 3)
    assert set(ffn.layers[0]) == {3} | set(ext.neighbors(3))


def test_ffn_unreachable_node():
    # path 0-1-2, node 3 isolated
    gamma = BitMatrix.from_lists([[0, 1, 0, 0], [1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 0]])
    ffn = build_ffn(gamma, 0b0001)
    assert ffn.layer_of[3] == 0
    assert all(3 not in layer for layer in ffn.layers)


@st.composite
def graphs(draw, n_max=9):
    n = draw(st.integers(2, n_max))
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    alpha = draw(st.integers(0, (1 << n) - 1))
    return BitMatrix(n, n, tuple(rows)), alpha


@given(graphs())
def test_ffn_layer_structure(ga):
    gamma, alpha = ga
    ffn = build_ffn(gamma, alpha)
    seen = [q for layer in ffn.layers for q in layer]
    assert len(seen) == len(set(seen))
    if alpha:
        first = alpha
        for i in range(gamma.nrows):
            if (alpha >> i) & 1:
                first |= gamma.rows[i]
        assert sum(1 << q for q in ffn.layers[0]) == first
    for m in range(1, len(ffn.layers)):
        for q in ffn.layers[m]:
            # within distance two of the previous layer
            one = any((gamma.rows[q] >> p) & 1 for p in ffn.layers[m - 1])
            two = any(gamma.rows[q] & gamma.rows[p] for p in ffn.layers[m - 1])
            assert one or two


@given(graphs(n_max=8), st.integers(0, 8))
def test_coset_minimum_optimisations_sound(ga, T):
    gamma, alpha = ga
    T = min(T, gamma.nrows)
    on = coset_minimum(gamma, alpha, T, True, True)
    off = coset_minimum(gamma, alpha, T, False, False)
    assert on.weight == off.weight
    assert (on.mu | on.nu).bit_count() == on.weight
    assert vecmat(on.mu, gamma) ^ on.nu == alpha
    if T == gamma.nrows:
        assert on.weight == brute_minimum(gamma, alpha)


@pytest.mark.parametrize("name", ["five_qubit", "steane"])
def test_coset_minimum_exhaustive_at_full_bound(name):
    code, ext = code_and_graph(name)
    for alpha in range(1 << code.n):
        res = coset_minimum(ext.gamma, alpha, code.n)
        assert res.weight == brute_minimum(ext.gamma, alpha)
        assert not res.bounded


def test_coset_minimum_unit_syndromes(builtin):
    code, ext = builtin
    for i in range(code.n):
        assert coset_minimum(ext.gamma, 1 << i, code.t).weight == 1
    assert coset_minimum(ext.gamma, 0, code.t).weight == 0


@pytest.mark.parametrize("name", ["five_qubit", "steane"])
def test_ffn_containment(name):
    """Every coset member of weight w keeps its mu support inside L1..Lw."""
    code, ext = code_and_graph(name)
    n = code.n
    for alpha in range(1, 1 << n):
        layer = build_ffn(ext.gamma, alpha).layer_of
        for mu in range(1 << n):
            w = (mu | (vecmat(mu, ext.gamma) ^ alpha)).bit_count()
            assert all(0 < layer[i] <= w for i in range(n) if (mu >> i) & 1)


# --- decode ---------------------------------------------------------------

def test_trivial_syndrome(builtin):
    code, ext = builtin
    res = decode(code, ext, 0)
    assert res.correction.is_identity() and res.weight == 0 and res.branch == 0


def test_five_qubit_1001():
    code, ext = code_and_graph("five_qubit")
    res = decode(code, ext, "1001")
    assert res.weight == 1
    assert in_stabilizer_group(code, res.correction * pauli_parse("IIIZI"))


def test_five_qubit_matches_oracle_all_syndromes():
    code, ext = code_and_graph("five_qubit")
    for beta in range(16):
        res = decode(code, ext, beta, DecodeConfig(T=5))
        assert res.weight == oracle_decode(code, beta, 5).weight()


def test_steane_x_only_matches_oracle():
    code, ext = code_and_graph("steane")
    seen = {measure_beta(code, PauliOperator(7, x, 0)).bits for x in range(128)}
    for beta in seen:
        assert decode(code, ext, beta, DecodeConfig(T=7)).weight == oracle_decode(code, beta, 7).weight()


@pytest.mark.parametrize("name", SMALL + ["color:5", "noncss25"])
@given(data=st.data())
def test_result_invariants(name, data):
    code, ext = code_and_graph(name)
    beta = data.draw(st.integers(0, (1 << (code.n - code.k)) - 1))
    res = decode(code, ext, beta)
    assert measure_beta(code, res.correction).bits == beta
    assert res.weight == res.correction.weight()
    assert res.weight == min(res.branch_weights) == res.branch_weights[res.branch]
    if not code.css:
        alpha = vecmat(beta | (res.branch << (code.n - code.k)), ext.j)
        assert res.weight <= bin(alpha).count("1")


@pytest.mark.parametrize("name", SMALL)
def test_bdd_guarantee_small_weights(name):
    code, ext = code_and_graph(name)
    dec = CachedDecoder(code, ext)
    limit = 1 if code.n > 11 else min(code.t, 2)
    for e in errors_up_to(code.n, limit):
        assert not dec.is_failure(e)


@pytest.mark.parametrize("name", ["five_qubit", "steane", "noncss11", "noncss17", "surface:3", "color:5"])
def test_optimisations_do_not_change_weights(name):
    code, ext = code_and_graph(name)
    rng = random.Random(7)
    m = code.n - code.k
    for _ in range(150):
        beta = rng.getrandbits(m)
        on = decode(code, ext, beta)
        off = decode(code, ext, beta, DecodeConfig(prune=False, structured=False))
        assert on.weight == off.weight


@pytest.mark.parametrize("name", ["five_qubit", "noncss11", "steane"])
def test_monotone_in_bound(name):
    code, ext = code_and_graph(name)
    rng = random.Random(3)
    for _ in range(60):
        beta = rng.getrandbits(code.n - code.k)
        weights = [decode(code, ext, beta, DecodeConfig(T=T)).weight for T in range(code.n + 1)]
        assert all(a >= b for a, b in zip(weights, weights[1:]))


def test_bounded_flag_on_fallback():
    code, ext = code_and_graph("noncss11")
    res = decode(code, ext, (1 << 10) - 1, DecodeConfig(T=0))
    assert res.bounded
    assert measure_beta(code, res.correction).bits == (1 << 10) - 1


def test_syndrome_length_checked():
    code, ext = code_and_graph("five_qubit")
    with pytest.raises(ValueError):
        decode(code, ext, "101")
    with pytest.raises(ValueError):
        decode(code, ext, 1 << 4)


# --- CSS ------------------------------------------------------------------

def test_decode_css_rejects_non_css():
    code, ext = code_and_graph("five_qubit")
    with pytest.raises(NotCSS):
        decode_css(code, ext, 0)


def test_steane_x1_lights_one_side():
    code, ext = code_and_graph("steane")
    for kind, side in (("X", ext.right_mask), ("Z", ext.left_mask)):
        alpha = alpha_direct(ext, PauliOperator.single(7, 0, kind)).bits
        assert alpha and alpha & ~side == 0


@pytest.mark.parametrize("name", ["steane", "surface:3", "color:5"])
def test_css_weight_one_cross_check(name):
    code, ext = code_and_graph(name)
    generic = DecodeConfig(css_fastpath=False)
    for e in errors_up_to(code.n, 1):
        beta = measure_beta(code, e).bits
        a, b = decode_css(code, ext, beta), decode(code, ext, beta, generic)
        assert b.weight == 1
        # a Y flip is split into halves whose minima may sit on different qubits
        assert a.weight == 1 if (e.x == 0 or e.z == 0) else a.weight <= 2
        assert not is_logical_error(code, e, a.correction)


@pytest.mark.parametrize("name", ["steane", "surface:3"])
def test_css_single_type_syndromes_match_generic(name):
    code, ext = code_and_graph(name)
    xs = sum(1 << i for i in code.x_checks())
    zs = sum(1 << i for i in code.z_checks())
    full = DecodeConfig(T=code.n)
    for beta in range(1 << (code.n - code.k)):
        css = decode_css(code, ext, beta, full).weight
        generic = decode(code, ext, beta, DecodeConfig(T=code.n, css_fastpath=False)).weight
        assert css >= generic
        if not (beta & xs and beta & zs):
            assert css == generic


def test_css_split_loses_y_sharing_on_mixed_syndromes():
    """Decoding the halves separately cannot merge an X and a Z flip into one Y."""
    code, ext = code_and_graph("surface:3")
    full = DecodeConfig(T=9)
    diffs = sum(
        decode_css(code, ext, b, full).weight != decode(code, ext, b, DecodeConfig(T=9, css_fastpath=False)).weight
        for b in range(256)
    )
    assert diffs > 0


def test_logical_branch_skip_holds_for_z_errors_only():
    code, ext = code_and_graph("steane")
    generic = DecodeConfig(css_fastpath=False)
    for q in range(7):
        e = PauliOperator.single(7, q, "Z")
        res = decode(code, ext, measure_beta(code, e), generic)
        assert res.branch_weights[0] == res.weight
    x5 = PauliOperator.single(7, 4, "X")
    assert measure_beta_tilde(code, x5).bits == 1
    res = decode(code, ext, measure_beta(code, x5), generic)
    assert res.branch_weights == (2, 1)


# --- oracle and adjudication ----------------------------------------------

def test_oracle_examples():
    code, _ = code_and_graph("five_qubit")
    assert oracle_decode(code, 0, 3).is_identity()
    assert oracle_decode(code, "1001", 1).weight() == 1
    code11, _ = code_and_graph("noncss11")
    e = pauli_parse("IXIIIIIYIII")
    found = oracle_decode(code11, measure_beta(code11, e), 2)
    assert found.weight() <= 2 and measure_beta(code11, found) == measure_beta(code11, e)


def test_oracle_lower_bound_and_budget():
    code, _ = code_and_graph("noncss11")
    e = pauli_parse("XXXXXIIIIII")
    res = oracle_decode(code, measure_beta(code, e), 1)
    assert res == AtLeast(2) or res.weight() <= 1
    with pytest.raises(BudgetExceeded):
        oracle_decode(code, 1, 11, budget=1000)


def test_is_logical_error_examples():
    code, _ = code_and_graph("steane")
    e = pauli_parse("XIIZIII")
    assert not is_logical_error(code, e, e)
    assert is_logical_error(code, e, e * code.logical_x[0])
    assert not is_logical_error(code, e, e * code.stabilizers[0])
    with pytest.raises(SyndromeMismatch):
        is_logical_error(code, e, PauliOperator.identity(7))


def test_cached_decoder_matches_direct():
    code, ext = code_and_graph("noncss11")
    dec = CachedDecoder(code, ext)
    rng = random.Random(5)
    for _ in range(50):
        e = PauliOperator(11, rng.getrandbits(11), rng.getrandbits(11))
        direct = decode(code, ext, measure_beta(code, e))
        assert dec.is_failure(e) == is_logical_error(code, e, direct.correction)
