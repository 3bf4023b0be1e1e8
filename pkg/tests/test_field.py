"""Field contexts: scalar arithmetic, subfields, characters, tables."""

import numpy as np
import pytest

from charperm import (
    DivisionByZero,
    InvalidModulus,
    InvalidSubfield,
    NotInSubfield,
    SizeGuard,
    build_context,
    walsh_hadamard,
)

OMEGA = 0b10  # generator of GF(4) with modulus x^2 + x + 1


def test_default_moduli():
    assert build_context(1, 2).modulus == 0b111
    assert build_context(1, 3).modulus == 0b1011
    assert build_context(1, 4).modulus == 0b10011
    assert build_context(2, 3).modulus == 0x43


def test_bad_modulus():
    with pytest.raises(InvalidModulus):
        build_context(1, 2, 0b110)       # reducible
    with pytest.raises(InvalidModulus):
        build_context(1, 2, 0b1011)      # wrong degree
    with pytest.raises(InvalidModulus):
        build_context(1, 3, 0b111)


def test_size_guard_on_build():
    with pytest.raises(SizeGuard):
        build_context(1, 30)
    # raising the cap admits the field; scalar arithmetic needs no tables
    ctx = build_context(1, 30, size_cap=30)
    assert ctx.bits == 30
    a = 3
    assert ctx.mul(a, ctx.inv(a)) == 1
    assert ctx.frobenius(ctx.frobenius(a, 15), 15) == a


def test_gf4_frozen_values(gf4):
    w = OMEGA
    assert gf4.mul(w, w) == 0b11            # w^2 = w + 1
    assert gf4.pow(w, 3) == 1
    assert gf4.inv(w) == 0b11
    assert gf4.trace_to(w, 1) == 1
    assert gf4.norm_to(w, 1) == 1
    assert gf4.chi(0) == 1
    assert gf4.chi(1) == 1
    assert gf4.chi(w) == -1
    assert gf4.chi(0b11) == -1


def test_add_is_xor(gf8):
    for a in range(8):
        for b in range(8):
            assert gf8.add(a, b) == a ^ b


def test_mul_group(gf8):
    # nonzero elements form a cyclic group of order 7
    for a in range(1, 8):
        assert gf8.pow(a, 7) == 1
        assert gf8.mul(a, gf8.inv(a)) == 1
    with pytest.raises(DivisionByZero):
        gf8.inv(0)
    with pytest.raises(DivisionByZero):
        gf8.pow(0, -1)
    assert gf8.pow(0, 5) == 0
    assert gf8.pow(3, 0) == 1


def test_frobenius_is_field_automorphism(gf64_tower):
    ctx = gf64_tower
    for a in (0, 1, 5, 0x3a, 0x21):
        for b in (1, 2, 0x3b, 0x1f):
            assert ctx.frobenius(ctx.mul(a, b), 2) == ctx.mul(
                ctx.frobenius(a, 2), ctx.frobenius(b, 2))
            assert ctx.frobenius(a ^ b, 3) == ctx.frobenius(a, 3) ^ ctx.frobenius(b, 3)
    # order of Frobenius divides the extension degree
    for a in range(64):
        assert ctx.frobenius(a, 6) == a


def test_trace_norm_land_in_subfield(gf64_tower):
    ctx = gf64_tower
    for a in range(64):
        assert ctx.in_subfield(ctx.trace_to(a, 2), 2)
        assert ctx.in_subfield(ctx.norm_to(a, 2), 2)
    # trace is F_q-linear, norm is multiplicative
    for a in (3, 0x17, 0x3a):
        for b in (1, 9, 0x2c):
            assert ctx.trace_to(a ^ b, 2) == ctx.trace_to(a, 2) ^ ctx.trace_to(b, 2)
            assert ctx.norm_to(ctx.mul(a, b), 2) == ctx.mul(
                ctx.norm_to(a, 2), ctx.norm_to(b, 2))


def test_trace_transitivity(gf64_tower):
    # Tr to GF(2) factors through Tr to GF(4)
    ctx = gf64_tower
    for a in range(64):
        inner = ctx.trace_to(a, 2)
        assert ctx.trace_to(a, 1) == ctx.subfield_abs_trace(inner, 2)


def test_subfield_structure(gf64_tower):
    ctx = gf64_tower
    sub = ctx.subfield_elements(2)
    assert len(sub) == 4
    assert 0 in sub and 1 in sub
    for a in sub:
        for b in sub:
            assert ctx.mul(a, b) in sub
            assert (a ^ b) in sub
    with pytest.raises(InvalidSubfield):
        ctx.subfield_elements(4)


def test_subfield_basis_and_coordinates(gf64_tower):
    ctx = gf64_tower
    basis = ctx.fq_basis
    assert len(basis) == 3
    for a in (0, 1, 0x15, 0x3f):
        coords = ctx.fq_coordinates(a)
        acc = 0
        for c, b in zip(coords, basis):
            assert ctx.in_subfield(c, 2)
            acc ^= ctx.mul(c, b)
        assert acc == a


def test_fq_linear_independence(gf64_tower):
    ctx = gf64_tower
    assert ctx.fq_linearly_independent([1, ctx.generator])
    w = ctx.subfield_elements(2)[2]
    assert not ctx.fq_linearly_independent([1, w])


def test_psi_and_subfield_trace(gf64_tower):
    ctx = gf64_tower
    for a in ctx.subfield_elements(2):
        assert ctx.psi(a) in (-1, 1)
        assert ctx.psi(a) == (-1) ** ctx.subfield_abs_trace(a, 2)
    with pytest.raises(NotInSubfield):
        ctx.psi(ctx.generator)


def test_chi_sums_to_zero(gf16):
    # a nontrivial character sums to zero over the group
    assert sum(gf16.chi(a) for a in range(16)) == 0
    assert int(gf16.chi_table.sum()) == 0


def test_tables_match_scalars(gf64_tower):
    ctx = gf64_tower
    els = ctx.elements
    assert els.shape == (64,)
    for a in (0, 1, 7, 0x3a):
        np.testing.assert_array_equal(
            ctx.mul_vec(a, els), np.array([ctx.mul(a, v) for v in range(64)]))
    np.testing.assert_array_equal(
        ctx.frob_table(2), np.array([ctx.frobenius(v, 2) for v in range(64)]))
    np.testing.assert_array_equal(
        ctx.trace_table(2), np.array([ctx.trace_to(v, 2) for v in range(64)]))
    np.testing.assert_array_equal(
        ctx.chi_table, np.array([ctx.chi(v) for v in range(64)]))
    np.testing.assert_array_equal(
        ctx.sqr_table, np.array([ctx.mul(v, v) for v in range(64)]))


def test_pow_vec(gf16):
    ctx = gf16
    els = ctx.elements
    np.testing.assert_array_equal(
        ctx.pow_vec(els, 3), np.array([ctx.pow(v, 3) for v in range(16)]))
    np.testing.assert_array_equal(ctx.pow_vec(els, 0), np.ones(16, dtype=els.dtype))
    with pytest.raises(DivisionByZero):
        ctx.pow_vec(els, -2)
    nz = els[1:]
    np.testing.assert_array_equal(
        ctx.pow_vec(nz, -2), np.array([ctx.pow(v, -2) for v in range(1, 16)]))


def test_exp_log_consistency(gf8):
    ctx = gf8
    g = ctx.generator
    for e in range(7):
        v = ctx.pow(g, e)
        assert ctx.log_table[v] == e
    assert ctx.exp_table[3] == ctx.pow(g, 3)


def test_generator_has_full_order(gf64_tower):
    ctx = gf64_tower
    g = ctx.generator
    seen = set()
    x = 1
    for _ in range(63):
        seen.add(x)
        x = ctx.mul(x, g)
    assert len(seen) == 63


def test_walsh_hadamard_matches_direct():
    rng = np.random.default_rng(5)
    vec = rng.integers(-3, 4, size=16)
    out = walsh_hadamard(vec)
    for s in range(16):
        direct = sum(
            int(vec[w]) * ((-1) ** bin(s & w).count("1")) for w in range(16))
        assert out[s] == direct


def test_chi_index_table_routes_sums(gf8):
    # row u of the transformed histogram equals sum_v chi(u * f(v))
    ctx = gf8
    values = ctx.pow_vec(ctx.elements, 6)  # f(v) = v^6, not a permutation
    hist = np.bincount(values, minlength=ctx.order)
    spectrum = walsh_hadamard(hist)
    sums = spectrum[ctx.chi_index_table]
    for u in range(8):
        direct = sum(ctx.chi(ctx.mul(u, int(values[v]))) for v in range(8))
        assert sums[u] == direct
