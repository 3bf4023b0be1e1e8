"""Linearized polynomials: evaluation, adjoint, composition, kernels."""

import random

import numpy as np
import pytest

from charperm import linearized as lin


def _random_poly(ctx, rng, step=1):
    pairs = [(i, rng.randrange(ctx.order)) for i in range(0, ctx.bits, step)]
    return lin.linearized(ctx, pairs)


def test_factory_validates_coefficients(gf8):
    with pytest.raises(ValueError):
        lin.linearized(gf8, [(0, 8)])
    with pytest.raises(ValueError):
        lin.linearized(gf8, [(0, -1)])


def test_factory_folds_indices(gf8):
    # x^(2^3) = x on GF(8), so index 3 folds onto index 0
    p = lin.linearized(gf8, [(3, 5)])
    assert p.coeffs[0] == 5
    q = lin.linearized(gf8, [(0, 5), (3, 5)])
    assert q.is_zero()


def test_q_linear_flag_detection(gf64_tower):
    ctx = gf64_tower
    assert lin.linearized(ctx, [(0, 3), (2, 1)]).q_linear
    assert not lin.linearized(ctx, [(1, 1)]).q_linear
    assert lin.q_linearized(ctx, [(1, 7)]).coeffs[2] == 7


def test_evaluate_is_additive(gf16):
    rng = random.Random(3)
    p = _random_poly(gf16, rng)
    for x in range(16):
        for y in range(16):
            assert lin.evaluate(gf16, p, x ^ y) == (
                lin.evaluate(gf16, p, x) ^ lin.evaluate(gf16, p, y))


def test_evaluate_all_matches_scalar(gf64_tower):
    rng = random.Random(4)
    for _ in range(10):
        p = _random_poly(gf64_tower, rng)
        table = lin.evaluate_all(gf64_tower, p)
        for x in (0, 1, 9, 0x3f):
            assert int(table[x]) == lin.evaluate(gf64_tower, p, x)


def test_q_linearized_commutes_with_subfield_scalars(gf64_tower):
    ctx = gf64_tower
    rng = random.Random(5)
    p = lin.q_linearized(ctx, [(i, rng.randrange(64)) for i in range(3)])
    for c in ctx.subfield_elements(2):
        for x in (1, 5, 0x2a):
            assert lin.evaluate(ctx, p, ctx.mul(c, x)) == ctx.mul(
                c, lin.evaluate(ctx, p, x))


def test_adjoint_duality_exhaustive(gf16_tower):
    # Tr2(u L(v)) == Tr2(L'(u) v) for all u, v
    ctx = gf16_tower
    rng = random.Random(6)
    for _ in range(12):
        p = _random_poly(ctx, rng)
        adj = lin.adjoint(ctx, p)
        for u in range(16):
            for v in range(16):
                lhs = ctx.trace_to(ctx.mul(u, lin.evaluate(ctx, p, v)), 1)
                rhs = ctx.trace_to(ctx.mul(lin.evaluate(ctx, adj, u), v), 1)
                assert lhs == rhs


def test_adjoint_involution(gf16):
    rng = random.Random(7)
    for _ in range(20):
        p = _random_poly(gf16, rng)
        assert lin.adjoint(gf16, lin.adjoint(gf16, p)) == p


def test_adjoint_preserves_q_linearity(gf64_tower):
    p = lin.q_linearized(gf64_tower, [(1, 0x21), (2, 3)])
    assert lin.adjoint(gf64_tower, p).q_linear


def test_adjoint_antihomomorphism(gf16):
    # (f o g)' = g' o f'
    rng = random.Random(8)
    for _ in range(10):
        f = _random_poly(gf16, rng)
        g = _random_poly(gf16, rng)
        left = lin.adjoint(gf16, lin.compose(gf16, f, g))
        right = lin.compose(gf16, lin.adjoint(gf16, g), lin.adjoint(gf16, f))
        assert left == right


def test_compose_matches_pointwise(gf16):
    rng = random.Random(9)
    for _ in range(10):
        f = _random_poly(gf16, rng)
        g = _random_poly(gf16, rng)
        h = lin.compose(gf16, f, g)
        for x in range(16):
            assert lin.evaluate(gf16, h, x) == lin.evaluate(
                gf16, f, lin.evaluate(gf16, g, x))


def test_to_matrix_matches_evaluate(gf16):
    rng = random.Random(10)
    from charperm import gf2
    for _ in range(10):
        p = _random_poly(gf16, rng)
        cols = lin.to_matrix(gf16, p)
        for x in range(16):
            assert gf2.mat_apply(cols, x) == lin.evaluate(gf16, p, x)


def test_kernel_identity_and_zero(gf16):
    assert lin.kernel(gf16, lin.identity(gf16)).dim2 == 0
    k = lin.kernel(gf16, lin.zero(gf16))
    assert k.dim2 == 4
    assert len(k.basis) == 4


def test_kernel_members_and_dimension(gf16):
    rng = random.Random(11)
    for _ in range(20):
        p = _random_poly(gf16, rng)
        k = lin.kernel(gf16, p)
        hit = sum(1 for x in range(16) if lin.evaluate(gf16, p, x) == 0)
        assert hit == 1 << k.dim2
        for b in k.basis:
            assert lin.evaluate(gf16, p, b) == 0


def test_trace_poly_kernel(gf64_tower):
    # the relative trace maps onto F_q, so its kernel has F_2-dimension m(n-1)
    ctx = gf64_tower
    t = lin.trace_poly(ctx)
    assert t.q_linear
    k = lin.kernel(ctx, t)
    assert k.dim2 == 2 * (3 - 1)
    for x in range(64):
        assert lin.evaluate(ctx, t, x) == ctx.trace_to(x, 2)


def test_q_kernel_dimension_multiple_of_m(gf64_tower):
    # kernel of an F_q-linear map is an F_q-subspace
    ctx = gf64_tower
    rng = random.Random(12)
    for _ in range(20):
        p = lin.q_linearized(ctx, [(i, rng.randrange(64)) for i in range(3)])
        assert lin.kernel(ctx, p).dim2 % 2 == 0


def test_add(gf16):
    rng = random.Random(13)
    f = _random_poly(gf16, rng)
    g = _random_poly(gf16, rng)
    s = lin.add(gf16, f, g)
    for x in range(16):
        assert lin.evaluate(gf16, s, x) == (
            lin.evaluate(gf16, f, x) ^ lin.evaluate(gf16, g, x))


def test_parse_format_roundtrip(gf64_tower):
    ctx = gf64_tower
    for text in ("", "0:1", "0:3a,2:1f", "1:2,5:3f"):
        p = lin.parse_linearized(ctx, text)
        assert lin.parse_linearized(ctx, lin.format_linearized(p)) == p


def test_parse_rejects_garbage(gf64_tower):
    for bad in ("0", "0:zz", "x:1", "0:1:2"):
        with pytest.raises(ValueError):
            lin.parse_linearized(gf64_tower, bad)


def test_support_and_is_zero(gf8):
    p = lin.linearized(gf8, [(0, 1), (2, 3)])
    assert p.support() == [0, 2]
    assert not p.is_zero()
    assert lin.zero(gf8).is_zero()


def test_evaluate_all_only_zero_map_vanishes(gf16):
    # folded coefficients mean the zero value table forces the zero poly
    rng = random.Random(14)
    for _ in range(30):
        p = _random_poly(gf16, rng)
        table = lin.evaluate_all(gf16, p)
        if not np.any(table):
            assert p.is_zero()
