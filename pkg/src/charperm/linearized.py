"""Linearized (2-linear) polynomials L(x) = sum of a_i * x^(2^i).

Coefficients are stored densely at all bit positions 0..bits-1, with the
exponent convention x^(2^bits) = x.  A polynomial is q-linear exactly when
its support sits at indices divisible by m; the q_linear flag always reflects
that condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Tuple, Union

import numpy as np

from . import gf2
from .errors import NotQLinear
from .field import FieldContext


@dataclass(frozen=True)
class LinearizedPoly:
    coeffs: Tuple[int, ...]  # coeffs[i] multiplies x^(2^i)
    q_linear: bool

    def support(self) -> List[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self.coeffs)


PairsLike = Union[Dict[int, int], Iterable[Tuple[int, int]]]


def linearized(ctx: FieldContext, pairs: PairsLike = (),
               q_linear: bool | None = None) -> LinearizedPoly:
    """Build a polynomial from (index, coefficient) pairs.

    Indices are folded modulo bits (x^(2^bits) = x) and coefficients at the
    same index are added.  Passing q_linear=True asserts that the support
    lands on multiples of m.
    """
    if isinstance(pairs, dict):
        pairs = pairs.items()
    coeffs = [0] * ctx.bits
    for i, c in pairs:
        if not 0 <= c < ctx.order:
            raise ValueError(f"coefficient 0x{c:x} is not a {ctx.bits}-bit element")
        coeffs[i % ctx.bits] ^= c
    flag = all(i % ctx.m == 0 for i, c in enumerate(coeffs) if c)
    if q_linear and not flag:
        bad = [i for i, c in enumerate(coeffs) if c and i % ctx.m]
        raise NotQLinear(f"support at indices {bad} not divisible by m={ctx.m}")
    return LinearizedPoly(tuple(coeffs), flag)


def q_linearized(ctx: FieldContext, qpairs: PairsLike = ()) -> LinearizedPoly:
    """Build sum of c_j * x^(q^j) from (j, c_j) pairs."""
    if isinstance(qpairs, dict):
        qpairs = qpairs.items()
    return linearized(ctx, [((ctx.m * j) % ctx.bits, c) for j, c in qpairs],
                      q_linear=True)


def zero(ctx: FieldContext) -> LinearizedPoly:
    return linearized(ctx)


def identity(ctx: FieldContext) -> LinearizedPoly:
    return linearized(ctx, [(0, 1)])


def trace_poly(ctx: FieldContext) -> LinearizedPoly:
    """The relative trace onto F_q as a q-linear polynomial."""
    return q_linearized(ctx, [(i, 1) for i in range(ctx.n)])


def add(ctx: FieldContext, l1: LinearizedPoly, l2: LinearizedPoly) -> LinearizedPoly:
    return linearized(ctx, [(i, a ^ b) for i, (a, b) in
                            enumerate(zip(l1.coeffs, l2.coeffs))])


def evaluate(ctx: FieldContext, poly: LinearizedPoly, x: int) -> int:
    """L(x), walking the Frobenius orbit of x once."""
    r = 0
    t = x
    last = max(poly.support(), default=-1)
    for i, c in enumerate(poly.coeffs):
        if c:
            r ^= ctx.mul(c, t)
        if i >= last:
            break
        t = ctx.mul(t, t)
    return r


def evaluate_all(ctx: FieldContext, poly: LinearizedPoly) -> np.ndarray:
    """L(v) for every field element v, as an array indexed by v."""
    out = np.zeros(ctx.order, dtype=np.int64)
    for i in poly.support():
        out ^= ctx.mul_vec(poly.coeffs[i], ctx.frob_table(i))
    return out


def adjoint(ctx: FieldContext, poly: LinearizedPoly) -> LinearizedPoly:
    """The trace-dual polynomial: sum of (a_i x)^(2^-i).

    Its coefficient at index (bits - i) mod bits is frobenius(a_i, bits - i),
    and the absolute trace of u * L(v) equals that of adjoint(L)(u) * v.
    """
    pairs = []
    for i, c in enumerate(poly.coeffs):
        if c:
            j = (ctx.bits - i) % ctx.bits
            pairs.append((j, ctx.frobenius(c, j)))
    return linearized(ctx, pairs)


def compose(ctx: FieldContext, outer: LinearizedPoly,
            inner: LinearizedPoly) -> LinearizedPoly:
    """outer(inner(x)) with exponents folded modulo x^(2^bits) = x."""
    pairs = []
    for i in outer.support():
        a = outer.coeffs[i]
        for j in inner.support():
            pairs.append(((i + j) % ctx.bits,
                          ctx.mul(a, ctx.frobenius(inner.coeffs[j], i))))
    return linearized(ctx, pairs)


def to_matrix(ctx: FieldContext, poly: LinearizedPoly) -> List[int]:
    """The induced GF(2)-linear map as matrix columns; column j is the
    bit-expansion of L(x^j-basis element)."""
    return [evaluate(ctx, poly, 1 << j) for j in range(ctx.bits)]


class Kernel(NamedTuple):
    basis: Tuple[int, ...]  # GF(2)-basis of the kernel, ascending
    dim2: int               # GF(2)-dimension


def kernel(ctx: FieldContext, poly: LinearizedPoly) -> Kernel:
    """Kernel of the induced map.  Basis vectors are field elements.

    For q-linear input the kernel is an F_q-space, so dim2 must be a
    multiple of m; a violation signals an arithmetic bug.
    """
    basis = gf2.mat_kernel(to_matrix(ctx, poly))
    if poly.q_linear:
        assert len(basis) % ctx.m == 0, "q-linear kernel dimension not a multiple of m"
    return Kernel(tuple(basis), len(basis))


def parse_linearized(ctx: FieldContext, text: str) -> LinearizedPoly:
    """Parse 'index:hexcoeff' pairs separated by commas; '' is the zero map."""
    pairs = []
    text = text.strip()
    if text:
        for part in text.split(","):
            try:
                idx, coeff = part.split(":")
                pairs.append((int(idx), int(coeff, 16)))
            except ValueError:
                raise ValueError(f"bad linearized term {part!r}, expected index:hexcoeff")
    return linearized(ctx, pairs)


def format_linearized(poly: LinearizedPoly) -> str:
    return ",".join(f"{i}:{c:x}" for i, c in enumerate(poly.coeffs) if c)
