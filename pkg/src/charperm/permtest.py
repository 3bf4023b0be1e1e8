"""Permutation tests over GF(2^(m*n)).

Three independent routes decide whether a polynomial map permutes the field:
occupancy of the full value table, vanishing of every nontrivial character
sum (all shifts at once via a Walsh-Hadamard transform), and closed-form
criteria for maps assembled from 2-linear or q-linear parts and the relative
trace.  The closed-form tests never fall back to brute force; agreement
between routes is asserted in the test suite, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from . import linearized as lin
from .charsum import s_fast
from .errors import BadParameters, NotQLinear, SizeGuard, UnknownTheorem, WrongDegree
from .field import FieldContext, walsh_hadamard

Witness = Union[int, Tuple[int, int]]


# ---- sparse polynomials ----------------------------------------------------

@dataclass(frozen=True)
class MonomialPoly:
    """Sum of coeff * x^exp terms, exponents folded into 1..2^bits-1.

    Terms are (coeff, exp) pairs sorted by exponent.  Constant terms are not
    representable; every map here fixes 0 anyway.
    """

    terms: Tuple[Tuple[int, int], ...]

    def is_zero(self) -> bool:
        return not self.terms


def monomial(ctx: FieldContext, terms: Iterable[Tuple[int, int]]) -> MonomialPoly:
    """Build a MonomialPoly from (coeff, exponent) pairs.

    Exponents are reduced by x^(2^bits) = x on every element: e maps to
    ((e-1) mod (2^bits-1)) + 1.  Duplicate exponents merge by xor; zero
    coefficients drop out.
    """
    folded: Dict[int, int] = {}
    for c, e in terms:
        if e <= 0:
            raise BadParameters(f"exponent {e} must be positive")
        if not 0 <= c < ctx.order:
            raise ValueError(f"coefficient 0x{c:x} is not a {ctx.bits}-bit element")
        if ctx.group_order > 1:
            e = (e - 1) % ctx.group_order + 1
        else:
            e = 1
        folded[e] = folded.get(e, 0) ^ c
    kept = sorted((e, c) for e, c in folded.items() if c)
    return MonomialPoly(tuple((c, e) for e, c in kept))


def from_linearized(ctx: FieldContext, poly: lin.LinearizedPoly) -> MonomialPoly:
    return monomial(ctx, [(poly.coeffs[i], 1 << i) for i in poly.support()])


def evaluate_poly(ctx: FieldContext, poly: MonomialPoly, x: int) -> int:
    r = 0
    for c, e in poly.terms:
        r ^= ctx.mul(c, ctx.pow(x, e))
    return r


def evaluate_poly_all(ctx: FieldContext, poly: MonomialPoly) -> np.ndarray:
    """Value table of poly on every field element, in element order."""
    acc = np.zeros(ctx.order, dtype=np.int64)
    for c, e in poly.terms:
        acc ^= ctx.mul_vec(c, ctx.pow_vec(ctx.elements, e))
    return acc


def parse_monomial(ctx: FieldContext, text: str) -> MonomialPoly:
    """Parse 'exp:hexcoeff' terms, comma separated.  '' is the zero polynomial."""
    terms = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            exp_s, coeff_s = part.split(":")
            e = int(exp_s, 10)
            c = int(coeff_s, 16)
        except ValueError as exc:
            raise ValueError(f"bad monomial term {part!r}") from exc
        terms.append((c, e))
    return monomial(ctx, terms)


def format_monomial(poly: MonomialPoly) -> str:
    return ",".join(f"{e}:{c:x}" for c, e in poly.terms)


# ---- permutation reports ---------------------------------------------------

@dataclass(frozen=True)
class PermReport:
    """Outcome of a permutation test.

    witness is a colliding input pair for the occupancy route and the first
    shift u (by integer encoding) with a nonzero character sum otherwise;
    it is present only when is_permutation is false.
    """

    is_permutation: bool
    method: str
    witness: Optional[Witness] = None


def report_from_values(ctx: FieldContext, values: np.ndarray,
                       method: str = "bruteforce") -> PermReport:
    """Occupancy check of a full value table; witness = first collision."""
    values = np.asarray(values)
    if values.size != ctx.order:
        raise BadParameters(
            f"value table has {values.size} entries, expected {ctx.order}")
    counts = np.bincount(values, minlength=ctx.order)
    if int(counts.max()) <= 1:
        return PermReport(True, method)
    first_idx = np.full(ctx.order, -1, dtype=np.int64)
    uniq, idx = np.unique(values, return_index=True)
    first_idx[uniq] = idx
    dup = first_idx[values] != np.arange(ctx.order)
    v2 = int(np.argmax(dup))
    v1 = int(first_idx[values[v2]])
    return PermReport(False, method, (v1, v2))


def _values_of(ctx: FieldContext, f) -> np.ndarray:
    if isinstance(f, lin.LinearizedPoly):
        return lin.evaluate_all(ctx, f)
    return evaluate_poly_all(ctx, f)


def is_perm_bruteforce(ctx: FieldContext, f) -> PermReport:
    """Ground truth: evaluate f everywhere and check the image is everything.

    Accepts a MonomialPoly or a LinearizedPoly.
    """
    if ctx.bits > ctx.size_cap:
        raise SizeGuard(f"{ctx.bits}-bit field exceeds the size cap {ctx.size_cap}")
    return report_from_values(ctx, _values_of(ctx, f))


def charsum_for_shift(ctx: FieldContext, f, u: int) -> int:
    """Direct sum of chi(u * f(v)) over all v; the per-shift re-check."""
    values = _values_of(ctx, f)
    return int(ctx.chi_table[ctx.mul_vec(u, values)].sum(dtype=np.int64))


def is_perm_charsum(ctx: FieldContext, f) -> PermReport:
    """Character-sum permutation test.

    f permutes the field iff sum_v chi(u*f(v)) = 0 for every u != 0.  The
    histogram of values is Walsh-Hadamard transformed once, and the sum for
    shift u is the spectrum entry at the functional index of u under the
    trace pairing.  Quadratic cost in the field size, hence the tighter cap.
    """
    if ctx.bits > ctx.charsum_cap:
        raise SizeGuard(
            f"{ctx.bits}-bit field exceeds the character-sum cap {ctx.charsum_cap}")
    values = _values_of(ctx, f)
    hist = np.bincount(values, minlength=ctx.order)
    spectrum = walsh_hadamard(hist)
    sums = spectrum[ctx.chi_index_table]
    bad = sums != 0
    bad[0] = False  # u = 0 always sums to the field order
    if not bad.any():
        return PermReport(True, "charsum")
    return PermReport(False, "charsum", int(np.argmax(bad)))


# ---- quadratic family: f(x) = sum_i L_i(x^(q^i+1)) -------------------------

@dataclass(frozen=True)
class QuadFamilySpec:
    """Map x -> sum over i of L_i(x^(q^i+1)) with 2-linear parts L_i.

    parts has exactly n entries; entry i multiplies the power x^(q^i+1).
    """

    parts: Tuple[lin.LinearizedPoly, ...]


def quad_family(ctx: FieldContext,
                parts: Union[Mapping[int, lin.LinearizedPoly],
                             Sequence[lin.LinearizedPoly]]) -> QuadFamilySpec:
    """Normalize parts (sequence of n polys, or index -> poly) to a spec."""
    if isinstance(parts, Mapping):
        filled = [lin.zero(ctx)] * ctx.n
        for i, p in parts.items():
            if not 0 <= i < ctx.n:
                raise BadParameters(f"part index {i} outside 0..{ctx.n - 1}")
            filled[i] = p
        parts = filled
    parts = tuple(parts)
    if len(parts) != ctx.n:
        raise BadParameters(f"expected {ctx.n} parts, got {len(parts)}")
    for p in parts:
        if len(p.coeffs) != ctx.bits:
            raise BadParameters("part does not match this field")
    return QuadFamilySpec(parts)


def evaluate_quadspec(ctx: FieldContext, spec: QuadFamilySpec, x: int) -> int:
    r = 0
    for i, part in enumerate(spec.parts):
        r ^= lin.evaluate(ctx, part, ctx.pow(x, (1 << (ctx.m * i)) + 1))
    return r


def expand_quadspec(ctx: FieldContext, spec: QuadFamilySpec) -> MonomialPoly:
    """spec as a plain polynomial: L_i contributes c_j * x^(2^j*(q^i+1))."""
    terms = []
    for i, part in enumerate(spec.parts):
        base = (1 << (ctx.m * i)) + 1
        for j in part.support():
            terms.append((part.coeffs[j], (1 << j) * base))
    return monomial(ctx, terms)


def reduction_at_shift(ctx: FieldContext, spec: QuadFamilySpec,
                       u: int) -> lin.LinearizedPoly:
    """The q-linear polynomial whose character sum is sum_v chi(u*f(v)).

    Its coefficient at x^(q^i) is the adjoint of L_i evaluated at u, so the
    whole family question reduces to quadratic-form sums.
    """
    pairs = [(i, lin.evaluate(ctx, lin.adjoint(ctx, part), u))
             for i, part in enumerate(spec.parts)]
    return lin.q_linearized(ctx, pairs)


def is_perm_quadspec(ctx: FieldContext, spec: QuadFamilySpec) -> PermReport:
    """Decide permutation status via the reduction to quadratic-form sums.

    For each shift u != 0 the character sum of u*f equals S of a q-linear
    polynomial with coefficients adjoint(L_i)(u); f permutes the field iff
    that S vanishes for every such u.  Witness = first u with S != 0.
    """
    if ctx.bits > ctx.size_cap:
        raise SizeGuard(f"{ctx.bits}-bit field exceeds the size cap {ctx.size_cap}")
    adj_tables = [lin.evaluate_all(ctx, lin.adjoint(ctx, part))
                  for part in spec.parts]
    for u in range(1, ctx.order):
        ell = lin.q_linearized(ctx, [(i, int(t[u])) for i, t in enumerate(adj_tables)])
        if s_fast(ctx, ell, resolve_sign=False).s_value != 0:
            return PermReport(False, "quadspec", u)
    return PermReport(True, "quadspec")


# ---- closed-form criteria --------------------------------------------------

def perm_quad_ext(ctx: FieldContext, l0: lin.LinearizedPoly,
                  l1: lin.LinearizedPoly) -> bool:
    """Quadratic extension case: is L1(x^(q+1)) + L0(x^2) a permutation?

    Requires n = 2.  Holds iff L1 composed with x^q + x is the zero map and
    L0 has trivial kernel.
    """
    if ctx.n != 2:
        raise WrongDegree(f"needs a degree-2 extension, got n={ctx.n}")
    inner = lin.linearized(ctx, [(ctx.m, 1), (0, 1)])
    comp = lin.compose(ctx, l1, inner)
    if any(lin.to_matrix(ctx, comp)):
        return False
    return lin.kernel(ctx, l0).dim2 == 0


def gold_poly(ctx: FieldContext, k: int, l0: lin.LinearizedPoly) -> MonomialPoly:
    """x^(q^k+1) + L0(x^2) as a plain polynomial."""
    terms = [(1, (1 << (ctx.m * k)) + 1)]
    for j in l0.support():
        terms.append((l0.coeffs[j], 1 << (j + 1)))
    return monomial(ctx, terms)


def perm_gold_linearized(ctx: FieldContext, k: int,
                         l0: lin.LinearizedPoly) -> bool:
    """Odd-degree case: is x^(q^k+1) + L0(x^2) a permutation?

    Requires n odd, 0 < 2k < n, gcd(k, n) = 1; L0 may be any 2-linear
    polynomial.  Holds iff the relative trace of adjoint(L0)(u^(q^k+1)) *
    u^-2 avoids 1 for every u != 0.
    """
    if ctx.n % 2 == 0 or not 0 < 2 * k < ctx.n or math.gcd(k, ctx.n) != 1:
        raise BadParameters(
            f"needs n odd, 0 < 2k < n and gcd(k, n) = 1, got n={ctx.n} k={k}")
    adj = lin.evaluate_all(ctx, lin.adjoint(ctx, l0))
    u = ctx.elements[1:]
    t = adj[ctx.pow_vec(u, (1 << (ctx.m * k)) + 1)]
    prod = ctx.mul_elementwise(t, ctx.pow_vec(u, -2))
    return bool(np.all(ctx.trace_table(ctx.m)[prod] != 1))


@dataclass(frozen=True)
class TraceFormSpec:
    """Map x -> L0(x^(2^shift)) + L1(x) * Tr(x) with q-linear L0, L1.

    Tr is the relative trace onto F_q; shift is a nonnegative integer.
    """

    l0: lin.LinearizedPoly
    l1: lin.LinearizedPoly
    shift: int


def trace_form_spec(ctx: FieldContext, l0: lin.LinearizedPoly,
                    l1: lin.LinearizedPoly, shift: int) -> TraceFormSpec:
    if shift < 0:
        raise BadParameters(f"shift must be nonnegative, got {shift}")
    for p in (l0, l1):
        if not p.q_linear:
            raise NotQLinear("trace-form parts must be q-linear")
    return TraceFormSpec(l0, l1, shift)


def evaluate_traceform(ctx: FieldContext, spec: TraceFormSpec, x: int) -> int:
    r = lin.evaluate(ctx, spec.l0, ctx.frobenius(x, spec.shift))
    return r ^ ctx.mul(lin.evaluate(ctx, spec.l1, x), ctx.trace_to(x, ctx.m))


def expand_traceform(ctx: FieldContext, spec: TraceFormSpec) -> MonomialPoly:
    """spec as a plain polynomial.

    L0(x^(2^shift)) shifts each 2-power exponent; the product L1(x)*Tr(x)
    multiplies out to exponents 2^j + q^i.
    """
    terms = [(spec.l0.coeffs[i], 1 << (i + spec.shift)) for i in spec.l0.support()]
    for j in spec.l1.support():
        for i in range(ctx.n):
            terms.append((spec.l1.coeffs[j], (1 << j) + (1 << (ctx.m * i))))
    return monomial(ctx, terms)


def perm_trace_form(ctx: FieldContext, spec: TraceFormSpec) -> bool:
    """Does L0(x^(2^shift)) + L1(x)*Tr(x) permute the field?

    Holds iff for every u != 0, with X = adjoint(L1)(u) and Y = adjoint(L0)(u):
    either X lies in F_q and Y^2 + X^(2^shift) != 0, or {1, Y, X^(2^shift)}
    is linearly independent over F_q.
    """
    x_tab = lin.evaluate_all(ctx, lin.adjoint(ctx, spec.l1))
    y_tab = lin.evaluate_all(ctx, lin.adjoint(ctx, spec.l0))
    xl = ctx.frob_table(spec.shift)[x_tab]
    in_fq = ctx.subfield_mask(ctx.m)
    branch1 = in_fq[x_tab] & ((ctx.frob_table(1)[y_tab] ^ xl) != 0)
    # {1, Y, XL} is dependent over F_q iff some projective combination
    # c2*Y + c3*XL lands in F_q; q+1 classes cover all of them
    dep = np.zeros(ctx.order, dtype=bool)
    for c in ctx.subfield_elements(ctx.m):
        dep |= in_fq[y_tab ^ ctx.mul_vec(c, xl)]
    dep |= in_fq[xl]
    ok = branch1 | ~dep
    return bool(np.all(ok[1:]))


def monomial_trace_poly(ctx: FieldContext, a: int, k: int,
                        shift: int) -> MonomialPoly:
    """a * x^(2^shift * q^k) + x * Tr(x) as a plain polynomial."""
    terms = [(a, (1 << shift) * (1 << (ctx.m * k)))]
    terms += [(1, 1 + (1 << (ctx.m * i))) for i in range(ctx.n)]
    return monomial(ctx, terms)


def perm_monomial_trace(ctx: FieldContext, a: int, k: int, shift: int) -> bool:
    """Does a * x^(2^shift * q^k) + x * Tr(x) permute the field?

    Closed form: n odd, gcd(2^(shift + m*k) - 1, (q^n-1)/(q-1)) = 1, and a
    a nonzero subfield element with a^((q-1)/(2^d-1)) != 1 for
    d = gcd(|shift - 1|, m).
    """
    if k < 0 or shift < 0:
        raise BadParameters(f"k and shift must be nonnegative, got k={k} shift={shift}")
    if ctx.n % 2 == 0:
        return False
    if math.gcd((1 << (shift + ctx.m * k)) - 1,
                ctx.group_order // (ctx.q - 1)) != 1:
        return False
    if a == 0 or not ctx.in_subfield(a, ctx.m):
        return False
    d = math.gcd(abs(shift - 1), ctx.m)
    return ctx.pow(a, (ctx.q - 1) // ((1 << d) - 1)) != 1


# ---- named families --------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """A named coefficient family with a printed permutation condition.

    exact means the condition is equivalent to permutation status; otherwise
    it is sufficient only.  predicate and polynomial both take (ctx, params).
    """

    name: str
    exact: bool
    params: Tuple[str, ...]
    summary: str
    predicate: Callable[[FieldContext, Mapping[str, int]], bool]
    polynomial: Callable[[FieldContext, Mapping[str, int]], MonomialPoly]


def _need_n(ctx: FieldContext, n: int, family: str):
    if ctx.n != n:
        raise BadParameters(f"family {family} needs n = {n}, got n={ctx.n}")


def _tu_predicate(ctx, params):
    a = params["a"]
    _need_n(ctx, 3, "tu")
    return a != 0 and ctx.in_subfield(a, ctx.m)


def _tu_polynomial(ctx, params):
    _need_n(ctx, 3, "tu")
    q = ctx.q
    return monomial(ctx, [(1, q * q + 1), (1, q + 1), (params["a"], 1)])


def _abnorm_predicate(ctx, params):
    a, b = params["a"], params["b"]
    _need_n(ctx, 3, "abnorm")
    return ctx.norm_to(a, ctx.m) ^ ctx.norm_to(b, ctx.m) == ctx.mul(a, b)


def _abnorm_polynomial(ctx, params):
    _need_n(ctx, 3, "abnorm")
    q = ctx.q
    return monomial(ctx, [(1, q + 1), (params["a"], 2 * q), (params["b"], 2)])


def _q4_check(ctx: FieldContext):
    if ctx.m != 2:
        raise BadParameters(f"family q4 needs m = 2, got m={ctx.m}")
    if ctx.n % 2 == 0 or ctx.n < 3:
        raise BadParameters(f"family q4 needs odd n >= 3, got n={ctx.n}")


def _q4_variant(params) -> str:
    variant = params.get("variant", "binomial")
    if variant not in ("binomial", "qk"):
        raise BadParameters(f"unknown q4 variant {variant!r}")
    return variant


def _q4_predicate(ctx, params):
    _q4_check(ctx)
    _q4_variant(params)
    t = ctx.pow(params["a"], (1 << ctx.n) - 1)
    return ctx.in_subfield(t, 2) and t not in (0, 1)


def _q4_polynomial(ctx, params):
    _q4_check(ctx)
    a = params["a"]
    if _q4_variant(params) == "binomial":
        return monomial(ctx, [(1, (1 << ctx.n) + 2), (a, 1)])
    k = (ctx.n - 1) // 2
    q = ctx.q
    return monomial(ctx, [(1, q ** k + 1), (a, 2 * q ** (ctx.n - 1))])


def _trform_check(ctx: FieldContext, params):
    a, k = params["a"], params["k"]
    if a == 0:
        raise BadParameters("family trform needs a != 0")
    if not 0 < k < ctx.n or math.gcd(k, ctx.n) != 1:
        raise BadParameters(
            f"family trform needs 0 < k < n with gcd(k, n) = 1, got k={k} n={ctx.n}")
    return a, k


def _trform_predicate(ctx, params):
    a, _ = _trform_check(ctx, params)
    if ctx.trace_to(ctx.inv(a), ctx.m) == 0:
        return False
    na = ctx.norm_to(a, ctx.m)
    return all(ctx.norm_to(a ^ c, ctx.m) != na
               for c in ctx.subfield_elements(ctx.m)[1:])


def _trform_polynomial(ctx, params):
    a, k = _trform_check(ctx, params)
    l0 = lin.q_linearized(ctx, [(ctx.n - k, ctx.frobenius(a, ctx.m * (ctx.n - k))),
                                (0, a)])
    spec = trace_form_spec(ctx, l0, lin.identity(ctx), 0)
    return expand_traceform(ctx, spec)


def _aqk_check(ctx: FieldContext, params):
    a, k = params["a"], params["k"]
    if a == 0:
        raise BadParameters("family aqk needs a != 0")
    if not 0 < k < ctx.n or math.gcd(k, ctx.n) != 1:
        raise BadParameters(
            f"family aqk needs 0 < k < n with gcd(k, n) = 1, got k={k} n={ctx.n}")
    return a, k


def _aqk_predicate(ctx, params):
    a, _ = _aqk_check(ctx, params)
    return (ctx.in_subfield(a, ctx.m) and ctx.n % 2 == 1
            and math.gcd(ctx.n, ctx.q - 1) == 1)


def _aqk_polynomial(ctx, params):
    a, k = _aqk_check(ctx, params)
    l0 = lin.q_linearized(ctx, [(k, a), (0, a)])
    spec = trace_form_spec(ctx, l0, lin.identity(ctx), 0)
    return expand_traceform(ctx, spec)


FAMILIES: Dict[str, Family] = {
    "tu": Family(
        "tu", False, ("a",),
        "x^(q^2+1) + x^(q+1) + a*x over a cubic extension; permutes for "
        "nonzero a in F_q",
        _tu_predicate, _tu_polynomial),
    "abnorm": Family(
        "abnorm", True, ("a", "b"),
        "x^(q+1) + a*x^(2q) + b*x^2 over a cubic extension; permutes iff "
        "N(a) + N(b) = a*b",
        _abnorm_predicate, _abnorm_polynomial),
    "q4": Family(
        "q4", False, ("a", "variant"),
        "x^(2^n+2) + a*x (or x^(q^k+1) + a*x^(2q^(n-1))) over F_4 towers of "
        "odd degree; permutes when a^(2^n-1) lies in F_4 but not F_2",
        _q4_predicate, _q4_polynomial),
    "trform": Family(
        "trform", True, ("a", "k"),
        "(a*x)^(q^(n-k)) + a*x + x*Tr(x); permutes iff Tr(1/a) != 0 and "
        "N(a+c) != N(a) for every nonzero c in F_q",
        _trform_predicate, _trform_polynomial),
    "aqk": Family(
        "aqk", True, ("a", "k"),
        "a*x^(q^k) + a*x + x*Tr(x); permutes iff a is a nonzero subfield "
        "element, n is odd and gcd(n, q-1) = 1",
        _aqk_predicate, _aqk_polynomial),
}


_OPTIONAL_PARAMS = frozenset({"variant"})


def _get_family(family: str, params: Mapping[str, int]) -> Family:
    info = FAMILIES.get(family)
    if info is None:
        raise UnknownTheorem(f"unknown family {family!r}")
    missing = [p for p in info.params
               if p not in params and p not in _OPTIONAL_PARAMS]
    if missing:
        raise BadParameters(f"family {family} needs parameters {missing}")
    return info


def family_predicate(ctx: FieldContext, family: str,
                     params: Mapping[str, int]) -> bool:
    """Evaluate the printed permutation condition for a named family."""
    return _get_family(family, params).predicate(ctx, params)


def family_polynomial(ctx: FieldContext, family: str,
                      params: Mapping[str, int]) -> MonomialPoly:
    """The actual polynomial a named family describes, for oracle checks."""
    return _get_family(family, params).polynomial(ctx, params)
