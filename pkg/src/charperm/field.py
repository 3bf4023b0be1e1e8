"""Arithmetic for the tower GF(2) <= GF(q) <= GF(q^n) with q = 2^m.

Field elements are plain ints: bit i holds the coefficient of x^i in the
residue class modulo the field modulus, so addition is xor and there are no
per-element wrapper objects.  A FieldContext fixes m, n, the modulus and the
chosen F_q-basis, and provides both scalar operations and numpy lookup tables
for whole-field sweeps.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple

import numpy as np

from . import gf2
from .errors import (
    DivisionByZero,
    InvalidModulus,
    InvalidSubfield,
    NotInSubfield,
    SizeGuard,
)

DEFAULT_SIZE_CAP = 24
DEFAULT_CHARSUM_CAP = 12


class FieldContext:
    """GF(2^bits) = GF(q^n), q = 2^m, with a distinguished F_q-basis.

    Attributes
    ----------
    m, n : tower parameters; bits = m*n
    q : 2^m
    order : 2^bits, number of field elements
    group_order : 2^bits - 1
    modulus : irreducible GF(2) polynomial of degree bits (int encoding)
    fq_basis : tuple of n elements forming an F_q-basis of the field
    size_cap : full-field enumeration refuses bits beyond this
    charsum_cap : the all-shifts character-sum test refuses bits beyond this
    """

    def __init__(self, m: int, n: int, modulus: int | None = None, *,
                 size_cap: int = DEFAULT_SIZE_CAP,
                 charsum_cap: int = DEFAULT_CHARSUM_CAP):
        if m < 1 or n < 1:
            raise InvalidModulus(f"tower degrees must be positive, got m={m} n={n}")
        bits = m * n
        if bits > size_cap:
            raise SizeGuard(f"m*n = {bits} exceeds the size cap {size_cap}")
        if modulus is None:
            modulus = gf2.irreducible_poly(bits)
        else:
            if gf2.poly_degree(modulus) != bits:
                raise InvalidModulus(
                    f"modulus 0x{modulus:x} has degree {gf2.poly_degree(modulus)}, expected {bits}")
            if not gf2.is_irreducible(modulus):
                raise InvalidModulus(f"modulus 0x{modulus:x} is reducible")
        self.m = m
        self.n = n
        self.bits = bits
        self.q = 1 << m
        self.order = 1 << bits
        self.group_order = self.order - 1
        self.modulus = modulus
        self.size_cap = size_cap
        self.charsum_cap = charsum_cap
        self._subfield_basis: dict[int, Tuple[int, ...]] = {}
        self._subfield_elements: dict[int, Tuple[int, ...]] = {}
        self._frob_tables: dict[int, np.ndarray] = {}
        self._trace_tables: dict[int, np.ndarray] = {}
        self._caches: dict[str, object] = {}
        self.fq_basis = self._build_fq_basis()

    def __repr__(self):
        return f"FieldContext(m={self.m}, n={self.n}, modulus=0x{self.modulus:x})"

    def __eq__(self, other):
        if not isinstance(other, FieldContext):
            return NotImplemented
        return (self.m, self.n, self.modulus) == (other.m, other.n, other.modulus)

    def __hash__(self):
        return hash((self.m, self.n, self.modulus))

    # ---- scalar arithmetic ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        """Product in GF(2^bits): carry-less multiply reduced by the modulus."""
        r = 0
        mod = self.modulus
        top = 1 << self.bits
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def pow(self, a: int, e: int) -> int:
        """a^e with exponents reduced modulo the group order for a != 0.

        0^0 = 1; 0^e = 0 for e > 0; negative e with a = 0 raises.
        """
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DivisionByZero("inverse of zero")
            return 0
        if self.group_order:
            e %= self.group_order
        else:
            e = 0
        r = 1
        base = a
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return self.pow(a, -1)

    def frobenius(self, a: int, k: int) -> int:
        """a^(2^k), k taken modulo bits (so negative k works)."""
        for _ in range(k % self.bits):
            a = self.mul(a, a)
        return a

    def trace_to(self, a: int, sub_m: int) -> int:
        """Relative trace onto GF(2^sub_m): sum of a^(2^(sub_m * i))."""
        self._check_subfield_degree(sub_m)
        r = 0
        t = a
        steps = self.bits // sub_m
        for i in range(steps):
            r ^= t
            if i + 1 < steps:
                for _ in range(sub_m):
                    t = self.mul(t, t)
        return r

    def norm_to(self, a: int, sub_m: int) -> int:
        """Relative norm onto GF(2^sub_m): a^((2^bits-1)/(2^sub_m-1))."""
        self._check_subfield_degree(sub_m)
        e = self.group_order // ((1 << sub_m) - 1)
        assert e * ((1 << sub_m) - 1) == self.group_order
        return self.pow(a, e)

    def chi(self, a: int) -> int:
        """Canonical additive character: (-1)^(absolute trace of a)."""
        return 1 - 2 * ((a & self.trace_mask).bit_count() & 1)

    def subfield_abs_trace(self, a: int, sub_m: int) -> int:
        """Absolute trace of GF(2^sub_m) evaluated at a subfield element a."""
        self._check_subfield_degree(sub_m)
        if self.frobenius(a, sub_m) != a:
            raise NotInSubfield(f"0x{a:x} is not in GF(2^{sub_m})")
        r = 0
        t = a
        for i in range(sub_m):
            r ^= t
            if i + 1 < sub_m:
                t = self.mul(t, t)
        return r

    def psi(self, a: int) -> int:
        """Canonical additive character of the subfield F_q, at a in F_q."""
        return 1 - 2 * (self.subfield_abs_trace(a, self.m) & 1)

    def in_subfield(self, a: int, sub_m: int) -> bool:
        self._check_subfield_degree(sub_m)
        return self.frobenius(a, sub_m) == a

    def _check_subfield_degree(self, sub_m: int):
        if sub_m < 1 or self.bits % sub_m != 0:
            raise InvalidSubfield(f"GF(2^{sub_m}) is not a subfield of GF(2^{self.bits})")

    # ---- F_q structure ----------------------------------------------------

    def subfield_basis(self, sub_m: int) -> Tuple[int, ...]:
        """GF(2)-basis of the subfield GF(2^sub_m) inside this field."""
        self._check_subfield_degree(sub_m)
        cached = self._subfield_basis.get(sub_m)
        if cached is None:
            # kernel of a |-> a^(2^sub_m) + a
            cols = [self.frobenius(1 << j, sub_m) ^ (1 << j) for j in range(self.bits)]
            basis = gf2.mat_kernel(cols)
            assert len(basis) == sub_m
            cached = tuple(basis)
            self._subfield_basis[sub_m] = cached
        return cached

    def subfield_elements(self, sub_m: int) -> Tuple[int, ...]:
        """All elements of GF(2^sub_m) inside this field, sorted ascending."""
        cached = self._subfield_elements.get(sub_m)
        if cached is None:
            basis = self.subfield_basis(sub_m)
            elems = [0]
            for b in basis:
                elems += [e ^ b for e in elems]
            cached = tuple(sorted(elems))
            self._subfield_elements[sub_m] = cached
        return cached

    def fq_linearly_independent(self, elems: Sequence[int]) -> bool:
        """True iff the elements are linearly independent over F_q.

        GF(2)-rank test on the t*m vectors s_j * e_i, where the s_j run over
        a GF(2)-basis of F_q.
        """
        elems = list(elems)
        if len(elems) * self.m > self.bits:
            return False
        sub = self.subfield_basis(self.m)
        vecs = [self.mul(s, e) for e in elems for s in sub]
        return gf2.mat_rank(vecs) == len(vecs)

    def fq_coordinates(self, a: int) -> Tuple[int, ...]:
        """Coordinates of a over fq_basis: n subfield elements v_i with
        sum of v_i * basis_i equal to a."""
        inv_cols = self._caches.get("coord_inv")
        if inv_cols is None:
            sub = self.subfield_basis(self.m)
            cols = [self.mul(s, b) for b in self.fq_basis for s in sub]
            inv_cols = gf2.mat_invert(cols, self.bits)
            self._caches["coord_inv"] = inv_cols
        y = gf2.mat_apply(inv_cols, a)
        sub = self.subfield_basis(self.m)
        coords = []
        for i in range(self.n):
            c = 0
            for j in range(self.m):
                if y >> (i * self.m + j) & 1:
                    c ^= sub[j]
            coords.append(c)
        return tuple(coords)

    def _build_fq_basis(self) -> Tuple[int, ...]:
        if self.n == 1:
            return (1,)
        g = 0b10
        basis = self._power_basis(g)
        if basis is not None:
            return basis
        # the residue of x always generates the field over GF(2), so this
        # scan is a safety net rather than an expected path
        for g in range(3, self.order):
            basis = self._power_basis(g)
            if basis is not None:
                return basis
        raise AssertionError("no power basis found")

    def _power_basis(self, g: int) -> Tuple[int, ...] | None:
        powers = [1]
        for _ in range(self.n - 1):
            powers.append(self.mul(powers[-1], g))
        if self.fq_linearly_independent(powers):
            return tuple(powers)
        return None

    # ---- lookup tables and vector ops ------------------------------------

    @property
    def trace_mask(self) -> int:
        mask = self._caches.get("trace_mask")
        if mask is None:
            mask = 0
            for i in range(self.bits):
                if self.trace_to(1 << i, 1) & 1:
                    mask |= 1 << i
            self._caches["trace_mask"] = mask
        return mask

    @property
    def generator(self) -> int:
        """Smallest generator of the multiplicative group."""
        g = self._caches.get("generator")
        if g is None:
            go = self.group_order
            if go == 1:
                g = 1
            else:
                primes = gf2._prime_factors(go)
                g = 2
                while any(self.pow(g, go // p) == 1 for p in primes):
                    g += 1
            self._caches["generator"] = g
        return g

    @property
    def elements(self) -> np.ndarray:
        arr = self._caches.get("elements")
        if arr is None:
            arr = np.arange(self.order, dtype=np.int64)
            self._caches["elements"] = arr
        return arr

    @property
    def exp_table(self) -> np.ndarray:
        """Doubled power table: exp_table[i] = g^i for 0 <= i < 2*(order-1)."""
        arr = self._caches.get("exp")
        if arr is None:
            go = max(self.group_order, 1)
            half = np.empty(go, dtype=np.int64)
            t = 1
            for i in range(go):
                half[i] = t
                t = self.mul(t, self.generator)
            arr = np.concatenate([half, half])
            self._caches["exp"] = arr
        return arr

    @property
    def log_table(self) -> np.ndarray:
        arr = self._caches.get("log")
        if arr is None:
            arr = np.zeros(self.order, dtype=np.int64)
            go = max(self.group_order, 1)
            arr[self.exp_table[:go]] = np.arange(go, dtype=np.int64)
            self._caches["log"] = arr
        return arr

    @property
    def chi_table(self) -> np.ndarray:
        arr = self._caches.get("chi")
        if arr is None:
            t = self.elements & self.trace_mask
            t = _parity_vec(t, self.bits)
            arr = (1 - 2 * t).astype(np.int8)
            self._caches["chi"] = arr
        return arr

    @property
    def sqr_table(self) -> np.ndarray:
        return self.frob_table(1)

    def frob_table(self, k: int) -> np.ndarray:
        """Permutation array v |-> v^(2^k) over all elements."""
        k %= self.bits
        arr = self._frob_tables.get(k)
        if arr is None:
            if k == 0:
                arr = self.elements.copy()
            elif k == 1:
                arr = np.fromiter((self.mul(v, v) for v in range(self.order)),
                                  dtype=np.int64, count=self.order)
            else:
                arr = self.frob_table(k - 1)[self.frob_table(1)]
            self._frob_tables[k] = arr
        return arr

    def trace_table(self, sub_m: int) -> np.ndarray:
        """trace_to(v, sub_m) for every element v."""
        self._check_subfield_degree(sub_m)
        arr = self._trace_tables.get(sub_m)
        if arr is None:
            arr = np.zeros(self.order, dtype=np.int64)
            for i in range(self.bits // sub_m):
                arr ^= self.frob_table((sub_m * i) % self.bits)
            self._trace_tables[sub_m] = arr
        return arr

    def subfield_mask(self, sub_m: int) -> np.ndarray:
        """Boolean array: which elements lie in GF(2^sub_m)."""
        key = f"submask{sub_m}"
        arr = self._caches.get(key)
        if arr is None:
            arr = self.frob_table(sub_m % self.bits) == self.elements
            self._caches[key] = arr
        return arr

    def mul_vec(self, a: int, arr: np.ndarray) -> np.ndarray:
        """Scalar times vector, elementwise over field elements."""
        if a == 0:
            return np.zeros_like(arr)
        la = int(self.log_table[a])
        out = np.zeros_like(arr)
        nz = arr != 0
        out[nz] = self.exp_table[la + self.log_table[arr[nz]]]
        return out

    def mul_elementwise(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        nz = (x != 0) & (y != 0)
        out[nz] = self.exp_table[self.log_table[np.broadcast_to(x, out.shape)[nz]]
                                 + self.log_table[np.broadcast_to(y, out.shape)[nz]]]
        return out

    def pow_vec(self, arr: np.ndarray, e: int) -> np.ndarray:
        """Elementwise arr^e with the same conventions as pow()."""
        if e == 0:
            return np.ones_like(arr)
        go = max(self.group_order, 1)
        if e < 0 and np.any(arr == 0):
            raise DivisionByZero("inverse of zero")
        er = e % go
        out = np.zeros_like(arr)
        nz = arr != 0
        out[nz] = self.exp_table[(self.log_table[arr[nz]] * er) % go]
        return out

    @property
    def chi_index_table(self) -> np.ndarray:
        """For each u, the GF(2) functional index s such that the absolute
        trace of u*w equals the bit parity of s & w for all w."""
        arr = self._caches.get("chi_index")
        if arr is None:
            basis_masks = []
            for j in range(self.bits):
                s = 0
                for i in range(self.bits):
                    if self.trace_to(self.mul(1 << j, 1 << i), 1) & 1:
                        s |= 1 << i
                basis_masks.append(s)
            arr = np.zeros(self.order, dtype=np.int64)
            for j, s in enumerate(basis_masks):
                arr ^= ((self.elements >> j) & 1) * s
            self._caches["chi_index"] = arr
        return arr


def _parity_vec(t: np.ndarray, bits: int) -> np.ndarray:
    t = t.copy()
    shift = 1
    while shift < bits:
        t ^= t >> shift
        shift <<= 1
    return t & 1


def build_context(m: int, n: int, modulus: int | None = None, *,
                  size_cap: int = DEFAULT_SIZE_CAP,
                  charsum_cap: int = DEFAULT_CHARSUM_CAP) -> FieldContext:
    """Construct the field GF((2^m)^n) with a validated or default modulus."""
    return FieldContext(m, n, modulus, size_cap=size_cap, charsum_cap=charsum_cap)


def walsh_hadamard(vec: Iterable[int] | np.ndarray) -> np.ndarray:
    """In-order Walsh-Hadamard transform of a length-2^k integer vector."""
    v = np.asarray(vec, dtype=np.int64).copy()
    size = v.size
    assert size & (size - 1) == 0
    h = 1
    while h < size:
        v = v.reshape(-1, 2, h)
        a = v[:, 0, :].copy()
        b = v[:, 1, :].copy()
        v[:, 0, :] = a + b
        v[:, 1, :] = a - b
        v = v.reshape(size)
        h *= 2
    return v
