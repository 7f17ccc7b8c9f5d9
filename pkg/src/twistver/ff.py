"""Exact arithmetic in GF(p^m) with Frobenius maps and subfield tests.

Conventions
-----------
An element with coefficient vector (c_0, ..., c_{m-1}) over F_p, where c_i
multiplies x^i in the residue ring F_p[x]/(modulus), is encoded as the
integer sum(c_i * p**i).  Zero is 0, one is 1; for m = 1 the encoding is
the usual residue mod p.

The defining modulus is the lexicographically smallest monic irreducible
polynomial of degree m over F_p, comparing coefficient tuples
(a_{m-1}, ..., a_1, a_0) in ascending order.  The choice is deterministic
and table-free.  Cross-field embeddings are out of scope (subfield
membership is decided by x^{q'} = x), so Conway-style compatibility is not
needed.

Two arithmetic modes are kept in sync and tested against each other:

* polynomial mode: coefficient-vector arithmetic, always available;
* table mode: discrete log / antilog tables over the smallest primitive
  element, built automatically for orders <= TABLE_AUTO_MAX and on request
  up to TABLE_HARD_MAX.

Fields of order <= PAIR_TABLE_MAX additionally carry full pairwise
operation tables (numpy), so bulk row operations in the linear-algebra
layer reduce to single fancy-index gathers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

DEFAULT_MAX_ORDER = 1 << 20  # largest p^m accepted by default
TABLE_AUTO_MAX = 1 << 12     # log/antilog tables built automatically below this
TABLE_HARD_MAX = 1 << 20     # ... and on explicit request up to this
PAIR_TABLE_MAX = 1 << 10     # full pairwise numpy tables below this


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomials over F_p: coefficient lists, ascending powers, trailing zeros
# trimmed ([] is the zero polynomial).
# ---------------------------------------------------------------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_add(a: list[int], b: list[int], p: int) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = a[:]
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        ai = a[i] if i < len(a) else 0
        bi = b[i] if i < len(b) else 0
        out[i] = (ai - bi) % p
    return _trim(out)


def poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(out)


def poly_rem(a: list[int], mod: list[int], p: int) -> list[int]:
    """Remainder of a modulo a monic polynomial."""
    a = a[:]
    dm = len(mod) - 1
    while len(a) - 1 >= dm and a:
        lead = a[-1]
        shift = len(a) - 1 - dm
        if lead:
            for i, c in enumerate(mod):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return _trim(a)


def poly_powmod(a: list[int], k: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = poly_rem(a, mod, p)
    while k:
        if k & 1:
            result = poly_rem(poly_mul(result, base, p), mod, p)
        base = poly_rem(poly_mul(base, base, p), mod, p)
        k >>= 1
    return result


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        # make b monic before reducing, so poly_rem applies
        inv = pow(b[-1], p - 2, p)
        bm = [(c * inv) % p for c in b]
        a, b = b, poly_rem(a, bm, p)
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial of degree >= 1 over F_p."""
    m = len(f) - 1
    if m < 1:
        return False
    x = [0, 1]
    xr = poly_rem(x, f, p)
    # x^(p^m) == x mod f
    if poly_sub(poly_powmod(x, p ** m, f, p), xr, p):
        return False
    for r in prime_factors(m):
        h = poly_sub(poly_powmod(x, p ** (m // r), f, p), xr, p)
        g = poly_gcd(f, h, p)
        if len(g) - 1 != 0:
            return False
    return True


def lex_smallest_irreducible(p: int, m: int) -> list[int]:
    """First monic irreducible of degree m over F_p, scanning coefficient
    tuples (a_{m-1}, ..., a_1, a_0) in ascending lexicographic order."""
    for k in range(p ** m):
        low = []
        kk = k
        for _ in range(m):
            low.append(kk % p)
            kk //= p
        f = low + [1]
        if is_irreducible(f, p):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


@dataclass(frozen=True)
class FieldTables:
    """Pairwise numpy operation tables for a small field.

    All arrays are indexed by the integer element encoding.  `exp` has
    length order-1 (exp[i] = g^i); `log[0]` is a sentinel 0 and must never
    be consulted for the zero element.
    """

    exp: np.ndarray
    log: np.ndarray
    add: np.ndarray
    sub: np.ndarray
    neg: np.ndarray
    mul: np.ndarray
    div: np.ndarray
    inv: np.ndarray


class Field:
    """The field GF(p^m), optionally viewed as F_{q^t} with q = p^e.

    The (e, t) split only labels the field for reporting and for
    power-of-q automorphism input; arithmetic depends on p and m alone.
    """

    def __init__(self, p: int, m: int, e: int = 1,
                 tables: Optional[bool] = None,
                 max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree m = {m} must be >= 1")
        if e < 1 or m % e:
            raise ValueError(f"e = {e} does not divide m = {m}")
        order = p ** m
        if order > max_order:
            raise ValueError(
                f"p^m = {order} exceeds the configured bound {max_order}")
        self.p = p
        self.m = m
        self.e = e
        self.t = m // e
        self.q = p ** e
        self.order = order
        self.modulus: tuple[int, ...] = tuple(lex_smallest_irreducible(p, m))

        self._exp: Optional[np.ndarray] = None
        self._log: Optional[np.ndarray] = None
        self._tables: Optional[FieldTables] = None
        self.generator: Optional[int] = None

        if tables is None:
            tables = order <= TABLE_AUTO_MAX
        if tables:
            if order > TABLE_HARD_MAX:
                raise ValueError(
                    f"table mode supports p^m <= {TABLE_HARD_MAX}, got {order}")
            self._build_log_tables()
            if order <= PAIR_TABLE_MAX:
                self._build_pair_tables()

    # -- encoding ----------------------------------------------------------

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        """Coefficient vector (c_0, ..., c_{m-1}) of an element."""
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + c % self.p
        return a

    def elements(self) -> range:
        return range(self.order)

    def check_element(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element encoding of GF({self.order})")
        return a

    # -- polynomial-mode arithmetic (always available) ----------------------

    def add_poly(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        pw = 1
        while a or b:
            out += ((a % p + b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def sub_poly(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        pw = 1
        while a or b:
            out += ((a % p - b % p) % p) * pw
            a //= p
            b //= p
            pw *= p
        return out

    def mul_poly(self, a: int, b: int) -> int:
        prod = poly_mul(list(self.to_coeffs(a)), list(self.to_coeffs(b)), self.p)
        return self.from_coeffs(poly_rem(prod, list(self.modulus), self.p) + [0] * self.m)

    # -- public arithmetic (table-accelerated when available) ----------------

    def add(self, a: int, b: int) -> int:
        if self._tables is not None:
            return int(self._tables.add[a, b])
        return self.add_poly(a, b)

    def sub(self, a: int, b: int) -> int:
        if self._tables is not None:
            return int(self._tables.sub[a, b])
        return self.sub_poly(a, b)

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        if self._exp is not None:
            if a == 0 or b == 0:
                return 0
            n = self.order - 1
            return int(self._exp[(int(self._log[a]) + int(self._log[b])) % n])
        return self.mul_poly(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        if self._exp is not None:
            n = self.order - 1
            return int(self._exp[(-int(self._log[a])) % n])
        return self.pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero")
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if a == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            n = self.order - 1
            return int(self._exp[(int(self._log[a]) * k) % n])
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul_poly(result, base)
            base = self.mul_poly(base, base)
            k >>= 1
        return result

    def frobenius(self, a: int, s: int) -> int:
        """a^(p^s), the s-th power of the absolute Frobenius."""
        if not 0 <= s < self.m:
            raise ValueError(f"Frobenius exponent s = {s} out of range [0, {self.m})")
        if s == 0:
            return a
        return self.pow(a, self.p ** s)

    # -- subfields -----------------------------------------------------------

    def subfield_orders(self) -> list[int]:
        return [self.p ** s for s in range(1, self.m + 1) if self.m % s == 0]

    def subfield_elements(self, q_sub: int) -> list[int]:
        """All solutions of x^{q_sub} = x, i.e. the subfield of that order."""
        if q_sub not in self.subfield_orders():
            raise ValueError(
                f"{q_sub} is not a subfield order of GF({self.order})")
        return [x for x in self.elements() if self.pow(x, q_sub) == x]

    # -- tables ---------------------------------------------------------------

    def _find_generator(self) -> int:
        n = self.order - 1
        if n == 1:
            return 1
        factors = prime_factors(n)
        for g in range(2, self.order):
            if all(self._pow_raw(g, n // r) != 1 for r in factors):
                return g
        raise RuntimeError("no primitive element found")  # unreachable

    def _pow_raw(self, a: int, k: int) -> int:
        # square-and-multiply through polynomial mode only (used before tables exist)
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul_poly(result, base)
            base = self.mul_poly(base, base)
            k >>= 1
        return result

    def _build_log_tables(self) -> None:
        n = self.order - 1
        g = self._find_generator()
        self.generator = g
        exp = np.zeros(max(n, 1), dtype=np.int32)
        log = np.zeros(self.order, dtype=np.int64)
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self.mul_poly(x, g)
        if n == 0:
            exp[0] = 1
        self._exp = exp
        self._log = log

    def _build_pair_tables(self) -> None:
        order, p, m = self.order, self.p, self.m
        n = order - 1
        idx = np.arange(order, dtype=np.int64)
        # base-p digit matrix, shape (order, m)
        digits = np.empty((order, m), dtype=np.int64)
        rem = idx.copy()
        for i in range(m):
            digits[:, i] = rem % p
            rem //= p
        weights = p ** np.arange(m, dtype=np.int64)

        def recompose(dg):
            return (dg * weights).sum(axis=-1)

        add = recompose((digits[:, None, :] + digits[None, :, :]) % p)
        sub = recompose((digits[:, None, :] - digits[None, :, :]) % p)
        neg = recompose((-digits) % p)

        log, exp = self._log, self._exp
        if n > 0:
            mul = exp[(log[:, None] + log[None, :]) % n].astype(np.int64)
            mul[0, :] = 0
            mul[:, 0] = 0
            div = exp[(log[:, None] - log[None, :]) % n].astype(np.int64)
            div[0, :] = 0
            div[:, 0] = 0  # poisoned: division by zero is rejected upstream
            invv = exp[(-log) % n].astype(np.int64)
            invv[0] = 0
        else:
            mul = np.zeros((order, order), dtype=np.int64)
            mul[1, 1] = 1
            div = mul.copy()
            invv = np.array([0, 1], dtype=np.int64)

        dt = np.int16 if order <= (1 << 14) else np.int32
        self._tables = FieldTables(
            exp=self._exp.astype(dt),
            log=self._log.astype(np.int32),
            add=add.astype(dt), sub=sub.astype(dt), neg=neg.astype(dt),
            mul=mul.astype(dt), div=div.astype(dt), inv=invv.astype(dt),
        )

    @property
    def tables(self) -> Optional[FieldTables]:
        return self._tables

    # -- reporting -------------------------------------------------------------

    def describe(self) -> dict:
        return {"p": self.p, "e": self.e, "t": self.t,
                "modulus": list(self.modulus)}

    def modulus_str(self) -> str:
        terms = []
        for i in range(self.m, -1, -1):
            c = self.modulus[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "x" if i == 1 else f"x^{i}"
                terms.append(x if c == 1 else f"{c}{x}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"Field(p={self.p}, m={self.m}, e={self.e})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Field)
                and (self.p, self.m, self.e) == (other.p, other.m, other.e))

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.e))


def build_field(p: int, m: int, **kwargs) -> Field:
    """GF(p^m) with the deterministic lex-smallest modulus."""
    return Field(p, m, **kwargs)
