"""Finite-field towers with log/antilog tables.

Every field F_{p^m} is F_p[x]/(f) for the fixed polynomial listed in
PRIMITIVE_POLYS: the lexicographically smallest monic primitive polynomial
of its degree (smallest when the non-leading coefficients are read as a
base-p integer).  Elements are integers whose base-p digits are the
polynomial coefficients, so the prime field sits inside every extension as
0..p-1.  The table constants are frozen here for bit-exact reproducibility
and re-derived by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import BudgetExceeded

MAX_TABLE_SIZE = 1 << 16

#: (p, m) -> non-leading coefficients of the monic primitive polynomial,
#: encoded base p (e.g. x^4 + x + 1 over F_2 is 0b0011 = 3)
PRIMITIVE_POLYS = {
    (2, 1): 1, (2, 2): 3, (2, 3): 3, (2, 4): 3, (2, 5): 5, (2, 6): 3,
    (2, 7): 3, (2, 8): 29, (2, 9): 17, (2, 10): 9, (2, 11): 5, (2, 12): 83,
    (2, 16): 45,
    (3, 1): 1, (3, 2): 5, (3, 3): 7, (3, 4): 5, (3, 5): 7, (3, 6): 5,
    (3, 7): 16, (3, 8): 29,
    (5, 1): 2, (5, 2): 7, (5, 3): 17, (5, 4): 37,
}

#: supported base fields: the primes 2, 3, 5 and the prime powers up to 9
SUPPORTED_BASES = (2, 3, 4, 5, 8, 9)


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mulmod(a: list[int], b: list[int], modpoly: list[int], p: int) -> list[int]:
    m = len(modpoly) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for i in range(len(prod) - 1, m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(m):
                prod[i - m + j] = (prod[i - m + j] - c * modpoly[j]) % p
    out = prod[:m]
    return out + [0] * (m - len(out))


def _is_primitive(nonlead: int, p: int, m: int) -> bool:
    order = p ** m - 1
    modpoly = _digits(nonlead, p, m) + [1]
    x = [0, 1] if m > 1 else [(-modpoly[0]) % p]

    def poly_pow(base, e):
        result = [1] + [0] * (m - 1)
        while e:
            if e & 1:
                result = _poly_mulmod(result, base, modpoly, p)
            base = _poly_mulmod(base, base, modpoly, p)
            e >>= 1
        return result

    one = [1] + [0] * (m - 1)
    if poly_pow(x, order) != one:
        return False
    return all(poly_pow(x, order // ell) != one for ell in _prime_factors(order))


def smallest_primitive_poly(p: int, m: int) -> int:
    for nonlead in range(p ** m):
        if _is_primitive(nonlead, p, m):
            return nonlead
    raise AssertionError(f"no primitive polynomial of degree {m} over F_{p}")


def _digits(n: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        out.append(n % p)
        n //= p
    return out


class GF:
    """F_{p^m} with log/antilog tables; elements are ints in [0, p^m)."""

    def __init__(self, p: int, m: int):
        size = p ** m
        if size > MAX_TABLE_SIZE:
            raise BudgetExceeded(f"field of size {size} exceeds the table budget")
        self.p = p
        self.m = m
        self.size = size
        if (p, m) not in PRIMITIVE_POLYS:
            raise KeyError(f"no fixed polynomial for F_{p}^{m}; extend the table")
        self.poly_nonlead = PRIMITIVE_POLYS[(p, m)]
        modpoly = _digits(self.poly_nonlead, p, m) + [1]
        # powers of the class of x, which is primitive by construction
        exp = np.zeros(2 * size, dtype=np.int64)
        log = np.zeros(size, dtype=np.int64)
        cur = [1] + [0] * (m - 1)
        for i in range(size - 1):
            code = sum(c * p ** j for j, c in enumerate(cur))
            exp[i] = code
            log[code] = i
            cur = _poly_mulmod(cur, [0, 1] if m > 1 else [(-modpoly[0]) % p],
                               modpoly, p)
        exp[size - 1:] = exp[np.arange(size - 1, 2 * size) % (size - 1)]
        self.exp_table = exp
        self.log_table = log
        # digit-wise addition works on digit vectors; scalar add via digits
        self._pows = np.array([p ** j for j in range(m)], dtype=np.int64)

    # -- scalar ops ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        out, mul = 0, 1
        for _ in range(self.m):
            out += ((a + b) % self.p) * mul
            a //= self.p
            b //= self.p
            mul *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        out, mul = 0, 1
        for _ in range(self.m):
            out += ((-a) % self.p) * mul
            a //= self.p
            mul *= self.p
        return out

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.exp_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return int(self.exp_table[(self.size - 1 - self.log_table[a]) % (self.size - 1)])

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self.exp_table[(self.log_table[a] * e) % (self.size - 1)])

    def scalar_int(self, a: int, c: int) -> int:
        """a times the prime-field integer c."""
        c %= self.p
        out, mul = 0, 1
        for _ in range(self.m):
            out += ((a % self.p) * c % self.p) * mul
            a //= self.p
            mul *= self.p
        return out

    def digits(self, a: int) -> list[int]:
        return _digits(a, self.p, self.m)

    def elements(self):
        return range(self.size)

    # -- vector ops (numpy int64 codes) --------------------------------
    def v_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        out[nz] = self.exp_table[self.log_table[a[nz]] + self.log_table[b[nz]]]
        return out

    def v_pow(self, a: np.ndarray, e: int) -> np.ndarray:
        if e == 0:
            return np.ones_like(a)
        out = np.zeros_like(a)
        nz = a != 0
        out[nz] = self.exp_table[(self.log_table[a[nz]] * e) % (self.size - 1)]
        return out

    def v_frobenius(self, a: np.ndarray, q: int) -> np.ndarray:
        return self.v_pow(a, q)

    def v_digits(self, a: np.ndarray) -> np.ndarray:
        """(..., m) array of base-p digits."""
        return (a[..., None] // self._pows) % self.p


@dataclass(frozen=True)
class FieldTower:
    """The extensions F_{q^k}, k <= k_max, of a base field F_q = F_{p^e},
    with consistent embeddings of the base into every level."""

    q: int
    k_max: int

    def __post_init__(self):
        p, e = _base_prime_power(self.q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "e", e)
        for k in range(1, self.k_max + 1):
            self.field(k)  # force table construction (and budget errors) now

    @lru_cache(maxsize=None)
    def field(self, k: int) -> GF:
        return GF(self.p, self.e * k)

    @lru_cache(maxsize=None)
    def base_embedding(self, k: int) -> tuple[int, ...]:
        """Images in F_{q^k} of the elements 0..q-1 of the base field, in a
        fixed order: for prime q the prime field is literal; otherwise the
        generator of F_q maps to the smallest root of its minimal polynomial."""
        fld = self.field(k)
        if self.e == 1:
            return tuple(range(self.q))
        base = self.field(1)
        minpoly = _minimal_poly_over_prime(base)
        root = next(
            a for a in range(fld.size)
            if _eval_poly(fld, minpoly, a) == 0
        )
        images = [0] * self.q
        for code in range(1, self.q):
            # decompose code in powers of the base generator
            i = int(base.log_table[code])
            images[code] = fld.pow(root, i)
        return tuple(images)

    def subfield_codes(self, j: int, k: int) -> tuple[int, ...]:
        """Elements of F_{q^j} inside F_{q^k} (j | k)."""
        if k % j:
            raise ValueError(f"{j} does not divide {k}")
        fld = self.field(k)
        step = (fld.size - 1) // (self.q ** j - 1)
        codes = {0} | {int(fld.exp_table[t * step]) for t in range(self.q ** j - 1)}
        return tuple(sorted(codes))


def _base_prime_power(q: int) -> tuple[int, int]:
    if q not in SUPPORTED_BASES:
        raise ValueError(f"q = {q} not in the supported bases {SUPPORTED_BASES}")
    for p in (2, 3, 5):
        if q % p == 0:
            e = 0
            n = q
            while n % p == 0:
                n //= p
                e += 1
            return p, e
    raise AssertionError


def _eval_poly(fld: GF, coeffs: list[int], a: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = fld.add(fld.mul(acc, a), c)
    return acc


def _minimal_poly_over_prime(base: GF) -> list[int]:
    """Minimal polynomial over F_p of the generator x of the base field:
    that is just its defining polynomial."""
    coeffs = _digits(base.poly_nonlead, base.p, base.m) + [1]
    return coeffs
