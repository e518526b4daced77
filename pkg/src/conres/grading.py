"""Graded modules and Poincaré polynomials over exact coefficients.

A GradedModule records, per degree, a free rank and a list of torsion
summands (prime, exponent, multiplicity).  Rational-mode modules carry no
torsion.  Degrees may be negative: the auxiliary pages of the final-column
computation have cells at q = -1, and every consumer here must cope.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NegativeDegree, NotDivisible

RATIONAL = "rational"
INTEGRAL = "integral"

# torsion summand Z_{p^e} with multiplicity m, stored as (p, e, m)
Torsion = tuple[int, int, int]


def _normalize_torsion(torsion) -> tuple[Torsion, ...]:
    """Sort and merge torsion summands; drop zero multiplicities."""
    acc: dict[tuple[int, int], int] = {}
    for (p, e, m) in torsion:
        if m == 0:
            continue
        if p < 2 or e < 1 or m < 0:
            raise ValueError(f"bad torsion summand {(p, e, m)}")
        acc[(p, e)] = acc.get((p, e), 0) + m
    return tuple((p, e, m) for (p, e), m in sorted(acc.items()))


@dataclass(frozen=True)
class GradedModule:
    """Finitely supported graded abelian group / Q-vector space."""

    entries: dict[int, tuple[int, tuple[Torsion, ...]]] = field(default_factory=dict)
    mode: str = RATIONAL

    def __post_init__(self):
        clean = {}
        for deg, (rank, torsion) in self.entries.items():
            torsion = _normalize_torsion(torsion)
            if rank < 0:
                raise ValueError(f"negative rank at degree {deg}")
            if self.mode == RATIONAL and torsion:
                raise ValueError("torsion in rational mode")
            if rank or torsion:
                clean[int(deg)] = (int(rank), torsion)
        object.__setattr__(self, "entries", clean)

    # -- constructors -------------------------------------------------
    @staticmethod
    def from_ranks(ranks: dict[int, int], mode: str = RATIONAL) -> "GradedModule":
        return GradedModule({d: (r, ()) for d, r in ranks.items()}, mode)

    @staticmethod
    def zero(mode: str = RATIONAL) -> "GradedModule":
        return GradedModule({}, mode)

    @staticmethod
    def unit(mode: str = RATIONAL) -> "GradedModule":
        """Rank one in degree zero."""
        return GradedModule({0: (1, ())}, mode)

    # -- accessors ----------------------------------------------------
    def rank(self, deg: int) -> int:
        return self.entries.get(deg, (0, ()))[0]

    def torsion(self, deg: int) -> tuple[Torsion, ...]:
        return self.entries.get(deg, (0, ()))[1]

    def ranks(self) -> dict[int, int]:
        return {d: r for d, (r, _) in self.entries.items() if r}

    def degrees(self):
        return sorted(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def has_torsion(self) -> bool:
        return any(t for _, (_, t) in self.entries.items())

    def total_rank(self) -> int:
        return sum(r for r, _ in self.entries.values())

    def euler(self) -> int:
        """Alternating sum of free ranks (torsion does not contribute)."""
        return sum((-1) ** d * r for d, (r, _) in self.entries.items())

    def min_degree(self):
        return min(self.entries) if self.entries else None

    # -- algebra ------------------------------------------------------
    def shift(self, n: int) -> "GradedModule":
        return GradedModule({d + n: v for d, v in self.entries.items()}, self.mode)

    def reflect(self, dim: int) -> "GradedModule":
        """Degree i -> dim - i (Poincaré duality reflection of ranks)."""
        return GradedModule({dim - d: v for d, v in self.entries.items()}, self.mode)

    def __add__(self, other: "GradedModule") -> "GradedModule":
        mode = INTEGRAL if INTEGRAL in (self.mode, other.mode) else RATIONAL
        out: dict[int, tuple[int, tuple[Torsion, ...]]] = {}
        for src in (self, other):
            for d, (r, t) in src.entries.items():
                r0, t0 = out.get(d, (0, ()))
                out[d] = (r0 + r, t0 + t)
        return GradedModule(out, mode)

    def tensor(self, other: "GradedModule") -> "GradedModule":
        """Graded convolution (Künneth).  Torsion is supported only when the
        other factor is torsion-free, which covers every integral case here."""
        if self.has_torsion() and other.has_torsion():
            raise ValueError("tensor of two torsion-carrying modules unsupported")
        mode = INTEGRAL if INTEGRAL in (self.mode, other.mode) else RATIONAL
        out: dict[int, list] = {}
        for d1, (r1, t1) in self.entries.items():
            for d2, (r2, t2) in other.entries.items():
                d = d1 + d2
                r0, t0 = out.get(d, (0, []))
                tor = list(t0)
                for (p, e, m) in t1:
                    tor.append((p, e, m * r2))
                for (p, e, m) in t2:
                    tor.append((p, e, m * r1))
                out[d] = (r0 + r1 * r2, tor)
        return GradedModule({d: (r, tuple(t)) for d, (r, t) in out.items()}, mode)

    def rationalize(self) -> "GradedModule":
        return GradedModule.from_ranks(self.ranks(), RATIONAL)

    def describe(self, symbol=None) -> str:
        """Human-readable listing, e.g. 'Z at 5, Z+Z_2 at 7'."""
        if self.is_zero():
            return "0"
        sym = symbol or ("Z" if self.mode == INTEGRAL else "Q")
        parts = []
        for d in self.degrees():
            r, tor = self.entries[d]
            terms = []
            if r:
                terms.append(sym if r == 1 else f"{sym}^{r}")
            for (p, e, m) in tor:
                name = f"{sym}_{p ** e}"
                terms.append(name if m == 1 else f"{name}^{m}")
            parts.append(f"{'+'.join(terms)} at {d}")
        return ", ".join(parts)


@dataclass(frozen=True)
class PoincarePolynomial:
    """Polynomial in t with non-negative integer coefficients, trailing
    zeros trimmed."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self):
        coeffs = list(self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if any(c < 0 for c in coeffs):
            raise ValueError("negative coefficient in Poincaré polynomial")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in coeffs))

    @staticmethod
    def from_dict(d: dict[int, int]) -> "PoincarePolynomial":
        if not d:
            return PoincarePolynomial(())
        deg = max(d)
        return PoincarePolynomial(tuple(d.get(i, 0) for i in range(deg + 1)))

    @staticmethod
    def one() -> "PoincarePolynomial":
        return PoincarePolynomial((1,))

    def coefficient(self, i: int) -> int:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else 0

    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __call__(self, t) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def __mul__(self, other: "PoincarePolynomial") -> "PoincarePolynomial":
        if self.is_zero() or other.is_zero():
            return PoincarePolynomial(())
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return PoincarePolynomial(tuple(out))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                t = "t" if i == 1 else f"t^{i}"
                terms.append(t if c == 1 else f"{c}{t}")
        return " + ".join(terms)


def poincare_polynomial(g: GradedModule) -> PoincarePolynomial:
    """Free ranks as coefficients; torsion excluded by contract."""
    ranks = g.ranks()
    if any(d < 0 for d in ranks):
        raise NegativeDegree(f"negative degree in {sorted(ranks)}")
    return PoincarePolynomial.from_dict(ranks)


def one_plus_t_power(a: int) -> PoincarePolynomial:
    return PoincarePolynomial.from_dict({0: 1, a: 1})


def divide_exact(p: PoincarePolynomial, divisor: PoincarePolynomial) -> PoincarePolynomial:
    """Exact long division; NotDivisible on a nonzero remainder or a
    negative quotient coefficient."""
    if divisor.is_zero() or divisor.coefficient(0) != 1:
        raise NotDivisible("divisor must have constant term 1")
    if p.is_zero():
        return PoincarePolynomial(())
    n, m = p.degree(), divisor.degree()
    if m == 0:
        return p
    if n < m:
        raise NotDivisible(f"{p} not divisible by {divisor}")
    rem = list(p.coefficients) + [0]
    q = [0] * (n - m + 1)
    for i in range(n - m + 1):
        c = rem[i]
        if c < 0:
            raise NotDivisible(f"negative quotient coefficient at t^{i}")
        q[i] = c
        for j, b in enumerate(divisor.coefficients):
            rem[i + j] -= c * b
    if any(rem):
        raise NotDivisible(f"{p} not divisible by {divisor}")
    return PoincarePolynomial(tuple(q))


def divide_by_one_plus_t(p: PoincarePolynomial) -> PoincarePolynomial:
    """Quotient by (1+t); exact, with non-negative coefficients required."""
    return divide_exact(p, one_plus_t_power(1))
