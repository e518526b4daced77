"""Homology oracle for the closed catalog of stratum base spaces.

Degrees are always real dimensions.  Borel-Moore homology of a smooth
oriented open manifold of real dimension m is the reflection of ordinary
cohomology through m; for the compact catalog members the two flavors agree.

The sign-twisted Borel-Moore homology of configuration spaces of projective
spaces is produced from the Schubert-symbol cell decomposition with all
boundary maps zero.  That vanishing is asserted, not proven, by this code;
the validation is the degree-by-degree match with the Gaussian-binomial
Poincaré polynomial of the Grassmannian (Lemma 2B as a testable identity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import (
    BadRange,
    UnsupportedIntegral,
    UnsupportedPair,
    UnsupportedRank,
    UnsupportedTwist,
)
from .grading import INTEGRAL, RATIONAL, GradedModule, PoincarePolynomial

ORDINARY = "ordinary"
BOREL_MOORE = "borel_moore"
TRIVIAL = "trivial"
SIGN = "sign"


# ---------------------------------------------------------------------------
# expression nodes


@dataclass(frozen=True)
class Point:
    pass


@dataclass(frozen=True)
class Affine:
    n: int


@dataclass(frozen=True)
class Proj:
    n: int


@dataclass(frozen=True)
class Grassmann:
    """k-dimensional linear subspaces of C^m."""

    k: int
    m: int


@dataclass(frozen=True)
class Config:
    """Unordered k-point configurations B(X, k); X affine or projective."""

    space: "SpaceExpr"
    k: int

    def __post_init__(self):
        if not isinstance(self.space, (Affine, Proj)):
            raise ValueError("Config only over Affine(n) or Proj(n)")
        if self.k < 1:
            raise ValueError("Config needs k >= 1")


#: (n, k) pairs for which the generic-configuration spaces are catalogued
GENERIC_CONFIG_PAIRS = ((2, 3), (2, 4), (3, 3), (3, 4))


@dataclass(frozen=True)
class GenericConfig:
    """Configurations in CP^n with no three points collinear (and, for
    n = 3, no four points coplanar)."""

    n: int
    k: int


@dataclass(frozen=True)
class PGL:
    """The group PGL_m(C)."""

    m: int


@dataclass(frozen=True)
class Product:
    left: "SpaceExpr"
    right: "SpaceExpr"


@dataclass(frozen=True)
class Known:
    """A space admitted into the catalog by citation rather than computation."""

    name: str
    provenance: str
    ordinary: GradedModule | None = None
    borel_moore: GradedModule | None = None


SpaceExpr = Point | Affine | Proj | Grassmann | Config | GenericConfig | PGL | Product | Known


def product_of(*factors: SpaceExpr) -> SpaceExpr:
    """Right-nested product of several factors."""
    if not factors:
        return Point()
    expr = factors[-1]
    for f in reversed(factors[:-1]):
        expr = Product(f, expr)
    return expr


def contains_config(x: SpaceExpr) -> bool:
    if isinstance(x, (Config, GenericConfig)):
        return True
    if isinstance(x, Product):
        return contains_config(x.left) or contains_config(x.right)
    return False


# ---------------------------------------------------------------------------
# Grassmannians and Schubert cells


@lru_cache(maxsize=None)
def _gauss_binomial_q(m: int, k: int) -> tuple[int, ...]:
    """Coefficients of the Gaussian binomial [m choose k]_q."""
    if k < 0 or k > m:
        return (0,)
    if k == 0 or k == m:
        return (1,)
    a = _gauss_binomial_q(m - 1, k - 1)
    b = _gauss_binomial_q(m - 1, k)  # gets multiplied by q^k
    out = [0] * max(len(a), len(b) + k)
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i + k] += c
    return tuple(out)


def grassmann_poincare(k: int, m: int) -> PoincarePolynomial:
    """Poincaré polynomial of G_k(C^m): the Gaussian binomial with q = t^2."""
    if not 0 <= k <= m:
        raise BadRange(f"need 0 <= k <= m, got k={k}, m={m}")
    coeffs = _gauss_binomial_q(m, k)
    return PoincarePolynomial.from_dict({2 * i: c for i, c in enumerate(coeffs)})


def schubert_cells(n: int, k: int) -> list[tuple[tuple[int, ...], int]]:
    """Schubert symbols a_0 <= ... <= a_n indexing the cells of the
    configuration space B(CP^n, k) that carry twisted homology.

    Symbols satisfy a_n = k, a_0 <= 1 and consecutive differences <= 1;
    the complex dimension of the cell is sum_i i*(a_i - a_{i-1}).
    """
    if n < 0 or k < 1:
        raise BadRange(f"need n >= 0, k >= 1, got n={n}, k={k}")
    out: list[tuple[tuple[int, ...], int]] = []

    def extend(prefix: tuple[int, ...]):
        i = len(prefix)
        if i == n + 1:
            if prefix[-1] == k:
                dim = sum(j * (prefix[j] - prefix[j - 1]) for j in range(1, n + 1))
                out.append((prefix, dim))
            return
        if i == 0:
            for a0 in (0, 1):
                extend((a0,))
            return
        prev = prefix[-1]
        for a in (prev, prev + 1):
            if a <= k:
                extend(prefix + (a,))

    extend(())
    out.sort(key=lambda sd: (sd[1], sd[0]))
    return out


# ---------------------------------------------------------------------------
# named pieces of the catalog


def pgl_homology(m: int, flavor: str = ORDINARY) -> GradedModule:
    """H_*(PGL_m(C), R): exterior algebra on degrees 3, 5, ..., 2m-1;
    Borel-Moore is its reflection through the real dimension 2(m^2-1)."""
    if m not in (3, 4):
        raise UnsupportedRank(f"PGL({m}) not catalogued")
    poly = PoincarePolynomial.one()
    for j in range(2, m + 1):
        poly = poly * PoincarePolynomial.from_dict({0: 1, 2 * j - 1: 1})
    ordinary = GradedModule.from_ranks(
        {i: c for i, c in enumerate(poly.coefficients) if c}
    )
    if flavor == ORDINARY:
        return ordinary
    return ordinary.reflect(2 * (m * m - 1))


def _config_proj_sign_bm(n: int, k: int) -> GradedModule:
    cells = schubert_cells(n, k)
    ranks: dict[int, int] = {}
    for _, dim in cells:
        ranks[2 * dim] = ranks.get(2 * dim, 0) + 1
    return GradedModule.from_ranks(ranks)


#: degenerate loci of B(CP^n, k), as product fibrations whose sign-twisted
#: Borel-Moore homology must vanish for the excision argument to apply
_GENERIC_CONFIG_DEGENERATE: dict[tuple[int, int], tuple[SpaceExpr, ...]] = {
    (2, 3): (
        # collinear triples, fibered over the dual plane
        product_of(Proj(2), Config(Proj(1), 3)),
    ),
    (2, 4): (
        # exactly three collinear (fourth point off the line)
        product_of(Proj(2), Config(Proj(1), 3), Affine(2)),
        # all four collinear
        product_of(Proj(2), Config(Proj(1), 4)),
    ),
    (3, 3): (
        # collinear triples, fibered over the lines in CP^3
        product_of(Grassmann(2, 4), Config(Proj(1), 3)),
    ),
    (3, 4): (
        # span is a line
        product_of(Grassmann(2, 4), Config(Proj(1), 4)),
        # span is a plane: 4-configurations of the plane ...
        product_of(Grassmann(3, 4), Config(Proj(2), 4)),
        # ... minus their own collinear locus
        product_of(Grassmann(3, 4), Proj(2), Config(Proj(1), 4)),
    ),
}


def generic_config_homology(n: int, k: int) -> GradedModule:
    """Sign-twisted Borel-Moore homology of the generic-configuration space.

    Recomputes the excision argument: the degenerate loci, as fibered
    products, must be twisted-acyclic, which makes the inclusion into the
    full configuration space an isomorphism.  A catalog bug fails loudly.
    """
    if (n, k) not in GENERIC_CONFIG_PAIRS:
        raise UnsupportedPair(f"generic configurations not catalogued for {(n, k)}")
    for piece in _GENERIC_CONFIG_DEGENERATE[(n, k)]:
        got = homology(piece, BOREL_MOORE, SIGN)
        if not got.is_zero():
            raise AssertionError(
                f"degenerate locus {piece} of GenericConfig({n},{k}) is not twisted-acyclic: {got}"
            )
    return homology(Config(Proj(n), k), BOREL_MOORE, SIGN)


# ---------------------------------------------------------------------------
# the oracle


def _integral_supported(x: SpaceExpr) -> bool:
    if isinstance(x, (Point, Affine, Proj, Grassmann)):
        return True
    if isinstance(x, Product):
        return _integral_supported(x.left) and _integral_supported(x.right)
    return False


def homology(
    x: SpaceExpr,
    flavor: str = ORDINARY,
    twist: str = TRIVIAL,
    mode: str = RATIONAL,
) -> GradedModule:
    """Homology of a catalog space, ordinary or Borel-Moore, with trivial
    or sign-twisted coefficients, over Q or (where supported) Z."""
    if flavor not in (ORDINARY, BOREL_MOORE):
        raise ValueError(f"unknown flavor {flavor!r}")
    if twist == SIGN and not contains_config(x):
        raise UnsupportedTwist(f"sign twist on non-configuration space {x}")
    if mode == INTEGRAL:
        if not _integral_supported(x):
            raise UnsupportedIntegral(f"integral homology not supported for {x}")
        if twist == SIGN:
            raise UnsupportedIntegral("integral twisted homology not supported")
    return _homology(x, flavor, twist, mode)


def _homology(x: SpaceExpr, flavor: str, twist: str, mode: str) -> GradedModule:
    if isinstance(x, Point):
        return GradedModule.from_ranks({0: 1}, mode)
    if isinstance(x, Affine):
        if flavor == BOREL_MOORE:
            return GradedModule.from_ranks({2 * x.n: 1}, mode)
        return GradedModule.from_ranks({0: 1}, mode)
    if isinstance(x, Proj):
        return GradedModule.from_ranks({2 * i: 1 for i in range(x.n + 1)}, mode)
    if isinstance(x, Grassmann):
        poly = grassmann_poincare(x.k, x.m)
        return GradedModule.from_ranks(
            {i: c for i, c in enumerate(poly.coefficients) if c}, mode
        )
    if isinstance(x, PGL):
        return pgl_homology(x.m, flavor)
    if isinstance(x, Product):
        sub = twist
        left = _homology(x.left, flavor, sub if contains_config(x.left) else TRIVIAL, mode)
        right = _homology(x.right, flavor, sub if contains_config(x.right) else TRIVIAL, mode)
        return left.tensor(right)
    if isinstance(x, Config):
        if x.k == 1:
            return _homology(x.space, flavor, TRIVIAL, mode)
        if twist != SIGN:
            raise UnsupportedTwist(
                f"untwisted homology of {x} is outside the catalog"
            )
        if isinstance(x.space, Affine):
            bm = GradedModule.zero()  # Lemma 2A
            real_dim = 2 * x.space.n * x.k
        else:
            bm = _config_proj_sign_bm(x.space.n, x.k)
            real_dim = 2 * x.space.n * x.k
        if flavor == BOREL_MOORE:
            return bm
        return bm.reflect(real_dim)
    if isinstance(x, GenericConfig):
        if (x.n, x.k) not in GENERIC_CONFIG_PAIRS:
            raise UnsupportedPair(f"{x} not catalogued")
        if twist != SIGN:
            raise UnsupportedTwist(f"untwisted homology of {x} is outside the catalog")
        bm = _config_proj_sign_bm(x.n, x.k)  # equals the generic one by excision
        if flavor == BOREL_MOORE:
            return bm
        return bm.reflect(2 * x.n * x.k)
    if isinstance(x, Known):
        module = x.borel_moore if flavor == BOREL_MOORE else x.ordinary
        if module is None:
            raise UnsupportedTwist(
                f"Known space {x.name!r} carries no {flavor} data"
            )
        return module
    raise TypeError(f"not a SpaceExpr: {x!r}")


def euler_cs_space(x: SpaceExpr) -> int:
    """Compactly supported Euler characteristic; twist-independent,
    multiplicative over products, binomial over configuration spaces."""
    if isinstance(x, Point):
        return 1
    if isinstance(x, Affine):
        return 1
    if isinstance(x, Proj):
        return x.n + 1
    if isinstance(x, Grassmann):
        return math.comb(x.m, x.k)
    if isinstance(x, PGL):
        return 0
    if isinstance(x, Product):
        return euler_cs_space(x.left) * euler_cs_space(x.right)
    if isinstance(x, Config):
        chi = euler_cs_space(x.space)
        return math.comb(chi, x.k) if 0 <= x.k <= chi else 0
    if isinstance(x, GenericConfig):
        # chi_c is blind to the local system, so the twisted alternating
        # rank sum computes it
        if (x.n, x.k) not in GENERIC_CONFIG_PAIRS:
            raise UnsupportedPair(f"{x} not catalogued")
        return _config_proj_sign_bm(x.n, x.k).euler()
    if isinstance(x, Known):
        module = x.borel_moore if x.borel_moore is not None else x.ordinary
        if module is None:
            raise ValueError(f"Known space {x.name!r} carries no homology data")
        return module.euler()
    raise TypeError(f"not a SpaceExpr: {x!r}")
