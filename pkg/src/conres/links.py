"""Reduced homology of links of order complexes, and Borel-Moore homology
of the open cones over them.

Links are evaluated through an expression tree.  Internally everything is
unreduced homology of the compact link; eval_link strips the degree-0 unit
at the end, because the boundary isomorphism
H̄_*(open cone) = H̃_{*-1}(link) is stated reduced.

Assemblies never guess: a Mayer-Vietoris or filtration step with an
undetermined connecting map between two nonzero groups raises
AmbiguousAssembly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import AmbiguousAssembly, UnsupportedPair
from .grading import GradedModule, RATIONAL
from .spaces import (
    BOREL_MOORE,
    ORDINARY,
    SIGN,
    TRIVIAL,
    Config,
    Proj,
    SpaceExpr,
    euler_cs_space,
    homology,
)

# ---------------------------------------------------------------------------
# expression nodes


@dataclass(frozen=True)
class SpaceLink:
    """A link that simply is a catalog space (e.g. the CP^1 of points of a
    line, which is the whole link in the quadric case)."""

    space: SpaceExpr


@dataclass(frozen=True)
class SimplexLink:
    """A (k-1)-simplex: the order complex of all subsets of k points in
    general position.  Contractible."""

    k: int


@dataclass(frozen=True)
class SimplexBoundary:
    """Boundary of the (k-1)-simplex on k vertices, i.e. the link of a
    k-point set all of whose proper subsets are admissible: a sphere
    S^{k-2}."""

    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("SimplexBoundary needs k >= 2")


@dataclass(frozen=True)
class SelfJoin:
    """k-th self-join X^{*k}: simplices spanned by up to k points of X.
    Only X = CP^1 is catalogued (the only case the method needs)."""

    space: SpaceExpr
    k: int

    def __post_init__(self):
        if self.space != Proj(1):
            raise UnsupportedPair("self-joins are catalogued only over Proj(1)")
        if self.k < 1:
            raise ValueError("SelfJoin needs k >= 1")


@dataclass(frozen=True)
class Join:
    left: "LinkExpr"
    right: "LinkExpr"


@dataclass(frozen=True)
class Cone:
    base: "LinkExpr"


@dataclass(frozen=True)
class Susp:
    base: "LinkExpr"


@dataclass(frozen=True)
class MVUnion:
    """Union of closed pieces with all intersections supplied.

    intersections maps frozensets of piece indices (size >= 2) to the
    link expression of the corresponding intersection.
    """

    pieces: tuple["LinkExpr", ...]
    intersections: tuple[tuple[frozenset[int], "LinkExpr"], ...]

    def intersection_map(self) -> dict[frozenset[int], "LinkExpr"]:
        return dict(self.intersections)


def mv_union(pieces, intersections: dict) -> MVUnion:
    return MVUnion(
        tuple(pieces),
        tuple(sorted(((frozenset(k), v) for k, v in intersections.items()),
                     key=lambda kv: sorted(kv[0]))),
    )


# fibers of stratified-link strata
@dataclass(frozen=True)
class ConeFiber:
    """Open cone over a link: H̄ = reduced homology of the link, shifted."""

    link: "LinkExpr"


@dataclass(frozen=True)
class SuppliedBM:
    """Borel-Moore homology of the fiber supplied as data, with a note
    saying where it comes from (e.g. 'triangle with two sides removed')."""

    module: GradedModule
    note: str = ""


@dataclass(frozen=True)
class LinkStratum:
    """One step of a stratified link.  The first stratum is the closed
    bottom piece (a link expression evaluated unreduced); later strata are
    bundles over a base with the given fiber."""

    name: str
    bottom: "LinkExpr | None" = None
    base: SpaceExpr | None = None
    twist: str = TRIVIAL
    fiber: "ConeFiber | SuppliedBM | None" = None

    def __post_init__(self):
        if (self.bottom is None) == (self.base is None and self.fiber is None):
            raise ValueError("stratum is either a bottom piece or a bundle")
        if self.bottom is None and (self.base is None or self.fiber is None):
            raise ValueError("bundle stratum needs base and fiber")


@dataclass(frozen=True)
class StratifiedLink:
    """A link evaluated through an explicit filtration, at most the
    patterns the method uses (a closed bottom plus a few bundle strata)."""

    strata: tuple[LinkStratum, ...]

    def __post_init__(self):
        if not self.strata:
            raise ValueError("empty stratified link")
        if len(self.strata) > 6:
            raise ValueError("stratified links beyond the catalogued patterns")


@dataclass(frozen=True)
class KnownLink:
    """A link admitted by citation; stores its reduced homology."""

    reduced: GradedModule
    provenance: str


LinkExpr = (
    SpaceLink | SimplexLink | SimplexBoundary | SelfJoin | Join | Cone | Susp
    | MVUnion | StratifiedLink | KnownLink
)


# ---------------------------------------------------------------------------
# self-join filtration page


@dataclass(frozen=True)
class SelfJoinPage:
    """First page of the self-join filtration of (S^2)^{*k}, with the one
    forced differential and its survivors."""

    k: int
    cells: dict[tuple[int, int], int] = field(default_factory=dict)
    differential: tuple[tuple[int, int], tuple[int, int], int] | None = None
    survivors: dict[tuple[int, int], int] = field(default_factory=dict)

    def unreduced(self) -> GradedModule:
        ranks: dict[int, int] = {}
        for (p, q), r in self.survivors.items():
            ranks[p + q] = ranks.get(p + q, 0) + r
        return GradedModule.from_ranks(ranks)

    def reduced(self) -> GradedModule:
        return _strip_unit(self.unreduced())


def self_join_page(k: int) -> SelfJoinPage:
    """The page E^1_{p,q} = H̄_{q+1}(B(CP^1, p), ±R) for p <= k, with the
    d^1 isomorphism between the two positive cells.

    The differential is pinned here with provenance rather than derived:
    it is the boundary map H_3((S^2)^{*2}, S^2) -> H_2(S^2), an isomorphism
    read off the 2-dimensional Schubert cell a = (1, 2).  The independent
    validator is the compactly-supported Euler characteristic.
    """
    if k < 1:
        raise ValueError("self_join_page needs k >= 1")
    cells: dict[tuple[int, int], int] = {}
    for p in range(1, k + 1):
        column = homology(Config(Proj(1), p), BOREL_MOORE, SIGN)
        for deg, rank in column.ranks().items():
            cells[(p, deg - 1)] = rank
    differential = None
    survivors = dict(cells)
    if k >= 2:
        differential = ((2, 1), (1, 1), 1)
        del survivors[(2, 1)]
        del survivors[(1, 1)]
    return SelfJoinPage(k, cells, differential, survivors)


# ---------------------------------------------------------------------------
# evaluation


def _strip_unit(unreduced: GradedModule) -> GradedModule:
    rank0 = unreduced.rank(0)
    if rank0 < 1:
        raise AssertionError("link evaluated to an empty space")
    ranks = unreduced.ranks()
    ranks[0] = rank0 - 1
    return GradedModule({d: (r, unreduced.torsion(d)) for d, r in ranks.items()},
                        unreduced.mode)


def _with_unit(reduced: GradedModule) -> GradedModule:
    return reduced + GradedModule.unit(reduced.mode)


def eval_link(e: LinkExpr, mode: str = RATIONAL) -> GradedModule:
    """Reduced ordinary homology of the link."""
    return _strip_unit(_eval_unreduced(e, mode))


def bm_open_cone(link_reduced: GradedModule) -> GradedModule:
    """Borel-Moore homology of the open cone on a link with the given
    reduced homology: the boundary isomorphism, a shift by one."""
    return link_reduced.shift(1)


def _eval_unreduced(e: LinkExpr, mode: str) -> GradedModule:
    if isinstance(e, SpaceLink):
        return homology(e.space, ORDINARY, TRIVIAL, mode)
    if isinstance(e, SimplexLink):
        return GradedModule.from_ranks({0: 1}, mode)
    if isinstance(e, SimplexBoundary):
        return _with_unit(GradedModule.from_ranks({e.k - 2: 1}, mode))
    if isinstance(e, SelfJoin):
        return self_join_page(e.k).unreduced()
    if isinstance(e, Join):
        left = _strip_unit(_eval_unreduced(e.left, mode))
        right = _strip_unit(_eval_unreduced(e.right, mode))
        return _with_unit(left.tensor(right).shift(1))
    if isinstance(e, Cone):
        _eval_unreduced(e.base, mode)  # still validates the subtree
        return GradedModule.from_ranks({0: 1}, mode)
    if isinstance(e, Susp):
        base = _strip_unit(_eval_unreduced(e.base, mode))
        return _with_unit(base.shift(1))
    if isinstance(e, MVUnion):
        return _eval_mv(e, mode)
    if isinstance(e, StratifiedLink):
        return _eval_stratified(e, mode)
    if isinstance(e, KnownLink):
        return _with_unit(e.reduced)
    raise TypeError(f"not a LinkExpr: {e!r}")


def _is_acyclic(unreduced: GradedModule) -> bool:
    return unreduced.ranks() == {0: 1} and not unreduced.has_torsion()


def _eval_mv(e: MVUnion, mode: str) -> GradedModule:
    m = len(e.pieces)
    if m == 1:
        return _eval_unreduced(e.pieces[0], mode)
    inter = e.intersection_map()
    for r in range(2, m + 1):
        from itertools import combinations

        for subset in combinations(range(m), r):
            if frozenset(subset) not in inter:
                raise ValueError(f"MVUnion is missing the intersection {subset}")
    pieces = [_eval_unreduced(p, mode) for p in e.pieces]
    inters = {s: _eval_unreduced(x, mode) for s, x in inter.items()}
    # all pieces and intersections acyclic: the union is acyclic (nerve
    # is a full simplex and every term contributes a point)
    if all(_is_acyclic(h) for h in pieces) and all(_is_acyclic(h) for h in inters.values()):
        return GradedModule.from_ranks({0: 1}, mode)
    if m != 2:
        raise AmbiguousAssembly(
            "general Mayer-Vietoris with three or more non-acyclic pieces is not assembled"
        )
    a, b = (_strip_unit(h) for h in pieces)
    cap = _strip_unit(inters[frozenset({0, 1})])
    ab = a + b
    # the maps H(cap) -> H(A)+H(B) are determined only when one side dies
    for deg in cap.ranks():
        if ab.rank(deg):
            raise AmbiguousAssembly(
                f"undetermined Mayer-Vietoris map in degree {deg}: "
                f"both the intersection and the pieces are nonzero"
            )
    return _with_unit(ab + cap.shift(1))


def _stratum_contribution(s: LinkStratum, mode: str) -> GradedModule:
    if s.bottom is not None:
        return _eval_unreduced(s.bottom, mode)
    if isinstance(s.fiber, ConeFiber):
        fiber_bm = bm_open_cone(eval_link(s.fiber.link, mode))
    elif isinstance(s.fiber, SuppliedBM):
        fiber_bm = s.fiber.module
    else:
        raise TypeError(f"bad fiber {s.fiber!r}")
    if fiber_bm.is_zero():
        return GradedModule.zero(mode)
    base = homology(s.base, BOREL_MOORE, s.twist, mode)
    return base.tensor(fiber_bm)


def _eval_stratified(e: StratifiedLink, mode: str) -> GradedModule:
    contributions = [_stratum_contribution(s, mode) for s in e.strata]
    nonzero = [(i, c) for i, c in enumerate(contributions) if not c.is_zero()]
    if len(nonzero) <= 1:
        total = GradedModule.zero(mode)
        for c in contributions:
            total = total + c
        return total
    # several strata contribute: the filtration spectral sequence is taken
    # at face value only when no differential can connect the cells
    for i, ci in nonzero:
        for j, cj in nonzero:
            if j >= i:
                continue
            # d_r: (p, q) -> (p - r, q + r - 1) lowers total degree by one
            for deg in ci.ranks():
                if cj.rank(deg - 1):
                    raise AmbiguousAssembly(
                        f"undetermined differential between strata "
                        f"{e.strata[i].name!r} and {e.strata[j].name!r} "
                        f"(degrees {deg} -> {deg - 1})"
                    )
    total = GradedModule.zero(mode)
    for c in contributions:
        total = total + c
    return total


def stratified_link_homology(s: StratifiedLink, mode: str = RATIONAL) -> GradedModule:
    """Unreduced homology of a stratified link, when forced."""
    return _eval_unreduced(s, mode)


# ---------------------------------------------------------------------------
# compactly supported Euler characteristics (the independent validator)


def euler_cs(e) -> int:
    """chi_c, computed stratum-wise and multiplicatively, never through
    eval_link.  Must agree with the alternating rank sum of any successful
    evaluation."""
    if isinstance(e, (SpaceLink,)):
        return euler_cs_space(e.space)
    if isinstance(e, SimplexLink):
        return 1
    if isinstance(e, SimplexBoundary):
        return 1 + (-1) ** e.k
    if isinstance(e, SelfJoin):
        chi = euler_cs_space(e.space)
        return sum((-1) ** (p - 1) * math.comb(chi, p) for p in range(1, e.k + 1))
    if isinstance(e, Join):
        return 1 - (euler_cs(e.left) - 1) * (euler_cs(e.right) - 1)
    if isinstance(e, Cone):
        return 1
    if isinstance(e, Susp):
        return 2 - euler_cs(e.base)
    if isinstance(e, MVUnion):
        from itertools import combinations

        total = 0
        m = len(e.pieces)
        inter = e.intersection_map()
        for r in range(1, m + 1):
            for subset in combinations(range(m), r):
                if r == 1:
                    chi = euler_cs(e.pieces[subset[0]])
                else:
                    chi = euler_cs(inter[frozenset(subset)])
                total += (-1) ** (r + 1) * chi
        return total
    if isinstance(e, StratifiedLink):
        total = 0
        for s in e.strata:
            if s.bottom is not None:
                total += euler_cs(s.bottom)
            else:
                if isinstance(s.fiber, ConeFiber):
                    chi_fiber = 1 - euler_cs(s.fiber.link)
                else:
                    chi_fiber = s.fiber.module.euler()
                total += euler_cs_space(s.base) * chi_fiber
        return total
    if isinstance(e, KnownLink):
        return 1 + e.reduced.euler()
    # fall through to space expressions
    return euler_cs_space(e)
