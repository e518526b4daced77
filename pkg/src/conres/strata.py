"""The five built-in stratification catalogs and the E^1 assembly.

Each case is an ordered list of singular-set families.  A stratum records
the parameter space of its sets (base), the complex dimension L_dim of the
space of forms singular along one such set, and the fiber of the conical
resolution over the base: an open simplex bundle for finite point sets, an
open cone over an explicitly described link otherwise, a point for the
top-codimension vertex families, and a final-column marker for the whole
ambient space.

Columns the source arguments prove trivial are still evaluated here from
first principles: the zero comes out of the link calculus and the twisted
configuration homology, it is not hard-coded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .errors import UnknownCase, UnsupportedIntegral
from .grading import GradedModule, INTEGRAL, RATIONAL, Torsion
from .intlinalg import IntegerMatrix
from .links import (
    Cone,
    ConeFiber,
    KnownLink,
    LinkExpr,
    LinkStratum,
    MVUnion,
    SelfJoin,
    SimplexBoundary,
    SimplexLink,
    SpaceLink,
    StratifiedLink,
    SuppliedBM,
    Susp,
    bm_open_cone,
    eval_link,
    euler_cs,
    mv_union,
)
from .spaces import (
    BOREL_MOORE,
    SIGN,
    TRIVIAL,
    Affine,
    Config,
    GenericConfig,
    Grassmann,
    Known,
    Point,
    Proj,
    SpaceExpr,
    euler_cs_space,
    homology,
    product_of,
)

HYPERSURFACE = "hypersurface"
VECTOR_FIELD = "vector_field"

CASE_IDS = ("quadric-p2", "cubic-p2", "quartic-p2", "cubic-p3", "vf-222")


# ---------------------------------------------------------------------------
# stratum fibers


@dataclass(frozen=True)
class OpenSimplex:
    """Open (k-1)-simplex bundle over a configuration base.  The bundle
    orientation tracks the sign system of the base unless the catalog marks
    it orientable (only the six-points-on-four-lines family is)."""

    k: int
    orientable: bool = False


@dataclass(frozen=True)
class OpenConeOverLink:
    link: LinkExpr


@dataclass(frozen=True)
class PointFiber:
    pass


@dataclass(frozen=True)
class FinalColumn:
    """The whole-ambient-space stratum; its cells come from the auxiliary
    resolution of the order complex, or from a cited link when the
    auxiliary page alone cannot decide (the quadric's Phi_2 = S^7)."""

    known_link: KnownLink | None = None


StratumFiber = OpenSimplex | OpenConeOverLink | PointFiber | FinalColumn


@dataclass(frozen=True)
class Stratum:
    p: int
    name: str
    base: SpaceExpr
    base_twist: str
    L_dim: int
    fiber: StratumFiber

    def __post_init__(self):
        if self.L_dim < 0:
            raise ValueError(f"stratum {self.name!r}: negative L_dim")


@dataclass(frozen=True)
class KnownDifferential:
    source: tuple[int, int]
    target: tuple[int, int]
    matrix: IntegerMatrix


@dataclass(frozen=True)
class StratificationSpec:
    case_id: str
    kind: str
    d: int
    n: int
    D: int
    projectivize: bool
    strata: tuple[Stratum, ...]
    known_differentials: tuple[KnownDifferential, ...] = ()

    def __post_init__(self):
        if self.kind == HYPERSURFACE and self.D != math.comb(self.d + self.n, self.n):
            raise ValueError(f"D = {self.D} != C({self.d + self.n},{self.n})")
        if self.kind == VECTOR_FIELD and self.D != 18:
            raise ValueError("the vector-field case has D = 18")
        finals = [s for s in self.strata if isinstance(s.fiber, FinalColumn)]
        if len(finals) != 1 or self.strata[-1] is not finals[0]:
            raise ValueError("exactly one FinalColumn stratum, last")
        codims = [self.D - s.L_dim for s in self.strata]
        if any(b < a for a, b in zip(codims, codims[1:])):
            raise ValueError(f"codimensions not monotone: {codims}")
        for i, s in enumerate(self.strata, start=1):
            if s.p != i:
                raise ValueError(f"stratum {s.name!r} has p = {s.p}, expected {i}")

    def codim(self, p: int) -> int:
        return self.D - self.strata[p - 1].L_dim


# ---------------------------------------------------------------------------
# shared link ingredients

_N22_KNOWN = Known(
    name="smooth plane conics",
    provenance="space of nonsingular quadrics in CP^2; homology per the d=2 case",
    ordinary=GradedModule.from_ranks({0: 1, 5: 1}),
    borel_moore=GradedModule.from_ranks({5: 1, 10: 1}),
)

_FOUR_LINES_KNOWN = Known(
    name="generic four-line configurations",
    provenance=(
        "ordered generic 4-point configurations are PGL_3(C); the 24-fold "
        "covering onto the unordered space loses no real homology"
    ),
    ordinary=GradedModule.from_ranks({0: 1, 3: 1, 5: 1, 8: 1}),
    borel_moore=GradedModule.from_ranks({8: 1, 11: 1, 13: 1, 16: 1}),
)

_TWO_AFFINE_LINES = Known(
    name="two disjoint affine lines",
    provenance="the two lines of the pair, each with the crossing removed",
    ordinary=GradedModule.from_ranks({0: 2}),
    borel_moore=GradedModule.from_ranks({2: 2}),
)

#: BM-acyclic fiber: a closed simplex with some but not all facets through
#: one vertex removed; homeomorphic to [0,1) x (0,1)^m, so H̄ = 0
_HALF_OPEN = GradedModule.zero()


def _point_augmented_line_complex(join_size: int) -> StratifiedLink:
    """The union of order complexes of all line-plus-one-point sets with the
    line fixed (the A_i of the two-lines argument).

    Filtered as: the complex of the line itself (a cone over its self-join
    link), then per extra point the open cone over the line link, then the
    open cone over the suspended link.  Both differences are Borel-Moore
    acyclic, so the union is forced acyclic.
    """
    line_link = SelfJoin(Proj(1), join_size)
    return StratifiedLink((
        LinkStratum("order complex of the line", bottom=Cone(line_link)),
        LinkStratum(
            "point-augmented subsets below the top set",
            base=Affine(1), twist=TRIVIAL, fiber=ConeFiber(line_link),
        ),
        LinkStratum(
            "open cones of the line-plus-point complexes",
            base=Affine(1), twist=TRIVIAL, fiber=ConeFiber(Susp(line_link)),
        ),
    ))


def _two_lines_common_part() -> StratifiedLink:
    """A_1 ∩ A_2 of the two-lines Mayer-Vietoris: points of the two lines
    and the pairs through the crossing form a cone; mixed pairs and triples
    through the crossing assemble into a bundle of triangles with the two
    crossing-sides removed, which is Borel-Moore acyclic."""
    return StratifiedLink((
        LinkStratum(
            "points of the two lines, coned to the crossing",
            bottom=Cone(SpaceLink(_TWO_AFFINE_LINES)),
        ),
        LinkStratum(
            "mixed pairs and triples through the crossing",
            base=product_of(Affine(1), Affine(1)),
            twist=TRIVIAL,
            fiber=SuppliedBM(_HALF_OPEN, "triangle with the two crossing-sides removed"),
        ),
    ))


def _two_lines_link(join_size: int, with_five_points: bool) -> StratifiedLink:
    """Link of a pair of lines in the plane.  join_size is the largest
    collinear subset (3 for quartics, 2 for quadratic vector fields); the
    five-point families exist only in the quartic case."""
    a_piece = _point_augmented_line_complex(join_size)
    bottom = mv_union([a_piece, a_piece], {(0, 1): _two_lines_common_part()})
    pair_base = product_of(Config(Affine(1), 2), Config(Affine(1), 2))
    strata = [
        LinkStratum("union of the two point-augmented line complexes", bottom=bottom),
        LinkStratum(
            "generic quadruples, two points per line",
            base=pair_base, twist=SIGN, fiber=ConeFiber(SimplexBoundary(4)),
        ),
    ]
    if with_five_points:
        strata.append(LinkStratum(
            "five-point sets: two per line plus the crossing",
            base=pair_base, twist=SIGN, fiber=ConeFiber(SimplexBoundary(5)),
        ))
    return StratifiedLink(tuple(strata))


def _intersecting_lines_link_p3() -> StratifiedLink:
    """Link of a pair of intersecting lines in CP^3 (cubic surfaces).
    The two line complexes are cones meeting in the crossing vertex; mixed
    pairs and crossing triples form the removed-sides triangle bundle; the
    remaining triples carry two points on one line and die by the twisted
    acyclicity of B(C,2)."""
    line_cone = Cone(SelfJoin(Proj(1), 2))
    bottom = mv_union([line_cone, line_cone], {(0, 1): SimplexLink(1)})
    return StratifiedLink((
        LinkStratum("the two line complexes", bottom=bottom),
        LinkStratum(
            "mixed pairs and triples through the crossing",
            base=product_of(Affine(1), Affine(1)),
            twist=TRIVIAL,
            fiber=SuppliedBM(_HALF_OPEN, "triangle with the two crossing-sides removed"),
        ),
        LinkStratum(
            "triples with two points on the first line",
            base=product_of(Config(Affine(1), 2), Affine(1)),
            twist=SIGN, fiber=ConeFiber(SimplexBoundary(3)),
        ),
        LinkStratum(
            "triples with two points on the second line",
            base=product_of(Affine(1), Config(Affine(1), 2)),
            twist=SIGN, fiber=ConeFiber(SimplexBoundary(3)),
        ),
    ))


def _plane_link_p3() -> StratifiedLink:
    """Link of a plane in CP^3, filtered through the singular-set families
    of plane cubics: the order complex of point-like families is acyclic
    (the auxiliary resolution of the plane-cubic case computes exactly
    this), and the conic and line-pair families contribute open cones over
    acyclic links."""
    return StratifiedLink((
        LinkStratum(
            "order complex of plane-cubic singular sets",
            bottom=KnownLink(
                GradedModule.zero(),
                "acyclic; recomputed by the auxiliary resolution of the cubic-p2 case",
            ),
        ),
        LinkStratum(
            "plane conics",
            base=_N22_KNOWN, twist=TRIVIAL,
            fiber=ConeFiber(SelfJoin(Proj(1), 3)),
        ),
        LinkStratum(
            "pairs of lines in the plane",
            base=Config(Proj(2), 2), twist=TRIVIAL,
            fiber=ConeFiber(_intersecting_lines_link_p3()),
        ),
    ))


def _concurrent_lines_link_p3() -> StratifiedLink:
    """Link of three concurrent, non-coplanar lines in CP^3.  The three
    two-line complexes are cones glued along the line complexes (also
    cones) with one common point; quadruples through the common point
    contribute a half-open tetrahedron bundle; the quadruples with a
    doubled line die by the sign twist."""
    two_lines = Cone(_intersecting_lines_link_p3())
    line_cone = Cone(SelfJoin(Proj(1), 2))
    bottom = mv_union(
        [two_lines, two_lines, two_lines],
        {
            (0, 1): line_cone,
            (0, 2): line_cone,
            (1, 2): line_cone,
            (0, 1, 2): SimplexLink(1),
        },
    )
    pair = Config(Affine(1), 2)
    aff = Affine(1)
    return StratifiedLink((
        LinkStratum("union of the three two-line complexes", bottom=bottom),
        LinkStratum(
            "quadruples through the common point",
            base=product_of(aff, aff, aff), twist=TRIVIAL,
            fiber=SuppliedBM(_HALF_OPEN, "tetrahedron with the three crossing-facets removed"),
        ),
        LinkStratum(
            "quadruples with two points on the first line",
            base=product_of(pair, aff, aff), twist=SIGN,
            fiber=ConeFiber(SimplexBoundary(4)),
        ),
        LinkStratum(
            "quadruples with two points on the second line",
            base=product_of(aff, pair, aff), twist=SIGN,
            fiber=ConeFiber(SimplexBoundary(4)),
        ),
        LinkStratum(
            "quadruples with two points on the third line",
            base=product_of(aff, aff, pair), twist=SIGN,
            fiber=ConeFiber(SimplexBoundary(4)),
        ),
    ))


# ---------------------------------------------------------------------------
# the five catalogs


def _quadric_p2() -> StratificationSpec:
    strata = (
        Stratum(1, "point", Proj(2), TRIVIAL, 3, PointFiber()),
        Stratum(2, "line", Proj(2), TRIVIAL, 1,
                OpenConeOverLink(SpaceLink(Proj(1)))),
        Stratum(3, "whole plane", Point(), TRIVIAL, 0,
                FinalColumn(known_link=KnownLink(
                    GradedModule.from_ranks({7: 1}),
                    "the subjoin of points and lines is S^7 [v91]",
                ))),
    )
    two = IntegerMatrix.from_rows([[2]])
    return StratificationSpec(
        "quadric-p2", HYPERSURFACE, 2, 2, 6, True, strata,
        (KnownDifferential((3, 5), (2, 5), two),
         KnownDifferential((2, 7), (1, 7), two)),
    )


def _cubic_p2() -> StratificationSpec:
    strata = (
        Stratum(1, "point", Proj(2), TRIVIAL, 7, PointFiber()),
        Stratum(2, "pair of points", Config(Proj(2), 2), SIGN, 4, OpenSimplex(2)),
        Stratum(3, "line", Proj(2), TRIVIAL, 3,
                OpenConeOverLink(SelfJoin(Proj(1), 2))),
        Stratum(4, "generic triple", GenericConfig(2, 3), SIGN, 1, OpenSimplex(3)),
        Stratum(5, "whole plane", Point(), TRIVIAL, 0, FinalColumn()),
    )
    return StratificationSpec("cubic-p2", HYPERSURFACE, 3, 2, 10, True, strata)


def _quartic_p2() -> StratificationSpec:
    strata = (
        Stratum(1, "point", Proj(2), TRIVIAL, 12, PointFiber()),
        Stratum(2, "pair of points", Config(Proj(2), 2), SIGN, 9, OpenSimplex(2)),
        Stratum(3, "collinear triple",
                product_of(Proj(2), Config(Proj(1), 3)), SIGN, 7, OpenSimplex(3)),
        Stratum(4, "generic triple", GenericConfig(2, 3), SIGN, 6, OpenSimplex(3)),
        Stratum(5, "line", Proj(2), TRIVIAL, 6,
                OpenConeOverLink(SelfJoin(Proj(1), 3))),
        Stratum(6, "collinear triple plus point",
                product_of(Proj(2), Config(Proj(1), 3), Affine(2)), SIGN, 4,
                OpenSimplex(4)),
        Stratum(7, "generic quadruple", GenericConfig(2, 4), SIGN, 3, OpenSimplex(4)),
        Stratum(8, "line plus point",
                product_of(Proj(2), Affine(2)), TRIVIAL, 3,
                OpenConeOverLink(Susp(SelfJoin(Proj(1), 3)))),
        Stratum(9, "five points from a line pair",
                product_of(Config(Proj(2), 2), Config(Affine(1), 2), Config(Affine(1), 2)),
                SIGN, 2, OpenSimplex(5)),
        Stratum(10, "six points on four generic lines",
                _FOUR_LINES_KNOWN, TRIVIAL, 1, OpenSimplex(6, orientable=True)),
        Stratum(11, "nonsingular conic", _N22_KNOWN, TRIVIAL, 1,
                OpenConeOverLink(SelfJoin(Proj(1), 4))),
        Stratum(12, "pair of lines", Config(Proj(2), 2), TRIVIAL, 1,
                OpenConeOverLink(_two_lines_link(3, with_five_points=True))),
        Stratum(13, "whole plane", Point(), TRIVIAL, 0, FinalColumn()),
    )
    return StratificationSpec("quartic-p2", HYPERSURFACE, 4, 2, 15, True, strata)


def _cubic_p3() -> StratificationSpec:
    strata = (
        Stratum(1, "point", Proj(3), TRIVIAL, 16, PointFiber()),
        Stratum(2, "pair of points", Config(Proj(3), 2), SIGN, 12, OpenSimplex(2)),
        Stratum(3, "line", Grassmann(2, 4), TRIVIAL, 10,
                OpenConeOverLink(SelfJoin(Proj(1), 2))),
        Stratum(4, "generic triple", GenericConfig(3, 3), SIGN, 8, OpenSimplex(3)),
        Stratum(5, "plane conic", product_of(Proj(3), _N22_KNOWN), TRIVIAL, 5,
                OpenConeOverLink(SelfJoin(Proj(1), 3))),
        Stratum(6, "pair of intersecting lines",
                product_of(Proj(3), Proj(2), Config(Proj(1), 2)), TRIVIAL, 5,
                OpenConeOverLink(_intersecting_lines_link_p3())),
        Stratum(7, "generic quadruple", GenericConfig(3, 4), SIGN, 4, OpenSimplex(4)),
        Stratum(8, "plane", Proj(3), TRIVIAL, 4,
                OpenConeOverLink(_plane_link_p3())),
        Stratum(9, "three concurrent lines",
                product_of(Proj(3), GenericConfig(2, 3)), TRIVIAL, 1,
                OpenConeOverLink(_concurrent_lines_link_p3())),
        Stratum(10, "plane conic plus point",
                product_of(Proj(3), _N22_KNOWN, Affine(3)), TRIVIAL, 1,
                OpenConeOverLink(Susp(SelfJoin(Proj(1), 3)))),
        Stratum(11, "whole space", Point(), TRIVIAL, 0, FinalColumn()),
    )
    return StratificationSpec("cubic-p3", HYPERSURFACE, 3, 3, 20, True, strata)


def _vf_222() -> StratificationSpec:
    strata = (
        Stratum(1, "point", Proj(2), TRIVIAL, 15, PointFiber()),
        Stratum(2, "pair of points", Config(Proj(2), 2), SIGN, 12, OpenSimplex(2)),
        Stratum(3, "generic triple", GenericConfig(2, 3), SIGN, 9, OpenSimplex(3)),
        Stratum(4, "line", Proj(2), TRIVIAL, 9,
                OpenConeOverLink(SelfJoin(Proj(1), 2))),
        Stratum(5, "generic quadruple", GenericConfig(2, 4), SIGN, 6, OpenSimplex(4)),
        Stratum(6, "line plus point",
                product_of(Proj(2), Affine(2)), TRIVIAL, 6,
                OpenConeOverLink(Susp(SelfJoin(Proj(1), 2)))),
        Stratum(7, "nonsingular conic", _N22_KNOWN, TRIVIAL, 3,
                OpenConeOverLink(SelfJoin(Proj(1), 4))),
        Stratum(8, "pair of lines", Config(Proj(2), 2), TRIVIAL, 3,
                OpenConeOverLink(_two_lines_link(2, with_five_points=False))),
        Stratum(9, "whole plane", Point(), TRIVIAL, 0, FinalColumn()),
    )
    return StratificationSpec("vf-222", VECTOR_FIELD, 2, 2, 18, False, strata)


_BUILDERS = {
    "quadric-p2": _quadric_p2,
    "cubic-p2": _cubic_p2,
    "quartic-p2": _quartic_p2,
    "cubic-p3": _cubic_p3,
    "vf-222": _vf_222,
}


def builtin_spec(case_id: str) -> StratificationSpec:
    try:
        return _BUILDERS[case_id]()
    except KeyError:
        raise UnknownCase(f"unknown case {case_id!r}; know {sorted(_BUILDERS)}") from None


# ---------------------------------------------------------------------------
# E^1 assembly


@dataclass
class E1Page:
    case_id: str
    D: int
    mode: str
    cells: dict[tuple[int, int], tuple[int, tuple[Torsion, ...]]] = field(default_factory=dict)
    labels: dict[int, tuple[str, int]] = field(default_factory=dict)
    final_p: int | None = None

    def rank(self, p: int, q: int) -> int:
        return self.cells.get((p, q), (0, ()))[0]

    def torsion(self, p: int, q: int) -> tuple[Torsion, ...]:
        return self.cells.get((p, q), (0, ()))[1]

    def set_cell(self, p: int, q: int, rank: int, torsion=()):
        if rank or torsion:
            self.cells[(p, q)] = (rank, tuple(torsion))
        else:
            self.cells.pop((p, q), None)

    def nonzero_columns(self) -> list[int]:
        return sorted({p for (p, _) in self.cells})

    def column(self, p: int) -> GradedModule:
        return GradedModule(
            {q: (r, t) for (pp, q), (r, t) in self.cells.items() if pp == p},
            self.mode,
        )

    def euler(self) -> int:
        return sum((-1) ** (p + q) * r for (p, q), (r, _) in self.cells.items())

    def copy(self) -> "E1Page":
        return E1Page(self.case_id, self.D, self.mode, dict(self.cells),
                      dict(self.labels), self.final_p)


def _simplex_column(stratum: Stratum, mode: str) -> GradedModule:
    fiber: OpenSimplex = stratum.fiber
    twist = TRIVIAL if fiber.orientable else stratum.base_twist
    base = homology(stratum.base, BOREL_MOORE, twist, mode)
    return base.shift(2 * stratum.L_dim + fiber.k - 1)


def _cone_column(stratum: Stratum, mode: str) -> GradedModule:
    fiber: OpenConeOverLink = stratum.fiber
    cone_bm = bm_open_cone(eval_link(fiber.link, mode))
    if cone_bm.is_zero():
        return GradedModule.zero(mode)
    base = homology(stratum.base, BOREL_MOORE, stratum.base_twist, mode)
    return base.tensor(cone_bm).shift(2 * stratum.L_dim)


def stratum_column(stratum: Stratum, mode: str = RATIONAL) -> GradedModule:
    """Borel-Moore homology of F_p \\ F_{p-1}, graded by total degree."""
    if isinstance(stratum.fiber, PointFiber):
        base = homology(stratum.base, BOREL_MOORE, stratum.base_twist, mode)
        return base.shift(2 * stratum.L_dim)
    if isinstance(stratum.fiber, OpenSimplex):
        return _simplex_column(stratum, mode)
    if isinstance(stratum.fiber, OpenConeOverLink):
        return _cone_column(stratum, mode)
    if isinstance(stratum.fiber, FinalColumn):
        raise ValueError("final column cells are filled by the spectral engine")
    raise TypeError(f"bad fiber {stratum.fiber!r}")


def stratum_euler_cs(stratum: Stratum) -> int:
    """chi_c of F_p \\ F_{p-1}: independent of the homology evaluation."""
    base = euler_cs_space(stratum.base)
    if isinstance(stratum.fiber, PointFiber):
        return base
    if isinstance(stratum.fiber, OpenSimplex):
        return base * (-1) ** (stratum.fiber.k - 1)
    if isinstance(stratum.fiber, OpenConeOverLink):
        return base * (1 - euler_cs(stratum.fiber.link))
    raise TypeError(f"chi_c of the final column is derived, not stratum-wise")


def assemble_E1(spec: StratificationSpec, mode: str = RATIONAL) -> E1Page:
    """Assemble the E^1 page from the stratification; the final column is
    left empty for the spectral engine."""
    if mode == INTEGRAL and spec.case_id != "quadric-p2":
        raise UnsupportedIntegral(
            f"integral coefficients are supported only for quadric-p2, not {spec.case_id}"
        )
    page = E1Page(spec.case_id, spec.D, mode)
    for stratum in spec.strata:
        page.labels[stratum.p] = (stratum.name, spec.codim(stratum.p))
        if isinstance(stratum.fiber, FinalColumn):
            page.final_p = stratum.p
            continue
        column = stratum_column(stratum, mode)
        for deg, (rank, torsion) in column.entries.items():
            q = deg - stratum.p
            if not 0 <= deg <= 2 * spec.D - 1:
                raise AssertionError(
                    f"cell at total degree {deg} outside [0, {2 * spec.D - 1}]"
                )
            page.set_cell(stratum.p, q, rank, torsion)
        chi_col = sum(
            (-1) ** d * r for d, r in column.ranks().items()
        )
        if chi_col != stratum_euler_cs(stratum):
            raise AssertionError(
                f"stratum {stratum.name!r}: homology chi {chi_col} != "
                f"stratum-wise chi_c {stratum_euler_cs(stratum)}"
            )
    return page
