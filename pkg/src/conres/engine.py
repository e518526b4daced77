"""Resolution of the main spectral sequence.

Known differentials (the quadric's multiplication-by-2 maps) are applied as
matrices.  Everything else is settled by exhaustive enumeration of
differential support patterns, filtered by the two global constraints:

* Stein vanishing: the complement is a Stein manifold of complex dimension
  D, so H̄_j of the discriminant vanishes for j < D - 1;
* the C^*-factor: the complement's Poincaré polynomial is divisible by
  (1 + t) with a non-negative quotient.

A unique surviving pattern is the answer; several is Ambiguous (a
first-class, tested outcome); none is Inconsistent and indicates a bad
stratification.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .errors import Ambiguous, Inconsistent, ShapeMismatch
from .grading import (
    GradedModule,
    INTEGRAL,
    PoincarePolynomial,
    divide_by_one_plus_t,
)
from .intlinalg import smith_normal_form, _torsion_from_invariants
from .links import KnownLink
from .strata import E1Page, FinalColumn, KnownDifferential, StratificationSpec

Cell = tuple[int, int]


@dataclass
class SSState:
    page: E1Page
    page_index: int = 1
    applied_differentials: list = field(default_factory=list)
    resolved: bool = False


@dataclass(frozen=True)
class ConstraintSet:
    """Global constraints available to the resolver."""

    stein_bound: int  # complex dimension D of the complement
    one_plus_t: bool = True


@dataclass
class SSResult:
    case_id: str
    mode: str
    E1: E1Page
    Einf: E1Page
    pattern: tuple
    associated_graded: bool

    def total_homology(self) -> GradedModule:
        return total_homology(self)


def apply_known(state: SSState, diff: KnownDifferential) -> SSState:
    """Apply one pinned differential matrix; integral mode produces torsion
    through the Smith form."""
    (sp, sq), (tp, tq) = diff.source, diff.target
    r = sp - tp
    if r < 1 or tq != sq + r - 1:
        raise ShapeMismatch(f"{diff.source} -> {diff.target} is not a d_{r} bidegree")
    page = state.page.copy()
    rank_s, tor_s = page.cells.get((sp, sq), (0, ()))
    rank_t, tor_t = page.cells.get((tp, tq), (0, ()))
    m = diff.matrix
    if (m.rows, m.cols) != (rank_t, rank_s):
        raise ShapeMismatch(
            f"matrix is {m.rows}x{m.cols}, cells have ranks {rank_t}, {rank_s}"
        )
    invariants = smith_normal_form(m)
    rk = len(invariants)
    new_tor_t = tor_t
    if page.mode == INTEGRAL:
        new_tor_t = tor_t + _torsion_from_invariants(invariants)
    page.set_cell(sp, sq, rank_s - rk, tor_s)
    page.set_cell(tp, tq, rank_t - rk, new_tor_t)
    return SSState(page, state.page_index,
                   state.applied_differentials + [diff], state.resolved)


# ---------------------------------------------------------------------------
# support-pattern enumeration

Arrow = tuple[int, Cell, Cell, int]  # (page r, source, target, rank)


def _enumerate_patterns(ranks: dict[Cell, int]):
    """All ways of running the spectral sequence on free ranks: at page r a
    differential of rank k from (p, q) to (p-r, q+r-1) consumes k from both
    cells; a cell's outgoing plus incoming ranks never exceed what it has.
    Yields (final_ranks, pattern)."""
    live = {c: r for c, r in ranks.items() if r > 0}
    if not live:
        yield {}, ()
        return
    ps = [p for (p, _) in live]
    r_max = max(ps) - min(ps)

    def run_page(r, current, pattern):
        if r > r_max:
            yield dict(current), tuple(pattern)
            return
        arrows = sorted(
            (src, (src[0] - r, src[1] + r - 1))
            for src in current
            if current[src] > 0 and current.get((src[0] - r, src[1] + r - 1), 0) > 0
        )
        if not arrows:
            yield from run_page(r + 1, current, pattern)
            return

        def assign(i, used, chosen):
            if i == len(arrows):
                nxt = dict(current)
                for (src, tgt), k in chosen:
                    nxt[src] -= k
                    nxt[tgt] -= k
                extra = [(r, src, tgt, k) for (src, tgt), k in chosen if k > 0]
                yield from run_page(r + 1, nxt, pattern + extra)
                return
            src, tgt = arrows[i]
            cap = min(current[src] - used.get(src, 0), current[tgt] - used.get(tgt, 0))
            for k in range(cap + 1):
                nu = dict(used)
                nu[src] = nu.get(src, 0) + k
                nu[tgt] = nu.get(tgt, 0) + k
                yield from assign(i + 1, nu, chosen + [((src, tgt), k)])

        yield from assign(0, {}, [])

    yield from run_page(1, live, [])


def _dedupe(candidates):
    seen = {}
    for final, pattern in candidates:
        key = tuple(sorted((c, r) for c, r in final.items() if r))
        if key not in seen:
            seen[key] = (final, pattern)
    return list(seen.values())


# ---------------------------------------------------------------------------
# the final column via the auxiliary page


@dataclass
class AuxResult:
    cells: dict[Cell, int]
    survivors: dict[Cell, int]
    reduced: GradedModule
    final_cells: dict[Cell, int]
    candidates: list


def final_column_aux(spec: StratificationSpec, page: E1Page) -> AuxResult:
    """Build the auxiliary page for the order complex below the final
    stratum (each main column shifted down by twice its L_dim; the column-1
    shift restores the unreduced degree-0 unit cell), resolve it under the
    Stein constraint, and return the reduced survivors re-indexed as final
    column cells.

    The Stein constraint: a survivor of total degree j feeds the final main
    column at total degree j+1, which survives to H̄_{j+1} of the
    discriminant; degrees with j+1 < D-1 are therefore forbidden.
    """
    final = spec.strata[-1]
    if not isinstance(final.fiber, FinalColumn):
        raise ValueError("last stratum is not a final column")
    P = final.p
    shifts = {s.p: 2 * s.L_dim for s in spec.strata}
    aux: dict[Cell, int] = {}
    for (p, q), (rank, _) in page.cells.items():
        if p == P:
            continue
        aux[(p, q - shifts[p])] = rank

    def admissible(final_ranks):
        unit = 0
        for (p, q), r in final_ranks.items():
            if r == 0:
                continue
            j = p + q
            if j == 0:
                unit += r
            elif j + 1 < spec.D - 1:
                return False
        return unit == 1

    candidates = _dedupe(
        (final, pattern)
        for final, pattern in _enumerate_patterns(aux)
        if admissible(final)
    )
    if not candidates:
        raise Inconsistent(
            f"{spec.case_id}: no auxiliary differential pattern satisfies the Stein bound"
        )

    def reduced_of(final_ranks) -> GradedModule:
        degs: dict[int, int] = {}
        for (p, q), r in final_ranks.items():
            if r:
                degs[p + q] = degs.get(p + q, 0) + r
        degs[0] = degs.get(0, 0) - 1
        return GradedModule.from_ranks(degs)

    known = final.fiber.known_link
    if known is not None:
        matches = [
            (f, pat) for f, pat in candidates
            if reduced_of(f).ranks() == known.reduced.ranks()
        ]
        if not matches:
            raise Inconsistent(
                f"{spec.case_id}: the cited link {known.provenance!r} matches no "
                f"consistent auxiliary pattern"
            )
        survivors, pattern = matches[0]
    elif len(candidates) > 1:
        raise Ambiguous(
            f"{spec.case_id}: {len(candidates)} auxiliary differential patterns "
            f"are consistent with the Stein bound",
            candidates=[reduced_of(f).ranks() for f, _ in candidates],
        )
    else:
        survivors, pattern = candidates[0]

    reduced = reduced_of(survivors)
    if known is not None:
        reduced = known.reduced  # keeps integral data of the citation
    final_cells = {
        (P, deg + 1 - P): rank for deg, rank in reduced.ranks().items()
    }
    return AuxResult(aux, {c: r for c, r in survivors.items() if r},
                     reduced, final_cells,
                     [f for f, _ in candidates])


def fill_final_column(spec: StratificationSpec, page: E1Page) -> tuple[E1Page, AuxResult]:
    aux = final_column_aux(spec, page)
    out = page.copy()
    for (p, q), rank in aux.final_cells.items():
        torsion = ()
        if out.mode == INTEGRAL:
            torsion = aux.reduced.torsion(p + q - 1)
        out.set_cell(p, q, rank, torsion)
    return out, aux


# ---------------------------------------------------------------------------
# resolution of the main sequence


def _sigma_homology(cells: dict[Cell, tuple[int, tuple]], mode: str) -> GradedModule:
    entries: dict[int, tuple[int, tuple]] = {}
    for (p, q), (rank, torsion) in cells.items():
        deg = p + q
        r0, t0 = entries.get(deg, (0, ()))
        entries[deg] = (r0 + rank, t0 + torsion)
    return GradedModule(entries, mode)


def complement_polynomial(sigma: GradedModule, D: int) -> PoincarePolynomial:
    """Poincaré polynomial of the complement: the Alexander-dual ranks plus
    the unit in degree 0."""
    coeffs = {0: 1}
    for deg, rank in sigma.ranks().items():
        i = 2 * D - 1 - deg
        if i <= 0:
            raise AssertionError(f"discriminant homology in degree {deg} >= 2D-1")
        coeffs[i] = coeffs.get(i, 0) + rank
    return PoincarePolynomial.from_dict(coeffs)


def _passes(sigma: GradedModule, constraints: ConstraintSet) -> bool:
    for deg, (rank, torsion) in sigma.entries.items():
        if (rank or torsion) and deg < constraints.stein_bound - 1:
            return False
    if constraints.one_plus_t:
        try:
            divide_by_one_plus_t(complement_polynomial(sigma, constraints.stein_bound))
        except Exception:
            return False
    return True


def resolve(state: SSState, constraints: ConstraintSet) -> SSResult:
    """Enumerate the remaining differential patterns and keep those whose
    total H̄_*(Sigma) satisfies the constraints."""
    page = state.page
    ranks = {c: r for c, (r, _) in page.cells.items() if r}
    torsions = {c: t for c, (_, t) in page.cells.items() if t}
    admitted = []
    for final, pattern in _dedupe(_enumerate_patterns(ranks)):
        cells: dict[Cell, tuple[int, tuple]] = {}
        for c, r in final.items():
            if r:
                cells[c] = (r, cells.get(c, (0, ()))[1])
        for c, t in torsions.items():
            r0, _ = cells.get(c, (0, ()))
            cells[c] = (r0, t)
        sigma = _sigma_homology(cells, page.mode)
        if _passes(sigma, constraints):
            admitted.append((cells, pattern))
    if not admitted:
        raise Inconsistent(
            f"{page.case_id}: no differential pattern satisfies the constraints"
        )
    if len(admitted) > 1:
        raise Ambiguous(
            f"{page.case_id}: {len(admitted)} differential patterns satisfy the "
            f"constraints",
            candidates=[c for c, _ in admitted],
        )
    cells, pattern = admitted[0]
    einf = E1Page(page.case_id, page.D, page.mode, dict(cells),
                  dict(page.labels), page.final_p)
    state.resolved = True
    return SSResult(
        case_id=page.case_id,
        mode=page.mode,
        E1=page,
        Einf=einf,
        pattern=state.applied_differentials + list(pattern),
        associated_graded=(page.mode == INTEGRAL),
    )


def total_homology(result: SSResult) -> GradedModule:
    """H̄_*(Sigma): direct sum across anti-diagonals of E^infinity (the
    associated graded in integral mode, flagged as such on the result)."""
    return _sigma_homology(result.Einf.cells, result.mode)
