"""Alexander duality, Poincaré-polynomial reporting, and the per-case
pipeline tying the catalog, the link calculus and the spectral engine
together."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import (
    AuxResult,
    ConstraintSet,
    SSResult,
    SSState,
    apply_known,
    complement_polynomial,
    fill_final_column,
    resolve,
    total_homology,
)
from .errors import NoFactorization, OutOfRange
from .grading import (
    GradedModule,
    INTEGRAL,
    PoincarePolynomial,
    RATIONAL,
    divide_by_one_plus_t,
    divide_exact,
    one_plus_t_power,
    poincare_polynomial,
)
from .strata import E1Page, StratificationSpec, assemble_E1, builtin_spec


def alexander_dual(sigma: GradedModule, D: int) -> GradedModule:
    """Reduced cohomology of the complement from H̄_*(Sigma):
    H^i = H̄_{2D-1-i} for i > 0, with the degree-0 unit added back.
    Torsion is carried across unchanged, per the duality convention."""
    entries: dict[int, tuple[int, tuple]] = {}
    for deg, (rank, torsion) in sigma.entries.items():
        if not 0 <= deg <= 2 * D - 1:
            raise OutOfRange(f"discriminant homology degree {deg} outside [0, {2 * D - 1}]")
        i = 2 * D - 1 - deg
        if i == 0:
            raise OutOfRange("discriminant homology in degree 2D-1")
        r0, t0 = entries.get(i, (0, ()))
        entries[i] = (r0 + rank, t0 + torsion)
    r0, t0 = entries.get(0, (0, ()))
    entries[0] = (r0 + 1, t0)
    return GradedModule(entries, sigma.mode)


def project_to_N(complement: PoincarePolynomial) -> PoincarePolynomial:
    """Split the C^* factor: quotient by (1 + t)."""
    return divide_by_one_plus_t(complement)


def factor_odd_generators(p: PoincarePolynomial):
    """Greedy factorization p = prod (1 + t^{a_j}), lowest surviving degree
    first, with an exact division check at every step."""
    if p.coefficient(0) != 1:
        raise NoFactorization("constant term must be 1")
    exponents = []
    rest = p
    while rest.degree() > 0:
        a = next(i for i in range(1, rest.degree() + 1) if rest.coefficient(i))
        try:
            rest = divide_exact(rest, one_plus_t_power(a))
        except Exception as exc:
            raise NoFactorization(f"stuck at factor (1 + t^{a}): {exc}") from exc
        exponents.append(a)
    if rest.coefficients != (1,):
        raise NoFactorization(f"left with {rest}")
    return exponents


@dataclass
class CaseReport:
    case_id: str
    mode: str
    D: int
    spec: StratificationSpec
    E1: E1Page
    Einf: E1Page
    aux: AuxResult
    sigma_homology: GradedModule
    complement_cohomology: GradedModule
    complement_poincare: PoincarePolynomial
    N_poincare: PoincarePolynomial | None
    factored_form: list[int] | None
    associated_graded: bool

    def factored_str(self) -> str:
        if not self.factored_form:
            return str(self.N_poincare or self.complement_poincare)
        return "".join(f"(1+t^{a})" if a > 1 else "(1+t)" for a in self.factored_form)


def compute_case(
    spec_or_id: str | StratificationSpec,
    mode: str = RATIONAL,
    constraints: ConstraintSet | None = None,
) -> CaseReport:
    """Run the whole method on one case: assemble E^1, fill the final
    column through the auxiliary resolution, apply pinned differentials,
    resolve, and dualize."""
    spec = builtin_spec(spec_or_id) if isinstance(spec_or_id, str) else spec_or_id
    page = assemble_E1(spec, mode)
    page, aux = fill_final_column(spec, page)
    state = SSState(page)
    for diff in spec.known_differentials:
        state = apply_known(state, diff)
    if constraints is None:
        constraints = ConstraintSet(stein_bound=spec.D)
    result = resolve(state, constraints)
    sigma = total_homology(result)
    complement = alexander_dual(sigma, spec.D)
    poly = complement_polynomial(sigma, spec.D)
    n_poly = project_to_N(poly) if spec.projectivize else None
    try:
        factored = factor_odd_generators(poly)
    except NoFactorization:
        factored = None
    return CaseReport(
        case_id=spec.case_id,
        mode=mode,
        D=spec.D,
        spec=spec,
        E1=page,
        Einf=result.Einf,
        aux=aux,
        sigma_homology=sigma,
        complement_cohomology=complement,
        complement_poincare=poly,
        N_poincare=n_poly,
        factored_form=factored,
        associated_graded=result.associated_graded,
    )


def smale_hirsch_check() -> bool:
    """The gradient embedding of cubic polynomials into quadratic vector
    fields induces an isomorphism on rational cohomology: the two complement
    Poincaré polynomials agree."""
    cubic = compute_case("cubic-p2")
    vf = compute_case("vf-222")
    return cubic.complement_poincare == vf.complement_poincare


# ---------------------------------------------------------------------------
# rendering


def _cell_symbol(rank: int, torsion: tuple, mode: str) -> str:
    sym = "Z" if mode == INTEGRAL else "R"
    parts = []
    if rank == 1:
        parts.append(sym)
    elif rank > 1:
        parts.append(f"{sym}^{rank}")
    for (p, e, m) in torsion:
        t = f"{sym}_{p ** e}"
        parts.append(t if m == 1 else f"{t}^{m}")
    return "+".join(parts)


def render_table(page: E1Page, title: str = "") -> str:
    """Rows q descending, columns p ascending, mimicking the source figures;
    column heads carry the raw codimension subscript."""
    if not page.cells:
        return (title + "\n" if title else "") + "(empty page)"
    ps = sorted({p for (p, _) in page.cells} | set(page.labels))
    qs = sorted({q for (_, q) in page.cells})
    heads = []
    for p in ps:
        label = page.labels.get(p)
        heads.append(f"{p}({label[1]})" if label else str(p))
    width = max(
        [len(h) for h in heads]
        + [len(_cell_symbol(r, t, page.mode)) for (r, t) in page.cells.values()]
    ) + 1
    lines = []
    if title:
        lines.append(title)
    lines.append("q\\p |" + "".join(h.rjust(width) for h in heads))
    lines.append("-" * (5 + width * len(ps)))
    for q in range(max(qs), min(qs) - 1, -1):
        row = [f"{q:4d}|"]
        for p in ps:
            rank, torsion = page.cells.get((p, q), (0, ()))
            row.append(_cell_symbol(rank, torsion, page.mode).rjust(width) if rank or torsion
                       else " " * width)
        lines.append("".join(row).rstrip())
    return "\n".join(lines)


def report_text(report: CaseReport) -> str:
    lines = [
        f"case {report.case_id}  (coefficients: {report.mode}, D = {report.D})",
        "",
        render_table(report.E1, "E^1 page:"),
        "",
    ]
    if report.Einf.cells == report.E1.cells:
        lines.append("E^infinity = E^1 (the sequence degenerates at the first term)")
    else:
        lines.append(render_table(report.Einf, "E^infinity page:"))
    lines += [
        "",
        f"H̄_*(Sigma){' [associated graded]' if report.associated_graded else ''}: "
        + report.sigma_homology.describe(),
        f"H^*(complement): {report.complement_cohomology.describe()}",
        f"complement Poincaré polynomial: {report.complement_poincare}",
    ]
    if report.N_poincare is not None:
        lines.append(f"N Poincaré polynomial: {report.N_poincare}")
    if report.factored_form:
        lines.append(f"factored: {report.factored_str()}")
    return "\n".join(lines)


def report_json(report: CaseReport) -> str:
    def cells(page: E1Page):
        return [
            {"p": p, "q": q, "rank": r, "torsion": [list(t) for t in tor]}
            for (p, q), (r, tor) in sorted(page.cells.items())
        ]

    def module(g: GradedModule):
        return {
            str(d): {"rank": r, "torsion": [list(t) for t in tor]}
            for d, (r, tor) in sorted(g.entries.items())
        }

    doc = {
        "schema_version": 1,
        "case_id": report.case_id,
        "coefficients": report.mode,
        "D": report.D,
        "E1": cells(report.E1),
        "Einf": cells(report.Einf),
        "sigma_homology": module(report.sigma_homology),
        "sigma_is_associated_graded": report.associated_graded,
        "complement_cohomology": module(report.complement_cohomology),
        "complement_poincare": list(report.complement_poincare.coefficients),
        "N_poincare": (list(report.N_poincare.coefficients)
                       if report.N_poincare is not None else None),
        "factored_form": report.factored_form,
    }
    return json.dumps(doc, indent=2)
