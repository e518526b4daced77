"""Serialization of stratification specs to a versioned JSON schema.

Space and link expressions are stored as tagged trees.  Unknown tags are
errors, not warnings: a spec that cannot be represented exactly must not
load at all.
"""

from __future__ import annotations

import json

from .errors import ParseError
from .grading import GradedModule
from .intlinalg import IntegerMatrix
from . import links as L
from . import spaces as S
from . import strata as T

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# graded modules


def module_to_json(g: GradedModule) -> dict:
    return {
        "mode": g.mode,
        "entries": {
            str(d): [r, [list(t) for t in tor]] for d, (r, tor) in sorted(g.entries.items())
        },
    }


def module_from_json(doc) -> GradedModule:
    try:
        entries = {
            int(d): (int(r), tuple((int(p), int(e), int(m)) for p, e, m in tor))
            for d, (r, tor) in doc["entries"].items()
        }
        return GradedModule(entries, doc["mode"])
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"bad graded module: {exc}") from exc


# ---------------------------------------------------------------------------
# space expressions


def space_to_json(x: S.SpaceExpr) -> dict:
    if isinstance(x, S.Point):
        return {"tag": "point"}
    if isinstance(x, S.Affine):
        return {"tag": "affine", "n": x.n}
    if isinstance(x, S.Proj):
        return {"tag": "proj", "n": x.n}
    if isinstance(x, S.Grassmann):
        return {"tag": "grassmann", "k": x.k, "m": x.m}
    if isinstance(x, S.Config):
        return {"tag": "config", "space": space_to_json(x.space), "k": x.k}
    if isinstance(x, S.GenericConfig):
        return {"tag": "generic_config", "n": x.n, "k": x.k}
    if isinstance(x, S.PGL):
        return {"tag": "pgl", "m": x.m}
    if isinstance(x, S.Product):
        return {"tag": "product", "left": space_to_json(x.left),
                "right": space_to_json(x.right)}
    if isinstance(x, S.Known):
        return {
            "tag": "known",
            "name": x.name,
            "provenance": x.provenance,
            "ordinary": module_to_json(x.ordinary) if x.ordinary else None,
            "borel_moore": module_to_json(x.borel_moore) if x.borel_moore else None,
        }
    raise ParseError(f"cannot serialize space {x!r}")


def space_from_json(doc) -> S.SpaceExpr:
    try:
        tag = doc["tag"]
    except (TypeError, KeyError):
        raise ParseError(f"space expression without tag: {doc!r}") from None
    try:
        if tag == "point":
            return S.Point()
        if tag == "affine":
            return S.Affine(int(doc["n"]))
        if tag == "proj":
            return S.Proj(int(doc["n"]))
        if tag == "grassmann":
            return S.Grassmann(int(doc["k"]), int(doc["m"]))
        if tag == "config":
            return S.Config(space_from_json(doc["space"]), int(doc["k"]))
        if tag == "generic_config":
            return S.GenericConfig(int(doc["n"]), int(doc["k"]))
        if tag == "pgl":
            return S.PGL(int(doc["m"]))
        if tag == "product":
            return S.Product(space_from_json(doc["left"]), space_from_json(doc["right"]))
        if tag == "known":
            return S.Known(
                doc["name"],
                doc["provenance"],
                module_from_json(doc["ordinary"]) if doc.get("ordinary") else None,
                module_from_json(doc["borel_moore"]) if doc.get("borel_moore") else None,
            )
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"bad space expression {tag!r}: {exc}") from exc
    raise ParseError(f"unknown space tag {tag!r}")


# ---------------------------------------------------------------------------
# link expressions


def link_to_json(e: L.LinkExpr) -> dict:
    if isinstance(e, L.SpaceLink):
        return {"tag": "space", "space": space_to_json(e.space)}
    if isinstance(e, L.SimplexLink):
        return {"tag": "simplex", "k": e.k}
    if isinstance(e, L.SimplexBoundary):
        return {"tag": "simplex_boundary", "k": e.k}
    if isinstance(e, L.SelfJoin):
        return {"tag": "self_join", "space": space_to_json(e.space), "k": e.k}
    if isinstance(e, L.Join):
        return {"tag": "join", "left": link_to_json(e.left), "right": link_to_json(e.right)}
    if isinstance(e, L.Cone):
        return {"tag": "cone", "base": link_to_json(e.base)}
    if isinstance(e, L.Susp):
        return {"tag": "susp", "base": link_to_json(e.base)}
    if isinstance(e, L.MVUnion):
        return {
            "tag": "mv_union",
            "pieces": [link_to_json(p) for p in e.pieces],
            "intersections": [
                {"subset": sorted(s), "link": link_to_json(x)}
                for s, x in e.intersections
            ],
        }
    if isinstance(e, L.StratifiedLink):
        return {"tag": "stratified", "strata": [_link_stratum_to_json(s) for s in e.strata]}
    if isinstance(e, L.KnownLink):
        return {"tag": "known_link", "reduced": module_to_json(e.reduced),
                "provenance": e.provenance}
    raise ParseError(f"cannot serialize link {e!r}")


def _link_stratum_to_json(s: L.LinkStratum) -> dict:
    if s.bottom is not None:
        return {"name": s.name, "bottom": link_to_json(s.bottom)}
    doc = {"name": s.name, "base": space_to_json(s.base), "twist": s.twist}
    if isinstance(s.fiber, L.ConeFiber):
        doc["fiber"] = {"kind": "open_cone", "link": link_to_json(s.fiber.link)}
    else:
        doc["fiber"] = {"kind": "supplied", "module": module_to_json(s.fiber.module),
                        "note": s.fiber.note}
    return doc


def link_from_json(doc) -> L.LinkExpr:
    try:
        tag = doc["tag"]
    except (TypeError, KeyError):
        raise ParseError(f"link expression without tag: {doc!r}") from None
    try:
        if tag == "space":
            return L.SpaceLink(space_from_json(doc["space"]))
        if tag == "simplex":
            return L.SimplexLink(int(doc["k"]))
        if tag == "simplex_boundary":
            return L.SimplexBoundary(int(doc["k"]))
        if tag == "self_join":
            return L.SelfJoin(space_from_json(doc["space"]), int(doc["k"]))
        if tag == "join":
            return L.Join(link_from_json(doc["left"]), link_from_json(doc["right"]))
        if tag == "cone":
            return L.Cone(link_from_json(doc["base"]))
        if tag == "susp":
            return L.Susp(link_from_json(doc["base"]))
        if tag == "mv_union":
            return L.mv_union(
                [link_from_json(p) for p in doc["pieces"]],
                {tuple(item["subset"]): link_from_json(item["link"])
                 for item in doc["intersections"]},
            )
        if tag == "stratified":
            return L.StratifiedLink(tuple(_link_stratum_from_json(s) for s in doc["strata"]))
        if tag == "known_link":
            return L.KnownLink(module_from_json(doc["reduced"]), doc["provenance"])
    except ParseError:
        raise
    except Exception as exc:
        raise ParseError(f"bad link expression {tag!r}: {exc}") from exc
    raise ParseError(f"unknown link tag {tag!r}")


def _link_stratum_from_json(doc) -> L.LinkStratum:
    if "bottom" in doc:
        return L.LinkStratum(doc["name"], bottom=link_from_json(doc["bottom"]))
    fiber_doc = doc["fiber"]
    if fiber_doc["kind"] == "open_cone":
        fiber = L.ConeFiber(link_from_json(fiber_doc["link"]))
    elif fiber_doc["kind"] == "supplied":
        fiber = L.SuppliedBM(module_from_json(fiber_doc["module"]), fiber_doc.get("note", ""))
    else:
        raise ParseError(f"unknown link fiber kind {fiber_doc['kind']!r}")
    return L.LinkStratum(doc["name"], base=space_from_json(doc["base"]),
                         twist=doc["twist"], fiber=fiber)


# ---------------------------------------------------------------------------
# strata and specs


def _fiber_to_json(f: T.StratumFiber) -> dict:
    if isinstance(f, T.OpenSimplex):
        return {"kind": "open_simplex", "k": f.k, "orientable": f.orientable}
    if isinstance(f, T.OpenConeOverLink):
        return {"kind": "open_cone", "link": link_to_json(f.link)}
    if isinstance(f, T.PointFiber):
        return {"kind": "point"}
    if isinstance(f, T.FinalColumn):
        return {
            "kind": "final",
            "known_link": link_to_json(f.known_link) if f.known_link else None,
        }
    raise ParseError(f"cannot serialize fiber {f!r}")


def _fiber_from_json(doc) -> T.StratumFiber:
    kind = doc.get("kind")
    if kind == "open_simplex":
        return T.OpenSimplex(int(doc["k"]), bool(doc.get("orientable", False)))
    if kind == "open_cone":
        return T.OpenConeOverLink(link_from_json(doc["link"]))
    if kind == "point":
        return T.PointFiber()
    if kind == "final":
        known = doc.get("known_link")
        return T.FinalColumn(link_from_json(known) if known else None)
    raise ParseError(f"unknown fiber kind {kind!r}")


def spec_to_json(spec: T.StratificationSpec) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "case_id": spec.case_id,
        "kind": spec.kind,
        "d": spec.d,
        "n": spec.n,
        "D": spec.D,
        "projectivize": spec.projectivize,
        "strata": [
            {
                "p": s.p,
                "name": s.name,
                "base": space_to_json(s.base),
                "twist": s.base_twist,
                "L_dim": s.L_dim,
                "fiber": _fiber_to_json(s.fiber),
            }
            for s in spec.strata
        ],
        "known_differentials": [
            {
                "from": list(d.source),
                "to": list(d.target),
                "matrix": [list(row) for row in d.matrix.entries],
            }
            for d in spec.known_differentials
        ],
    }


def spec_from_json(doc) -> T.StratificationSpec:
    if not isinstance(doc, dict):
        raise ParseError("spec document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {version!r}")
    try:
        strata = []
        for s in doc["strata"]:
            if s["L_dim"] < 0:
                raise ParseError(f"stratum {s.get('name')!r}: L_dim must be >= 0")
            if s["twist"] not in (S.TRIVIAL, S.SIGN):
                raise ParseError(f"stratum {s.get('name')!r}: bad twist {s['twist']!r}")
            strata.append(T.Stratum(
                p=int(s["p"]),
                name=s["name"],
                base=space_from_json(s["base"]),
                base_twist=s["twist"],
                L_dim=int(s["L_dim"]),
                fiber=_fiber_from_json(s["fiber"]),
            ))
        diffs = []
        for d in doc.get("known_differentials", []):
            rows = [[int(x) for x in row] for row in d["matrix"]]
            matrix = (IntegerMatrix.from_rows(rows) if rows
                      else IntegerMatrix.zero(0, 0))
            diffs.append(T.KnownDifferential(
                tuple(int(x) for x in d["from"]),
                tuple(int(x) for x in d["to"]),
                matrix,
            ))
        return T.StratificationSpec(
            case_id=doc["case_id"],
            kind=doc["kind"],
            d=int(doc["d"]),
            n=int(doc["n"]),
            D=int(doc["D"]),
            projectivize=bool(doc["projectivize"]),
            strata=tuple(strata),
            known_differentials=tuple(diffs),
        )
    except ParseError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad spec document: {exc}") from exc


def save_spec(spec: T.StratificationSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_json(spec), fh, indent=2)
        fh.write("\n")


def load_spec(path) -> T.StratificationSpec:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return spec_from_json(doc)
