"""JSON forms of towers, elements, polynomials and embedding certificates.

Elements and polynomials are written as expression strings in the problem
grammar, so certificates can be read back with the same parser.
"""

from __future__ import annotations

from ..embed import EmbeddingCertificate
from ..fields import QQ, Field, FieldElement, FunctionField, adjoin_algebraic
from ..unipoly import UniPoly
from . import grammar
from .build import evaluate

SCHEMA = 1


def element_str(x: FieldElement) -> str:
    return repr(x)


def poly_str(p: UniPoly) -> str:
    return repr(p)


def tower_to_json(F: Field):
    steps = []
    for G in F.chain[1:]:
        if isinstance(G, FunctionField):
            steps.append({"kind": "transcendental", "name": G.name})
        else:
            mp = UniPoly(G.base, list(G.minpoly), G.name, raw=True)
            steps.append({"kind": "algebraic", "name": G.name, "minpoly": poly_str(mp)})
    return steps


def tower_from_json(steps) -> Field:
    F = QQ
    for st in steps:
        if st["kind"] == "transcendental":
            F = FunctionField(F, st["name"])
        elif st["kind"] == "algebraic":
            mp = parse_poly(F, st["minpoly"], st["name"])
            F = adjoin_algebraic(F, st["name"], [FieldElement(F, c) for c in mp.coeffs])
        else:
            raise ValueError(f"unknown tower step {st['kind']!r}")
    return F


def parse_element(F: Field, text: str) -> FieldElement:
    node = grammar.parse_expression(text)
    env = {G.name: F(G.gen()) for G in F.chain[1:]}
    return evaluate(node, env, F(1))


def parse_poly(F: Field, text: str, var: str) -> UniPoly:
    node = grammar.parse_expression(text)
    env = {G.name: UniPoly(F, [F(G.gen())], var) for G in F.chain[1:]}
    env[var] = UniPoly.gen(F, var)
    return evaluate(node, env, UniPoly(F, [1], var))


def _expr_json(expr, k):
    return [{"exponents": list(e), "coefficient": element_str(FieldElement(k, v.rep)
                                                             if isinstance(v, FieldElement)
                                                             else FieldElement(k, v))}
            for e, v in sorted(expr.items(), reverse=True)]


def certificate_to_json(cert: EmbeddingCertificate, problem) -> dict:
    k = problem.presentation.k
    out = {
        "case": cert.case,
        "field_tower": tower_to_json(cert.field_tower),
        "t": cert.t,
        "d": cert.d,
        "images": [poly_str(p) for p in cert.images],
        "adjunctions": cert.adjunctions,
        "verification": cert.verification,
        "t_mode": cert.t_mode,
        "c": element_str(cert.c) if cert.c is not None else None,
        "e": cert.e,
        "r_expression": _expr_json(cert.r_expression, k),
        "reparametrization": list(cert.reparametrization) if cert.reparametrization else None,
        "point": element_str(cert.point) if cert.point is not None else None,
        "bound": problem.bound,
        "seed": problem.seed,
        "rejected": cert.rejected,
        "coefficient_report": (cert.coefficient_report.to_json()
                               if cert.coefficient_report is not None else None),
    }
    return out


def certificate_from_json(data: dict, k: Field) -> EmbeddingCertificate:
    F = tower_from_json(data["field_tower"])
    images = [parse_poly(F, s, "t") for s in data["images"]]
    c = parse_element(F, data["c"]) if data.get("c") else None
    r_expr = {tuple(item["exponents"]): parse_element(k, item["coefficient"])
              for item in data.get("r_expression", [])}
    rep = tuple(data["reparametrization"]) if data.get("reparametrization") else None
    return EmbeddingCertificate(
        case=data["case"], field_tower=F, images=images, d=int(data["d"]), t=data["t"],
        t_mode=data["t_mode"], c=c, e=int(data.get("e", 1)), r_expression=r_expr,
        adjunctions=data.get("adjunctions", []), reparametrization=rep,
    )
