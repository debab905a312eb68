"""Turn parsed declarations into field towers, presentations and derivations."""

from __future__ import annotations

import sympy

from ..errors import UnsupportedTowerShape
from ..fields import QQ, Field, FieldElement, adjoin_algebraic, adjoin_transcendental
from ..graded import SubalgebraPresentation
from ..lnd import PolyDerivation
from ..unipoly import UniPoly
from . import grammar
from .grammar import Name, ProblemFile


class BuildError(Exception):
    """Semantically invalid input (reducible minimal polynomial, division by zero, ...)."""

    def __init__(self, line, message):
        super().__init__(f"line {line}: {message}")
        self.line = line

    def to_json(self):
        return {"error": "BuildError", "line": self.line, "message": str(self)}


MAX_EXPONENT = 1000


def _power(a, n):
    if abs(n) > MAX_EXPONENT:
        raise ValueError(f"exponent {n} exceeds {MAX_EXPONENT}")
    if n >= 0:
        return a**n
    if isinstance(a, UniPoly):
        if a.degree != 0:
            raise ZeroDivisionError("negative power of a non-constant polynomial")
        return UniPoly(a.field, [a.coeff(0) ** n], a.var)
    return a**n


def evaluate(node, env, one):
    if isinstance(node, grammar.Num):
        return one * node.value
    if isinstance(node, grammar.Name):
        return env[node.name]
    if isinstance(node, grammar.Neg):
        return -evaluate(node.operand, env, one)
    if isinstance(node, grammar.Pow):
        return _power(evaluate(node.base, env, one), node.exponent)
    a = evaluate(node.left, env, one)
    b = evaluate(node.right, env, one)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return grammar.divide(a, b)


class Builder:
    def __init__(self, pf: ProblemFile):
        self.pf = pf
        self._fields = {}

    def field(self, name) -> Field:
        if name in self._fields:
            return self._fields[name]
        d = self.pf.fields[name]
        if d.kind == "Q":
            F = QQ
        elif d.kind == "transcendental":
            base = self.field(d.base)
            if "," in d.gen:
                raise UnsupportedTowerShape(
                    f"line {d.line}: {name} adjoins several transcendentals ({d.gen})")
            F = adjoin_transcendental(base, d.gen)
        else:
            base = self.field(d.base)
            env = {g: UniPoly(base, [base(G.gen())], d.gen) for g, G in _gen_map(base).items()}
            env[d.gen] = UniPoly.gen(base, d.gen)
            try:
                mp = evaluate(d.minpoly, env, UniPoly(base, [1], d.gen))
                mp = mp.monic()
                F = adjoin_algebraic(base, d.gen, [FieldElement(base, c) for c in mp.coeffs])
            except UnsupportedTowerShape:
                raise
            except Exception as exc:  # reducible, degree < 2, division by zero
                raise BuildError(d.line, f"cannot adjoin {d.gen}: {exc}") from exc
        self._fields[name] = F
        return F

    def element_env(self, F: Field):
        return {g: F(G.gen()) for g, G in _gen_map(F).items()}

    def presentation(self, gname) -> SubalgebraPresentation:
        g = self.pf.gens[gname]
        ring = self.pf.rings[g.ring]
        if len(ring.variables) != 1:
            raise UnsupportedTowerShape(f"{gname}: ring {ring.name} must be univariate")
        K = self.field(ring.field)
        k = self.field(g.over) if g.over else QQ
        var = ring.variables[0]
        env = {n: UniPoly(K, [x], var) for n, x in self.element_env(K).items()}
        env[var] = UniPoly.gen(K, var)
        one = UniPoly(K, [1], var)
        try:
            polys = [evaluate(e, env, one) for e in g.exprs]
            return SubalgebraPresentation(K, tuple(polys), k, var)
        except Exception as exc:
            raise BuildError(g.line, str(exc)) from exc

    def sympy_ring(self, ring_name):
        ring = self.pf.rings[ring_name]
        if self.pf.fields[ring.field].kind != "Q":
            raise UnsupportedTowerShape("derivations are supported over Q only")
        syms = {v: sympy.Symbol(v) for v in ring.variables}
        return ring, syms

    def sympy_exprs(self, ring_name, nodes, line):
        _, syms = self.sympy_ring(ring_name)
        try:
            return [sympy.expand(evaluate(n, syms, sympy.Integer(1))) for n in nodes]
        except Exception as exc:
            raise BuildError(line, str(exc)) from exc

    def derivation(self, dname) -> PolyDerivation:
        d = self.pf.derivations[dname]
        ring, syms = self.sympy_ring(d.ring)
        images = {}
        for key, val in d.pairs:
            if not isinstance(key, Name) or key.name not in syms:
                raise BuildError(d.line, "derivation keys must be ring variables here")
            images[key.name] = self.sympy_exprs(d.ring, [val], d.line)[0]
        return PolyDerivation(ring.variables, images)


def _gen_map(F: Field):
    return {G.name: G for G in F.chain[1:]}
