"""Factorization of univariate polynomials over a field tower.

Algebraic steps are removed by a norm computation (iterated resultants
against the minimal polynomials, after a shift ``x -> x - k*gamma`` that
makes the norm squarefree); the norm is factored over QQ, or over QQ[u]
when the tower has a transcendental step, with sympy.  Each irreducible
factor of the norm is pulled back by a gcd over the tower.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

from . import _poly
from .fields import AlgebraicExtension, Field, FieldElement, RationalField

_X = sympy.Symbol("_x")


def _symbols(F: Field):
    return {G.name: sympy.Symbol("_g_" + G.name) for G in F.chain[1:]}


def to_sympy(F: Field, rep, syms=None):
    syms = syms if syms is not None else _symbols(F)
    if isinstance(F, RationalField):
        return sympy.Rational(rep.numerator, rep.denominator)
    B = F.base
    g = syms[F.name]
    if isinstance(F, AlgebraicExtension):
        return sum((to_sympy(B, c, syms) * g**i for i, c in enumerate(rep)), sympy.Integer(0))
    num = sum((to_sympy(B, c, syms) * g**i for i, c in enumerate(rep[0])), sympy.Integer(0))
    den = sum((to_sympy(B, c, syms) * g**i for i, c in enumerate(rep[1])), sympy.Integer(0))
    return num / den


def from_sympy(F: Field, expr, syms=None):
    """Convert a sympy expression in the tower generators into a rep of F."""
    syms = syms if syms is not None else _symbols(F)
    expr = sympy.together(sympy.sympify(expr))
    num, den = sympy.fraction(expr)
    gens = [syms[G.name] for G in F.chain[1:]]

    def poly_rep(e):
        if not gens:
            q = sympy.Rational(e)
            return F.from_fraction(Fraction(int(q.p), int(q.q)))
        P = sympy.Poly(sympy.expand(e), *gens)
        acc = F.zero()
        gen_reps = [FieldElement(G, G.gen().rep) for G in F.chain[1:]]
        for monom, coeff in P.terms():
            term = F.from_fraction(Fraction(int(coeff.p), int(coeff.q)))
            for g, k in zip(gen_reps, monom):
                if k:
                    term = F.mul(term, F.pow(F.coerce_rep(g), k))
            acc = F.add(acc, term)
        return acc

    return F.div(poly_rep(num), poly_rep(den))


def _algebraic_steps(F: Field):
    return [G for G in F.chain[1:] if isinstance(G, AlgebraicExtension)]


def _cleared(expr, u):
    """Numerator of expr after clearing denominators (polynomial in _x, gens)."""
    num, _ = sympy.fraction(sympy.together(expr))
    return sympy.expand(num)


def _poly_expr(F, coeffs, syms, var=_X):
    return sum((to_sympy(F, c, syms) * var**i for i, c in enumerate(coeffs)), sympy.Integer(0))


def factor_over(F: Field, coeffs):
    """Factor a nonzero polynomial over ``F`` into monic irreducibles.

    ``coeffs`` are raw representations, lowest degree first.  Returns a list
    of ``(factor, multiplicity)`` with factors as raw coefficient lists.
    """
    p = _poly.trim(F, coeffs)
    if not p:
        raise ValueError("cannot factor the zero polynomial")
    p = _poly.monic(F, p)
    if len(p) == 1:
        return []
    out = []
    for part, mult in _squarefree(F, p):
        for f in _factor_squarefree(F, part):
            out.append((f, mult))
    out.sort(key=lambda fm: (len(fm[0]), repr(fm[0])))
    return out


def _squarefree(F, p):
    """Yun's squarefree decomposition (characteristic zero)."""
    out = []
    dp = _poly.deriv(F, p)
    a = _poly.gcd(F, p, dp)
    b = _poly.divmod_(F, p, a)[0]
    c = _poly.divmod_(F, dp, a)[0]
    d = _poly.sub(F, c, _poly.deriv(F, b))
    i = 1
    while len(b) > 1:
        a = _poly.gcd(F, b, d)
        b = _poly.divmod_(F, b, a)[0]
        c = _poly.divmod_(F, d, a)[0]
        if len(a) > 1:
            out.append((a, i))
        d = _poly.sub(F, c, _poly.deriv(F, b))
        i += 1
    return out


def _base_factor(expr_num, gens_free, syms_u):
    """Factor a polynomial in _x (and maybe u) over QQ; return x-dependent factors."""
    gens = [_X] + syms_u
    _, facs = sympy.factor_list(expr_num, *gens)
    return [f for f, _ in facs if sympy.degree(f, _X) > 0]


def _factor_squarefree(F, p):
    if len(p) == 2:
        return [p]
    syms = _symbols(F)
    T = F.transcendental
    syms_u = [syms[T.name]] if T is not None else []
    alg = _algebraic_steps(F)
    if not alg:
        expr = _cleared(_poly_expr(F, p, syms), syms_u)
        pieces = _base_factor(expr, None, syms_u)
        return [_poly.monic(F, _to_coeffs(F, f, syms)) for f in pieces]
    gsyms = [syms[G.name] for G in alg]
    minpolys = []
    for G in alg:
        m = _poly_expr(G.base, list(G.minpoly), syms, var=syms[G.name])
        minpolys.append(_cleared(m, syms_u))
    for shift in _shifts(len(alg)):
        gamma_expr = sum((k * g for k, g in zip(shift, gsyms)), sympy.Integer(0))
        h = _cleared(_poly_expr(F, p, syms).subs(_X, _X - gamma_expr), syms_u)
        norm = h
        for g, m in reversed(list(zip(gsyms, minpolys))):
            norm = sympy.resultant(m, norm, g)
        norm = sympy.expand(norm)
        if norm == 0:
            continue
        gcd = sympy.gcd(norm, sympy.diff(norm, _X))
        if sympy.degree(gcd, _X) > 0:
            continue
        pieces = _base_factor(norm, None, syms_u)
        if len(pieces) == 1:
            return [p]
        out = []
        gamma = F.zero()
        for k, G in zip(shift, alg):
            gamma = F.add(gamma, F.mul(F.from_int(k), F.coerce_rep(G.gen())))
        lin = [gamma, F.one()]  # x + gamma
        for piece in pieces:
            coeffs = _to_coeffs(F, piece, syms)
            shifted = _poly.compose(F, coeffs, lin)
            g = _poly.gcd(F, p, shifted)
            if len(g) > 1:
                out.append(g)
        return out
    raise RuntimeError("no separating shift found")


def _shifts(n):
    yield (0,) * n
    for bound in range(1, 6):
        for combo in itertools.product(range(-bound, bound + 1), repeat=n):
            if max(abs(c) for c in combo) == bound:
                yield combo


def _to_coeffs(F, expr, syms):
    P = sympy.Poly(expr, _X)
    deg = P.degree()
    out = [F.zero()] * (deg + 1)
    for (i,), c in P.terms():
        out[i] = from_sympy(F, c, syms)
    return _poly.trim(F, out)
