"""Derivations of polynomial rings over QQ and the cancellation argument.

Polynomials are sympy ``Poly`` objects over QQ in the derivation's
variables.  Local nilpotency is certified on the variables only, which in
characteristic zero suffices for the whole ring.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Optional

import sympy

from . import linalg
from .errors import (
    InconsistentExtension,
    NotClosed,
    NotNilpotentOnInput,
    NotRestricting,
    TraceContradiction,
    UnsupportedTowerShape,
)
from .fields import QQ
from .graded import SubalgebraPresentation, filtration_basis, subduct
from .unipoly import UniPoly

PROVEN = "ProvenNilpotent"
PROVEN_NOT = "ProvenNot"
UNKNOWN = "UnknownAtBound"


# -- derivations --------------------------------------------------------------


class PolyDerivation:
    """A QQ-derivation of QQ[x_1, ..., x_n] given by the images of the variables."""

    def __init__(self, variables, images):
        self.variables = tuple(str(v) for v in variables)
        self.symbols = tuple(sympy.Symbol(v) for v in self.variables)
        if isinstance(images, dict):
            images = [images.get(v, images.get(sympy.Symbol(v), 0)) for v in self.variables]
        if len(images) != len(self.variables):
            raise ValueError("one image per variable is required")
        self.images = tuple(self.poly(im) for im in images)

    def poly(self, f) -> sympy.Poly:
        if isinstance(f, sympy.Poly):
            f = f.as_expr()
        expr = sympy.sympify(f)
        extra = expr.free_symbols - set(self.symbols)
        if extra:
            raise ValueError(f"unknown variables {sorted(map(str, extra))}")
        return sympy.Poly(expr, *self.symbols, domain="QQ")

    def __call__(self, f) -> sympy.Poly:
        f = self.poly(f)
        acc = self.poly(0)
        for x, im in zip(self.symbols, self.images):
            if not im.is_zero:
                acc = acc + im * f.diff(x)
        return acc

    def iterate(self, f, n: int) -> sympy.Poly:
        f = self.poly(f)
        for _ in range(n):
            f = self(f)
        return f

    def is_linear(self) -> bool:
        return all(im.is_zero or (im.is_homogeneous and im.total_degree() == 1)
                   for im in self.images)

    def linear_matrix(self):
        """Matrix A with D(x_j) = sum_i A[i][j] x_i, for a linear derivation."""
        n = len(self.symbols)
        A = [[Fraction(0)] * n for _ in range(n)]
        for j, im in enumerate(self.images):
            for i, x in enumerate(self.symbols):
                c = im.coeff_monomial(x)
                A[i][j] = Fraction(int(c.p), int(c.q))
        return A

    def to_json(self):
        return {v: str(im.as_expr()) for v, im in zip(self.variables, self.images)}

    def __repr__(self):
        return " + ".join(f"({im.as_expr()})*d/d{v}" for v, im in zip(self.variables, self.images)
                          if not im.is_zero) or "0"


def default_bound(D: PolyDerivation) -> int:
    """2 * (largest total degree of an image) + 4."""
    return 2 * max([im.total_degree() for im in D.images if not im.is_zero] or [0]) + 4


@dataclass
class NilpotencyVerdict:
    status: str
    indices: dict = field(default_factory=dict)  # variable -> least n with D^n x = 0
    witness: Optional[dict] = None
    bound: int = 0

    @property
    def proven(self):
        return self.status == PROVEN

    def to_json(self):
        return {"status": self.status, "indices": self.indices, "witness": self.witness,
                "bound": self.bound}


def eigen_witness(D: PolyDerivation, f) -> Optional[dict]:
    """{'f', 'Df/f'} when f divides Df and Df != 0; such D is not locally nilpotent."""
    f = D.poly(f)
    if f.is_zero:
        return None
    Df = D(f)
    if Df.is_zero:
        return None
    q, r = Df.div(f)
    if not r.is_zero:
        return None
    return {"f": str(f.as_expr()), "Df/f": str(q.as_expr())}


def _matrix_nilpotent(A) -> bool:
    n = len(A)
    M = [row[:] for row in A]
    for _ in range(n - 1):
        M = [[sum(M[i][k] * A[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    return all(x == 0 for row in M for x in row)


def is_locally_nilpotent(D: PolyDerivation, bound: Optional[int] = None) -> NilpotencyVerdict:
    bound = default_bound(D) if bound is None else bound
    if bound < 1:
        raise ValueError("bound must be at least 1")
    indices = {}
    iterates = {}
    for v, x in zip(D.variables, D.symbols):
        f = D.poly(x)
        seq = [f]
        for n in range(1, bound + 1):
            f = D(f)
            seq.append(f)
            if f.is_zero:
                indices[v] = n
                break
        iterates[v] = seq
    if len(indices) == len(D.variables):
        return NilpotencyVerdict(PROVEN, indices, None, bound)
    for v, seq in iterates.items():
        for g in seq:
            if g.is_zero or g.total_degree() < 1:
                continue
            w = eigen_witness(D, g)
            if w is not None:
                return NilpotencyVerdict(PROVEN_NOT, indices, {"kind": "eigen", **w}, bound)
    if D.is_linear() and not _matrix_nilpotent(D.linear_matrix()):
        return NilpotencyVerdict(PROVEN_NOT, indices, {"kind": "linear",
                                                       "reason": "matrix of D is not nilpotent"},
                                 bound)
    return NilpotencyVerdict(UNKNOWN, indices, None, bound)


# -- local slices ---------------------------------------------------------------


@dataclass
class SliceData:
    derivation: PolyDerivation
    s: sympy.Poly
    Ds: sympy.Poly

    @classmethod
    def make(cls, D: PolyDerivation, s):
        s = D.poly(s)
        Ds = D(s)
        if Ds.is_zero or not D(Ds).is_zero:
            raise ValueError("not a local slice: need D^2 s == 0 and D s != 0")
        return cls(D, s, Ds)


@dataclass
class SliceExpansion:
    """b == sum_i (numerators[i] / Ds^powers[i]) * s^i with every numerator in ker D."""

    numerators: list
    powers: list
    Ds: object = None

    def coefficient(self, i):
        return self.numerators[i].as_expr() / self.Ds.as_expr() ** self.powers[i]

    def to_json(self):
        return [{"numerator": str(n.as_expr()), "Ds_power": p}
                for n, p in zip(self.numerators, self.powers)]


def slice_expansion(D: PolyDerivation, sl: SliceData, b, bound: Optional[int] = None):
    """Top-down peeling of b in B_{Ds} = A_{Ds}[s]."""
    b = D.poly(b)
    bound = default_bound(D) + b.total_degree() if bound is None else bound
    zero = D.poly(0)
    coeffs = {}
    num, power = b, 0  # current element num / Ds^power
    while not num.is_zero:
        it = [num]
        while not it[-1].is_zero:
            if len(it) > bound + 1:
                raise NotNilpotentOnInput(f"iterates of {b.as_expr()} do not vanish within {bound}")
            it.append(D(it[-1]))
        q = len(it) - 2
        top = it[q] * sympy.Rational(1, factorial(q))  # in ker D
        prev_num, prev_pow = coeffs.get(q, (zero, 0))
        new_pow = max(prev_pow, power + q)
        merged = (prev_num * sl.Ds ** (new_pow - prev_pow)
                  + top * sl.Ds ** (new_pow - power - q))
        coeffs[q] = (merged, new_pow)
        num = num * sl.Ds**q - top * sl.s**q
        power = power + q
    qmax = max(coeffs) if coeffs else 0
    nums, pows = [], []
    for i in range(qmax + 1):
        n, p = coeffs.get(i, (zero, 0))
        while p > 0 and not n.is_zero:
            quo, rem = n.div(sl.Ds)
            if not rem.is_zero:
                break
            n, p = quo, p - 1
        if n.is_zero:
            p = 0
        nums.append(n)
        pows.append(p)
    return SliceExpansion(nums, pows, sl.Ds)


def reconstruct(sl: SliceData, exp: SliceExpansion) -> sympy.Poly:
    """Ds^P * sum a_i s^i with P the largest power used (clears denominators)."""
    P = max(exp.powers) if exp.powers else 0
    acc = sl.derivation.poly(0)
    for i, (n, p) in enumerate(zip(exp.numerators, exp.powers)):
        acc = acc + n * sl.Ds ** (P - p) * sl.s**i
    return acc, P


def df_in_fb_check(D: PolyDerivation, f, verdict: Optional[NilpotencyVerdict] = None) -> dict:
    """Instance of: D locally nilpotent and Df in fB imply Df = 0."""
    verdict = verdict or is_locally_nilpotent(D)
    if not verdict.proven:
        raise NotNilpotentOnInput("df_in_fb_check needs a proven locally nilpotent derivation")
    f = D.poly(f)
    Df = D(f)
    if Df.is_zero:
        return {"status": "kernel", "f": str(f.as_expr()), "Df": "0"}
    q, r = Df.div(f)
    if r.is_zero:
        return {"status": "PropertyViolated", "f": str(f.as_expr()),
                "Df": str(Df.as_expr())}
    return {"status": "vacuous", "f": str(f.as_expr()), "Df": str(Df.as_expr())}


# -- subrings of k[theta] ---------------------------------------------------------


def _uni_to_expr(p: UniPoly, sym):
    return sum((sympy.Rational(c.numerator, c.denominator) * sym**i
                for i, c in enumerate(p.coeffs)), sympy.Integer(0))


def _expr_to_uni(expr, sym, var="y") -> UniPoly:
    P = sympy.Poly(expr, sym, domain="QQ")
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs())]
    return UniPoly(QQ, coeffs, var)


class ThetaRing:
    """R = QQ[g_1(theta), ...] inside QQ[theta] with membership by subduction."""

    def __init__(self, expressions, bound=None):
        self.expressions = [UniPoly(QQ, e.coeffs, "y", raw=True) for e in expressions]
        nonconst = [e for e in self.expressions if e.degree > 0]
        self.presentation = SubalgebraPresentation(QQ, tuple(nonconst), QQ, "y")
        self.bound = bound
        self._pieces = {}

    def contains(self, f: UniPoly) -> bool:
        if f.degree <= 0:
            return True
        N = max(f.degree, self.presentation.max_degree)
        if N not in self._pieces:
            self._pieces[N] = filtration_basis(self.presentation, N)
        return subduct(f, self.presentation, N, self._pieces[N]).is_member


def _split_theta(expr, theta, others):
    """{x-monomial: UniPoly in theta} for a polynomial in theta and others."""
    P = sympy.Poly(expr, theta, *others, domain="QQ")
    out = {}
    for monom, c in P.terms():
        key = monom[1:]
        out.setdefault(key, {})[monom[0]] = Fraction(int(c.p), int(c.q))
    return {key: UniPoly(QQ, [d.get(i, 0) for i in range(max(d) + 1)], "y")
            for key, d in out.items()}


def in_R_poly(ring: ThetaRing, expr, theta, others) -> bool:
    return all(ring.contains(p) for p in _split_theta(expr, theta, others).values())


@dataclass
class Extension:
    derivation: PolyDerivation  # on QQ[theta, x...]
    dtheta: sympy.Poly
    input_verdict: NilpotencyVerdict
    verdict: NilpotencyVerdict

    def to_json(self):
        return {"Dtheta": str(self.dtheta.as_expr()),
                "input": self.input_verdict.to_json(),
                "extension": self.verdict.to_json()}


def _generator_iterates_verdict(Dext: PolyDerivation, gens, bound) -> NilpotencyVerdict:
    """Nilpotency of D on the generators of R[x], iterated through the extension."""
    indices = {}
    for name, g in gens:
        f = Dext.poly(g)
        seq = [f]
        for n in range(1, bound + 1):
            f = Dext(f)
            seq.append(f)
            if f.is_zero:
                indices[name] = n
                break
        else:
            for h in seq:
                if h.total_degree() >= 1:
                    w = eigen_witness(Dext, h)
                    if w is not None:
                        return NilpotencyVerdict(PROVEN_NOT, indices, {"kind": "eigen", **w},
                                                 bound)
            return NilpotencyVerdict(UNKNOWN, indices, None, bound)
    return NilpotencyVerdict(PROVEN, indices, None, bound)


def extend_to_normalization(expressions, images, extra_variables=(), extra_images=(),
                            bound: Optional[int] = None, theta_name="theta") -> Extension:
    """Extend D from R[x] = QQ[g_i(theta)][x] to QQ[theta][x].

    ``expressions`` are the g_i as UniPoly in theta; ``images`` give D(g_i)
    and ``extra_images`` give D(x_j), all as sympy expressions in theta and
    the x_j.  Raises NotClosed when some image leaves R[x].
    """
    theta = sympy.Symbol(theta_name)
    xs = tuple(sympy.Symbol(str(v)) for v in extra_variables)
    ring = ThetaRing(expressions)
    for im in list(images) + list(extra_images):
        if not in_R_poly(ring, sympy.sympify(im), theta, xs):
            raise NotClosed(f"D maps a generator to {im}, outside R")
    gens_T = [_uni_to_expr(UniPoly(QQ, e.coeffs, "y", raw=True), theta) for e in expressions]
    ambient = (theta,) + xs
    dtheta = None
    for g, im in zip(gens_T, images):
        gp = sympy.Poly(sympy.diff(g, theta), *ambient, domain="QQ")
        im = sympy.Poly(sympy.sympify(im), *ambient, domain="QQ")
        if gp.is_zero:
            if not im.is_zero:
                raise InconsistentExtension(f"constant generator with nonzero image {im}")
            continue
        q, r = im.div(gp)
        if not r.is_zero:
            raise InconsistentExtension(f"g'(theta) = {gp.as_expr()} does not divide {im.as_expr()}")
        if dtheta is None:
            dtheta = q
        elif q != dtheta:
            raise InconsistentExtension("generators give different values of D(theta)")
    if dtheta is None:
        dtheta = sympy.Poly(0, *ambient, domain="QQ")
    Dext = PolyDerivation((theta_name,) + tuple(map(str, xs)),
                          [dtheta.as_expr()] + [sympy.sympify(e) for e in extra_images])
    bound = default_bound(Dext) if bound is None else bound
    named = [(f"g{i + 1}", g) for i, g in enumerate(gens_T)] + [(str(x), x) for x in xs]
    input_verdict = _generator_iterates_verdict(Dext, named, bound)
    verdict = is_locally_nilpotent(Dext, bound)
    if input_verdict.proven and not verdict.proven:
        raise InconsistentExtension("extension of a locally nilpotent derivation is not "
                                    f"proven nilpotent ({verdict.status})")
    return Extension(Dext, dtheta, input_verdict, verdict)


def conductor_stability(Dext: PolyDerivation, h_theta: UniPoly, ring: Optional[ThetaRing] = None,
                        generators=()) -> dict:
    """Check D(h) in h*QQ[theta][x] for the conductor generator h(theta).

    With ``ring`` and ``generators`` given, first checks that D restricts to
    R[x] on those generators.
    """
    theta, xs = Dext.symbols[0], Dext.symbols[1:]
    if ring is not None:
        for g in generators:
            if not in_R_poly(ring, Dext(g).as_expr(), theta, xs):
                raise NotRestricting(f"D({g}) leaves R[x]")
    h = Dext.poly(_uni_to_expr(h_theta, theta))
    Dh = Dext(h)
    if Dh.is_zero:
        return {"h": str(h.as_expr()), "Dh": "0", "stable": True, "witness": "0"}
    q, r = Dh.div(h)
    return {"h": str(h.as_expr()), "Dh": str(Dh.as_expr()), "stable": r.is_zero,
            "witness": str(q.as_expr()) if r.is_zero else None}


# -- cancellation trace -------------------------------------------------------------


@dataclass
class CancellationTrace:
    generators: list
    n: int
    steps: list
    verdict: str
    conclusion: str = ""

    def to_json(self):
        return {"generators": [repr(g) for g in self.generators], "n": self.n,
                "steps": self.steps, "conclusion": self.conclusion, "verdict": self.verdict}

    def narrative(self):
        lines = [f"{i + 1}. {st['step']}: {st['equation']}"
                 f" [{'verified' if st['verified'] else 'FAILED'}]"
                 for i, st in enumerate(self.steps)]
        if self.conclusion:
            lines.append(self.conclusion)
        lines.append(self.verdict)
        return "\n".join(lines)


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def cancellation_trace(generators, n: int, images, extra_images, bound: Optional[int] = None):
    """Run the conductor argument on R = QQ[generators] with n adjoined variables.

    ``generators`` are UniPoly over QQ in the ring variable; ``images`` are
    the D(g_i) and ``extra_images`` the D(x_j) as sympy expressions in that
    variable and x1, ..., xn.
    """
    from .normalize import conductor, normalize_curve

    gens = list(generators)
    if len(extra_images) != n:
        raise ValueError("one image per adjoined variable is required")
    var = gens[0].var
    s = sympy.Symbol(var)
    xs = tuple(sympy.Symbol(f"x{j + 1}") for j in range(n))
    P = SubalgebraPresentation(QQ, tuple(gens), QQ, var)
    norm = normalize_curve(P)
    cond = conductor(P, norm)
    steps = []

    def record(step, equation, ok):
        steps.append({"step": step, "equation": equation, "verified": bool(ok)})
        if not ok:
            raise TraceContradiction(f"{step}: {equation}")

    theta_expr = _uni_to_expr(norm.theta, s)
    record("normalization", f"O = k[theta], theta = {theta_expr}",
           all(ex.compose(norm.theta.with_var("y")).with_var(var) == g
               for ex, g in zip(norm.expressions, gens)))
    h = UniPoly(QQ, [0] * (cond.exponent or 0) + [1], "y") if cond.exact else None
    if h is None:
        raise UnsupportedTowerShape("cancellation trace needs a monomial conductor")
    record("conductor", f"C = theta^{cond.exponent} * k[theta]", True)

    # rewrite the images in theta-coordinates
    T = sympy.Symbol("theta")
    def to_theta(expr):
        parts = _split_theta(sympy.sympify(expr), s, xs)
        acc = sympy.Integer(0)
        for key, p in parts.items():
            from .unipoly import adic_expansion
            ex = adic_expansion(p.with_var(var), norm.theta)
            if ex is None:
                raise NotClosed(f"{expr} is not in k[theta][x]")
            mon = sympy.Mul(*[x**a for x, a in zip(xs, key)])
            acc += _uni_to_expr(ex, T) * mon
        return acc

    img_T = [to_theta(im) for im in images]
    ext_T = [to_theta(im) for im in extra_images]
    ext = extend_to_normalization(norm.expressions, img_T, [str(x) for x in xs], ext_T, bound)
    Dext = ext.derivation
    record("Seidenberg extension", f"D(theta) = {ext.dtheta.as_expr()}", True)
    if not ext.input_verdict.proven:
        raise NotNilpotentOnInput(f"D on R^[n] is {ext.input_verdict.status}")
    record("Vasconcelos", f"extension is {ext.verdict.status}", ext.verdict.proven)
    gens_T = [_uni_to_expr(ex, T) for ex in norm.expressions] + list(xs)
    stab = conductor_stability(Dext, h, ThetaRing(norm.expressions), gens_T)
    record("conductor stability", f"D(h) = {stab['Dh']} with h = {stab['h']}", stab["stable"])
    df = df_in_fb_check(Dext, _uni_to_expr(h, T), ext.verdict)
    record("Df in fB", f"D(h) in h*B implies D(h) = 0 ({df['status']})",
           df["status"] == "kernel")
    if cond.exponent == 0:
        conclusion = "R = k[θ] is normal, no obstruction"
        verdict = "h = 1 ∈ k*; R normal, no obstruction"
    else:
        killed = all(Dext(_uni_to_expr(ex, T)).is_zero for ex in norm.expressions)
        record("D kills R", "D(g_i) = 0 for every generator", killed)
        conclusion = "D consistent with rigidity of R"
        verdict = f"Dh = 0; h = θ{str(cond.exponent).translate(_SUPERSCRIPT)} ∉ k*; D kills R"
    return CancellationTrace(gens, n, steps, verdict, conclusion)


# -- kernels -------------------------------------------------------------------------


def _monomials(nvars, N):
    out = []
    for d in range(N, -1, -1):
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def ml_intersection(variables, derivations, N: int):
    """Basis of {b : deg b <= N, D b = 0 for every D} (a lower bound for ML)."""
    syms = tuple(sympy.Symbol(str(v)) for v in variables)
    monos = _monomials(len(syms), N)

    def mono_expr(m):
        return sympy.Mul(*[x**a for x, a in zip(syms, m)])

    rows = []
    for D in derivations:
        images = [D(mono_expr(m)) for m in monos]
        keys = sorted({t for im in images for t, _ in im.terms()})
        for key in keys:
            row = []
            for im in images:
                c = im.coeff_monomial(key)
                row.append(Fraction(int(c.p), int(c.q)))
            rows.append(row)
    ns = linalg.nullspace(QQ, rows, len(monos)) if rows else [
        [Fraction(int(i == j)) for i in range(len(monos))] for j in range(len(monos))]
    E = linalg.Echelon(QQ, len(monos))
    for v in ns:
        E.insert(v)
    basis = []
    for _, vec, _ in E.reduced_rows():
        expr = sum((sympy.Rational(c.numerator, c.denominator) * mono_expr(m)
                    for c, m in zip(vec, monos) if c), sympy.Integer(0))
        basis.append(sympy.Poly(expr, *syms, domain="QQ"))
    return sorted(basis, key=lambda p: (p.total_degree(), str(p.as_expr())))


# -- Alg_{k[r]} B inside a polynomial ring in one variable ---------------------------


def jacobian_rank(polys, variables) -> int:
    syms = [sympy.Symbol(str(v)) for v in variables]
    M = sympy.Matrix([[sympy.diff(sympy.sympify(p), x) for x in syms] for p in polys])
    return M.rank(simplify=True)


def closure_pipeline(variables, D: PolyDerivation, r, closure_generators, N: Optional[int] = None):
    """Embed user-supplied generators of Alg_{k[r]} B into k[t] with t in frac(R).

    Checks that the generators are algebraic over k[r] (Jacobian rank 1) and
    lie in QQ[v] for one variable v, then runs the embedding and the
    normalization on them.
    """
    from .embed import EmbeddingProblem, construct_embedding
    from .normalize import invert_luroth, normalize_curve

    r = sympy.sympify(r)
    gens = [sympy.sympify(g) for g in closure_generators]
    if D(r).is_zero:
        raise ValueError("r must not lie in ker D")
    if jacobian_rank([r] + gens, variables) != 1:
        raise ValueError("generators are not algebraic over k[r]")
    used = set().union(*[g.free_symbols for g in gens])
    if len(used) != 1:
        raise UnsupportedTowerShape("generators must lie in k[v] for a single variable v")
    v = used.pop()
    unis = [_expr_to_uni(g, v, str(v)) for g in gens]
    P = SubalgebraPresentation(QQ, tuple(unis), QQ, str(v))
    cert = construct_embedding(EmbeddingProblem(P, N))
    norm = normalize_curve(P)
    from .unipoly import RationalFunction
    t_in_frac = None
    if cert.t_mode == "identity" or cert.c is not None:
        t = UniPoly.monomial(QQ, cert.d, 1, str(v)) if cert.t_mode == "power" else \
            UniPoly.gen(QQ, str(v))
        if cert.field_tower == QQ:
            if cert.c is not None:
                t = t * cert.c
            t_in_frac = invert_luroth([RationalFunction(u) for u in unis], RationalFunction(t))
    return {"certificate": cert, "normalization": norm, "t_in_frac": t_in_frac}
