"""Lüroth generators, normalization ``O = k[theta]`` and conductors.

Everything here lives in ``k[s]`` or ``k(s)`` for a field tower ``k``
without a free transcendental on top of the one represented by ``s``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from . import linalg
from .errors import AllConstant, InconsistentSystem, UnsupportedTowerShape, VerificationFailed
from .fields import Field, FieldElement, adjoin_transcendental
from .graded import SubalgebraPresentation, filtration_basis, subduct
from .semigroup import NumericalSemigroup
from .unipoly import RationalFunction, UniPoly, adic_expansion, euclidean_gcd


def _aux_field(k: Field, base="y"):
    name, i = base, 0
    while name in k.generators:
        i += 1
        name = f"{base}{i}"
    return adjoin_transcendental(k, name)


def _as_rational(f) -> RationalFunction:
    return f if isinstance(f, RationalFunction) else RationalFunction(f)


def kernel_polynomial(f: RationalFunction, Fy: Field) -> UniPoly:
    """num(x)*den(y) - num(y)*den(x) as a polynomial in x over k(y)."""
    k = f.field
    num = UniPoly(Fy, [Fy.coerce_rep(FieldElement(k, c)) for c in f.num.coeffs], "x", raw=True)
    den = UniPoly(Fy, [Fy.coerce_rep(FieldElement(k, c)) for c in f.den.coeffs], "x", raw=True)
    num_y = FieldElement(Fy, Fy.from_polys(list(f.num.coeffs)))
    den_y = FieldElement(Fy, Fy.from_polys(list(f.den.coeffs)))
    return num * den_y - den * num_y


def luroth_gcd(functions) -> UniPoly:
    """Monic gcd over k(y)[x] of the kernel polynomials of the functions."""
    fs = [_as_rational(f) for f in functions]
    fs = [f for f in fs if not f.is_constant()]
    if not fs:
        raise AllConstant("every function is constant")
    Fy = _aux_field(fs[0].field)
    g = kernel_polynomial(fs[0], Fy)
    for f in fs[1:]:
        g = euclidean_gcd(g, kernel_polynomial(f, Fy))
    return g.monic()


def normalize_polynomial(f: UniPoly) -> UniPoly:
    """Monic with zero constant term."""
    return (f - f.coeff(0)).monic()


def luroth_generator(functions, verify: bool = True) -> RationalFunction:
    """A generator t0 of the subfield k(f_1, ..., f_m) of k(s).

    A single non-constant function is returned as is.  Otherwise t0 is the
    first non-constant coefficient of the gcd of the kernel polynomials,
    normalized to monic with zero constant term when it is a polynomial.
    """
    fs = [_as_rational(f) for f in functions]
    nonconst = [f for f in fs if not f.is_constant()]
    if not nonconst:
        raise AllConstant("every function is constant")
    if len(nonconst) == 1:
        t0 = nonconst[0]
    else:
        g = luroth_gcd(nonconst)
        Fy = g.field
        k = nonconst[0].field
        var = nonconst[0].var
        t0 = None
        for c in g.coeffs:
            x = FieldElement(Fy, c)
            if not x.is_constant_in_u():
                num, den = c
                t0 = RationalFunction(UniPoly(k, list(num), var, raw=True),
                                      UniPoly(k, list(den), var, raw=True))
                break
        if t0 is None:  # pragma: no cover - gcd has x - y as a factor
            raise InconsistentSystem("kernel gcd has constant coefficients")
        if t0.is_polynomial():
            t0 = RationalFunction(normalize_polynomial(t0.num))
    if verify:
        for f in fs:
            if express_rational(f, t0) is None:
                raise VerificationFailed("luroth", {"function": repr(f), "generator": repr(t0)})
        if len(nonconst) > 1 and invert_luroth(fs, t0) is None:
            raise VerificationFailed("luroth", {"generator": repr(t0),
                                                "reason": "not found in k(f) within the bound"})
    return t0


def _poly_rows(k, polys, length):
    """Matrix rows (one per s-degree) for a list of column polynomials."""
    rows = []
    for n in range(length):
        row = [p.coeffs[n] if n < len(p.coeffs) else k.zero() for p in polys]
        if any(not k.is_zero(x) for x in row):
            rows.append(row)
    return rows


def express_rational(f: RationalFunction, t0: RationalFunction):
    """(P, Q) over k with f == P(t0)/Q(t0), or None."""
    f, t0 = _as_rational(f), _as_rational(t0)
    k = f.field
    if f.is_constant():
        return UniPoly(k, [f.num.coeffs[0] if f.num else 0], "y"), UniPoly(k, [1], "y")
    e = t0.degree
    if f.degree % e:
        return None
    m = f.degree // e
    N, D = t0.num, t0.den
    basis = [N**j * D ** (m - j) for j in range(m + 1)]
    cols = [f.den * b for b in basis] + [-(f.num * b) for b in basis]
    length = max(len(c.coeffs) for c in cols)
    ns = linalg.nullspace(k, _poly_rows(k, cols, length), len(cols))
    for vec in ns:
        P = UniPoly(k, vec[: m + 1], "y", raw=True)
        Q = UniPoly(k, vec[m + 1:], "y", raw=True)
        if Q:
            return P, Q
    return None


def invert_luroth(functions, t0: RationalFunction, max_degree: int = 3):
    """Express t0 = P(f)/Q(f) with P, Q of total degree <= max_degree, or None.

    Returns (P, Q) as dicts {exponent tuple: k-element}.
    """
    fs = [_as_rational(f) for f in functions]
    k = fs[0].field
    for B in range(1, max_degree + 1):
        exps = [e for e in product(range(B + 1), repeat=len(fs)) if sum(e) <= B]
        cleared = []
        for e in exps:
            term = UniPoly(k, [1], fs[0].var)
            for f, a in zip(fs, e):
                term = term * f.num**a * f.den ** (B - a)
            cleared.append(term)
        cols = [t0.den * c for c in cleared] + [-(t0.num * c) for c in cleared]
        length = max(len(c.coeffs) for c in cols)
        ns = linalg.nullspace(k, _poly_rows(k, cols, length), len(cols))
        for vec in ns:
            # den(t0)*P(f) == num(t0)*Q(f)
            P = {e: FieldElement(k, v) for e, v in zip(exps, vec[: len(exps)]) if not k.is_zero(v)}
            Q = {e: FieldElement(k, v) for e, v in zip(exps, vec[len(exps):]) if not k.is_zero(v)}
            if Q:
                return P, Q
    return None


# -- normalization ----------------------------------------------------------------


@dataclass
class NormalizationResult:
    theta: UniPoly
    e: int
    expressions: list  # UniPoly in y with generator_i == expressions[i](theta)
    luroth: RationalFunction

    def to_json(self):
        return {
            "theta": repr(self.theta),
            "e": self.e,
            "expressions": [repr(g) for g in self.expressions],
            "luroth": repr(self.luroth),
        }


def solve_theta(t0: RationalFunction) -> UniPoly:
    """Monic polynomial theta with zero constant term and k(theta) == k(t0).

    Solves sum_j theta_j*(x^j - y^j) == 0 modulo the kernel polynomial of t0
    in k(y)[x], with theta_e = 1 and theta_0 = 0.
    """
    k = t0.field
    e = t0.degree
    if t0.is_polynomial() and t0.num.degree == e:
        cand = normalize_polynomial(t0.num)
    Fy = _aux_field(k)
    G = kernel_polynomial(t0, Fy)
    y = FieldElement(Fy, Fy.gen().rep)
    residues = []
    for j in range(1, e + 1):
        xj = UniPoly.monomial(Fy, j, 1, "x")
        r = xj % G - UniPoly(Fy, [y**j], "x")
        residues.append(r)
    reps = [c for r in residues for c in r.coeffs]
    D = linalg.common_u_denominator(Fy, reps)
    coords = []
    for r in residues:
        cs = {}
        for i, c in enumerate(r.coeffs):
            for key, v in linalg.coordinates(Fy, k, Fy.mul(c, D.rep)).items():
                cs[(i, key)] = v
        coords.append(cs)
    keys = sorted({key for cs in coords for key in cs})
    rows = [[cs.get(key, k.zero()) for cs in coords] for key in keys]
    ns = linalg.nullspace(k, rows, e)
    sols = [v for v in ns if not k.is_zero(v[e - 1])]
    if len(ns) != 1 or not sols:
        raise InconsistentSystem(f"theta system has {len(ns)} independent solutions")
    v = sols[0]
    lead = k.inv(v[e - 1])
    theta = UniPoly(k, [k.zero()] + [k.mul(lead, x) for x in v], t0.var, raw=True)
    if t0.is_polynomial() and t0.num.degree == e and theta != cand:
        raise InconsistentSystem("theta differs from the normalized polynomial generator")
    return theta


def normalize_curve(P: SubalgebraPresentation, N: Optional[int] = None) -> NormalizationResult:
    """Integral closure O = k[theta] of R = k[generators] inside k[s]."""
    if P.ambient != P.k:
        raise UnsupportedTowerShape("normalize_curve needs generators with coefficients in k")
    gens = [g for g in P.generators]
    t0 = luroth_generator([RationalFunction(g) for g in gens if g.degree > 0])
    theta = solve_theta(t0)
    exprs = []
    for g in gens:
        ex = adic_expansion(g, theta)
        if ex is None:
            raise InconsistentSystem(f"{g} is not a polynomial in {theta}")
        exprs.append(ex)
    return NormalizationResult(theta, theta.degree, exprs, t0)


# -- conductor --------------------------------------------------------------------


@dataclass
class ConductorResult:
    exact: bool
    exponent: Optional[int]  # c with conductor = theta^c * k[theta], semigroup case
    generator: UniPoly  # theta^c, or the least-degree element found
    elements: list = field(default_factory=list)  # bounded basis in s
    bound: Optional[int] = None
    semigroup: Optional[NumericalSemigroup] = None

    def to_json(self):
        out = {
            "exact": self.exact,
            "exponent": self.exponent,
            "generator": repr(self.generator),
            "bound": self.bound,
        }
        if self.semigroup is not None:
            out["semigroup"] = self.semigroup.to_json()
        if not self.exact:
            out["elements"] = [repr(a) for a in self.elements]
        return out


def _is_monomial(g: UniPoly) -> bool:
    """A monomial up to its constant term."""
    return sum(1 for c in g.coeffs[1:] if not g.field.is_zero(c)) == 1


def conductor(P: SubalgebraPresentation, norm: NormalizationResult,
              N: Optional[int] = None) -> ConductorResult:
    """Conductor of R in O = k[theta]: exact for monomial expressions, else bounded."""
    theta = norm.theta
    exps = [ex for ex in norm.expressions if ex.degree > 0]
    if all(_is_monomial(ex) for ex in exps):
        sg = NumericalSemigroup.from_elements([ex.degree for ex in exps])
        c = sg.conductor_exponent if sg.d == 1 else None
        if c is None:  # pragma: no cover - theta generates frac(R)
            raise InconsistentSystem("expressions do not generate frac(R)")
        return ConductorResult(True, c, theta**c, [theta**c], N, sg)
    if N is None:
        N = 2 * P.max_degree + 2 * norm.e
    elements = bounded_conductor(P, theta, N)
    gen = elements[0] if elements else UniPoly(P.k, [], P.var)
    return ConductorResult(False, None, gen, elements, N, None)


def _span_echelon(k, polys, N):
    E = linalg.Echelon(k, N + 1)
    for p in polys:
        E.insert(_svec(k, p, N))
    return E


def _svec(k, p: UniPoly, N):
    """Coefficient vector with the highest degree first."""
    return [p.coeffs[n] if n < len(p.coeffs) else k.zero() for n in range(N, -1, -1)]


def _exact_degree_rows(k, E, lead_index):
    """Reduced rows of an echelon whose pivot sits at ``lead_index``."""
    return [vec for p, vec, _ in E.reduced_rows() if p == lead_index]


def bounded_conductor(P: SubalgebraPresentation, theta: UniPoly, N: int):
    """Conductor elements of R found up to degree N, one row per leading degree.

    For every n <= N - deg(theta), the elements a of R of degree n with
    a*theta^j in R for all j with n + j*deg(theta) <= N are computed by a
    nullspace; a reduced representative of each leading degree is returned.
    """
    k = P.k
    piece = filtration_basis(P, N)
    basis = sorted((elem for n in range(N + 1) for _, elem, _ in piece.leading[n]),
                   key=lambda f: f.degree)
    W = _span_echelon(k, basis, N)
    e = theta.degree
    out = []
    for n in range(N - e + 1):
        Vn = [b for b in basis if b.degree <= n]
        if not Vn or Vn[-1].degree != n:
            continue
        rows = []
        for j in range(1, (N - n) // e + 1):
            res = [W.reduce(_svec(k, b * theta**j, N))[0] for b in Vn]
            for i in range(N + 1):
                row = [r[i] for r in res]
                if any(not k.is_zero(x) for x in row):
                    rows.append(row)
        C = linalg.Echelon(k, N + 1)
        for vec in linalg.nullspace(k, rows, len(Vn)):
            a = UniPoly(k, [], P.var)
            for x, b in zip(vec, Vn):
                a = a + b * FieldElement(k, x)
            C.insert(_svec(k, a, N))
        for vec in _exact_degree_rows(k, C, N - n):
            out.append(UniPoly(k, list(reversed(vec)), P.var, raw=True))
    return out


def conductor_membership(a: UniPoly, P: SubalgebraPresentation, theta: UniPoly, N: int) -> bool:
    """Whether a and every a*theta^j of degree <= N subduce to zero in R."""
    piece = filtration_basis(P, N)
    j = 0
    while a.degree + j * theta.degree <= N:
        if not subduct(a * theta**j, P, N, piece).is_member:
            return False
        j += 1
    return True


def extension_conductor_check(norm: NormalizationResult, cond: ConductorResult,
                              bound: int = 10) -> dict:
    """Bounded bidegree check that the conductor of R[x] in k[theta][x] is theta^c*k[theta][x].

    Works in theta-coordinates.  Elements of R[x] of bidegree <= (bound, bound)
    are tested against all multipliers theta^p; multiplication by x preserves
    R[x], so only the theta-part of the multiplier matters.
    """
    if not cond.exact:
        raise ValueError("the polynomial-extension check needs an exact conductor")
    c = cond.exponent
    k = norm.theta.field
    B = bound
    gens = [UniPoly(k, ex.coeffs, "y", raw=True) for ex in norm.expressions if ex.degree > 0]
    Ptheta = SubalgebraPresentation(k, tuple(gens), k, "y")
    piece = filtration_basis(Ptheta, B)
    rbasis = [elem for n in range(B + 1) for _, elem, _ in piece.leading[n]]
    W = _span_echelon(k, rbasis, B)
    size = (B + 1) * (B + 1)

    def bivec(blocks):
        # blocks: x-degree -> theta-polynomial; index b*(B+1) + (B - a)
        vec = [k.zero()] * size
        for b, p in blocks.items():
            for a, x in enumerate(p.coeffs):
                if a <= B:
                    vec[b * (B + 1) + (B - a)] = x
        return vec

    def residual(blocks):
        out = []
        for b in range(B + 1):
            p = blocks.get(b, UniPoly(k, [], "y"))
            out.extend(W.reduce(_svec(k, p, B))[0])
        return out

    found = linalg.Echelon(k, size)
    reps = []
    y = UniPoly.gen(k, "y")
    for n in range(B):
        cands = [(b, r) for b in range(B + 1) for r in rbasis if r.degree <= n]
        if not cands:
            continue
        rows = []
        for p in range(1, B - n + 1):
            res = [residual({b: r * y**p}) for b, r in cands]
            for i in range(size):
                row = [v[i] for v in res]
                if any(not k.is_zero(x) for x in row):
                    rows.append(row)
        layer = linalg.Echelon(k, size)
        for vec in linalg.nullspace(k, rows, len(cands)):
            blocks = {}
            for x, (b, r) in zip(vec, cands):
                if not k.is_zero(x):
                    blocks[b] = blocks.get(b, UniPoly(k, [], "y")) + r * FieldElement(k, x)
            layer.insert(bivec(blocks))
        # keep rows whose theta-degree is exactly n in some x-block
        for _, vec, _ in layer.reduced_rows():
            degs = [B - (j % (B + 1)) for j, x in enumerate(vec) if not k.is_zero(x)]
            if max(degs) == n:
                reps.append(vec)
                found.insert(vec)
    contains = all(found.contains(bivec({b: y ** (c + i)}))
                   for i in range(B - c) for b in range(B + 1))
    low = {b * (B + 1) + (B - a) for b in range(B + 1) for a in range(c)}
    minimal = all(k.is_zero(vec[j]) for vec in reps for j in low)
    if c > 0:
        minimal = minimal and not found.contains(bivec({0: y ** (c - 1)}))
    return {"exponent": c, "bound": B, "contains": contains, "minimal": minimal,
            "representatives": len(reps)}
