"""Leading forms, graded filtration pieces, subduction and completion for
subalgebras ``k[w_1, ..., w_m]`` of ``K[s]``.

The coefficient field ``k`` is a sub-tower of ``K``.  Elements of ``K`` are
viewed as vectors over ``k`` via :func:`linalg.coordinates`; when ``K`` has a
transcendental step that ``k`` lacks, every coefficient is first multiplied
by one common denominator in ``u``, which does not change ``k``-linear
relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Optional

from . import linalg
from .errors import BoundTooLarge
from .fields import AlgebraicExtension, Field, FieldElement, FunctionField, QQ
from .semigroup import NumericalSemigroup
from .unipoly import UniPoly

MONOMIAL_LIMIT = 20000


def in_subfield(F: Field, k: Field, rep) -> bool:
    if F == k:
        return True
    if not F.contains_field(k):
        return False
    B = F.base
    if isinstance(F, AlgebraicExtension):
        return all(B.is_zero(c) for c in rep[1:]) and in_subfield(B, k, rep[0])
    num, den = rep
    if len(den) != 1 or len(num) > 1:
        return False
    return in_subfield(B, k, num[0] if num else B.zero())


def relative_degree(K: Field, k: Field) -> Optional[int]:
    """[K : k] or None when infinite."""
    deg = 1
    for G in K.chain[len(k.chain):]:
        if isinstance(G, FunctionField):
            return None
        deg *= G.degree
    return deg


@dataclass(frozen=True)
class SubalgebraPresentation:
    """``R = k[generators]`` inside ``ambient[var]``."""

    ambient: Field
    generators: tuple
    coefficient_field: Field = QQ
    var: str = "s"

    def __post_init__(self):
        gens = tuple(UniPoly(self.ambient, [self.ambient.coerce_rep(FieldElement(g.field, c))
                                            for c in g.coeffs], self.var, raw=True)
                     for g in self.generators)
        if any(not g for g in gens):
            raise ValueError("generators must be nonzero")
        if not any(g.degree >= 1 for g in gens):
            raise ValueError("some generator must have positive degree")
        if not self.ambient.contains_field(self.coefficient_field):
            raise ValueError("coefficient field must be a sub-tower of the ambient field")
        object.__setattr__(self, "generators", gens)

    @property
    def k(self):
        return self.coefficient_field

    @property
    def degrees(self):
        return [g.degree for g in self.generators]

    @property
    def max_degree(self):
        return max(self.degrees)

    def with_generators(self, gens):
        return SubalgebraPresentation(self.ambient, tuple(gens), self.coefficient_field, self.var)

    def constant_generators(self):
        """Indices of degree-0 generators not already in k."""
        K, k = self.ambient, self.coefficient_field
        return [i for i, g in enumerate(self.generators)
                if g.degree == 0 and not in_subfield(K, k, g.coeffs[0])]

    def evaluate(self, expression) -> UniPoly:
        """Expand a formal polynomial {exponent tuple: k-element} in the generators."""
        acc = UniPoly(self.ambient, [], self.var)
        for exps, c in expression.items():
            term = UniPoly(self.ambient, [c], self.var)
            for g, a in zip(self.generators, exps):
                if a:
                    term = term * g**a
            acc = acc + term
        return acc


def enumerate_monomials(P: SubalgebraPresentation, N: int, constant_cap: Optional[int] = None,
                        limit: Optional[int] = None):
    """Exponent vectors with total s-degree <= N, sorted by (degree, exponents).

    Degree-0 generators lying in k are skipped; other degree-0 generators get
    exponents up to ``[K:k] - 1`` (or ``constant_cap`` when infinite).
    """
    limit = MONOMIAL_LIMIT if limit is None else limit
    degs = P.degrees
    consts = set(P.constant_generators())
    rel = relative_degree(P.ambient, P.k)
    ccap = (rel - 1) if rel is not None else (constant_cap if constant_cap is not None else N)
    m = len(degs)
    out = []

    def rec(i, exps, total):
        if len(out) > limit:
            raise BoundTooLarge(f"more than {limit} monomials up to degree {N}")
        if i == m:
            out.append((total, tuple(exps)))
            return
        if degs[i] == 0:
            cap = ccap if i in consts else 0
            for a in range(cap + 1):
                rec(i + 1, exps + [a], total)
            return
        a = 0
        while total + a * degs[i] <= N:
            rec(i + 1, exps + [a], total + a * degs[i])
            a += 1

    rec(0, [], 0)
    out.sort()
    return [e for _, e in out]


@dataclass
class GradedPiece:
    """Exact data of the filtration ``R_{<=n}`` for ``n <= N``.

    ``dims[n]`` is dim_k of the elements of R of degree <= n found among
    k-combinations of monomials of degree <= N; ``monomial_ranks[n]`` is the
    rank of the monomials of degree <= n; ``leading[n]`` lists a basis of the
    leading-coefficient space Lambda_n as (coordinate vector, element,
    expression) triples.
    """

    presentation: SubalgebraPresentation
    bound: int
    columns: list
    scale: Optional[FieldElement]
    monomials: dict
    echelon: linalg.Echelon
    dims: dict
    monomial_ranks: dict
    leading: dict
    relations: list = field(default_factory=list)

    @property
    def k(self):
        return self.presentation.k

    def vector(self, f: UniPoly):
        """Coordinate vector of f, or None if f has coordinates outside the columns."""
        K, k = self.presentation.ambient, self.k
        f = UniPoly(K, [K.coerce_rep(FieldElement(f.field, c)) for c in f.coeffs], f.var, raw=True)
        vec = [k.zero()] * len(self.columns)
        index = self._index
        for n, c in enumerate(f.coeffs):
            if K.is_zero(c):
                continue
            if self.scale is not None:
                c = K.mul(c, K.coerce_rep(self.scale))
            try:
                coords = linalg.coordinates(K, k, c)
            except ValueError:
                return None
            for key, v in coords.items():
                j = index.get((n, key))
                if j is None:
                    return None
                vec[j] = v
        return vec

    @property
    def _index(self):
        if not hasattr(self, "_idx"):
            self._idx = {c: j for j, c in enumerate(self.columns)}
        return self._idx

    def block(self, n):
        return [j for j, (deg, _) in enumerate(self.columns) if deg == n]

    def leading_degrees(self):
        return sorted(n for n, rows in self.leading.items() if rows)

    def dim_table(self):
        return [self.dims[n] for n in range(self.bound + 1)]

    def rank_table(self):
        return [self.monomial_ranks[n] for n in range(self.bound + 1)]


def _monomial_polys(P, exps_list):
    gens = P.generators
    one = UniPoly(P.ambient, [1], P.var)
    cache = {tuple([0] * len(gens)): one}
    for exps in exps_list:
        if exps in cache:
            continue
        i = max(j for j, a in enumerate(exps) if a)
        prev = list(exps)
        prev[i] -= 1
        prev = tuple(prev)
        if prev not in cache:
            cache[prev] = P.evaluate({prev: 1}) if any(prev) else one
        cache[exps] = cache[prev] * gens[i]
    return {e: cache[e] for e in exps_list}


def filtration_basis(P: SubalgebraPresentation, N: int, constant_cap: Optional[int] = None,
                     limit: Optional[int] = None) -> GradedPiece:
    """Row-reduce all generator monomials of degree <= N over k."""
    K, k = P.ambient, P.k
    exps_list = enumerate_monomials(P, N, constant_cap, limit)
    monos = _monomial_polys(P, exps_list)
    scale = None
    if K.transcendental is not None and not k.contains_field(K.transcendental):
        reps = [c for f in monos.values() for c in f.coeffs]
        scale = linalg.common_u_denominator(K, reps)
    keys = {}
    coord_cache = {}
    for e, f in monos.items():
        cs = {}
        for n, c in enumerate(f.coeffs):
            if K.is_zero(c):
                continue
            if scale is not None:
                c = K.mul(c, K.coerce_rep(scale))
            coords = linalg.coordinates(K, k, c)
            cs[n] = coords
            keys.setdefault(n, set()).update(coords)
        coord_cache[e] = cs
    columns = [(n, key) for n in sorted(keys, reverse=True) for key in sorted(keys[n])]
    index = {c: j for j, c in enumerate(columns)}
    E = linalg.Echelon(k, len(columns))
    relations = []
    monomial_ranks = {}
    mdeg = {e: sum(a * d for a, d in zip(e, P.degrees)) for e in exps_list}
    pos = 0
    for n in range(N + 1):
        while pos < len(exps_list) and mdeg[exps_list[pos]] == n:
            e = exps_list[pos]
            vec = [k.zero()] * len(columns)
            for deg, coords in coord_cache[e].items():
                for key, v in coords.items():
                    vec[index[(deg, key)]] = v
            rel = E.insert(vec, {e: k.one()})
            if rel is not None:
                relations.append(rel)
            pos += 1
        monomial_ranks[n] = len(E)
    reduced = E.reduced_rows()
    col_deg = [c[0] for c in columns]
    dims = {n: sum(1 for p, _, _ in reduced if col_deg[p] <= n) for n in range(N + 1)}
    leading = {n: [] for n in range(N + 1)}
    for p, vec, tr in reduced:
        n = col_deg[p]
        elem = UniPoly(K, [], P.var)
        for e, c in tr.items():
            elem = elem + monos[e] * FieldElement(k, c)
        leading[n].append((vec, elem, {e: FieldElement(k, c) for e, c in tr.items()}))
    return GradedPiece(P, N, columns, scale, monos, E, dims, monomial_ranks, leading, relations)


def degree_data(P: SubalgebraPresentation, N: int, piece: Optional[GradedPiece] = None):
    """Degree semigroup of R from the nonzero leading-coefficient spaces up to N."""
    if N < P.max_degree:
        raise ValueError("N must be at least the maximal generator degree")
    piece = piece or filtration_basis(P, N)
    return NumericalSemigroup.from_elements(piece.leading_degrees())


def semigroup_increments_stable(P: SubalgebraPresentation, N: int, piece=None) -> bool:
    """Whether the minimal generators found up to N-2, N-1 and N agree."""
    piece = piece or filtration_basis(P, N)
    degs = piece.leading_degrees()
    sets = [NumericalSemigroup.from_elements([d for d in degs if d <= M]).generators
            for M in (N - 2, N - 1, N)]
    return sets[0] == sets[1] == sets[2]


@dataclass
class SubductionResult:
    remainder: UniPoly
    expression: dict  # exponent tuple -> k-element

    @property
    def is_member(self):
        return not self.remainder


def subduct(f: UniPoly, P: SubalgebraPresentation, N: int,
            piece: Optional[GradedPiece] = None) -> SubductionResult:
    """Cancel leading forms of f against R's filtration until stuck.

    Remainder zero certifies f in R; then the expression expands to f.
    """
    K, k = P.ambient, P.k
    piece = piece or filtration_basis(P, N)
    f = UniPoly(K, [K.coerce_rep(FieldElement(f.field, c)) for c in f.coeffs], P.var, raw=True)
    expr = {}
    cur = f
    while cur:
        n = cur.degree
        if n > N or not piece.leading.get(n):
            break
        vec = piece.vector(cur.leading_form())
        if vec is None:
            break
        rows = piece.leading[n]
        residual = list(vec)
        combo = []
        for row_vec, elem, rexpr in rows:
            p = piece.echelon.pivot(row_vec)
            c = residual[p]
            if k.is_zero(c):
                continue
            residual = [k.sub(a, k.mul(c, b)) for a, b in zip(residual, row_vec)]
            combo.append((c, elem, rexpr))
        blk = set(piece.block(n))
        if any(not k.is_zero(residual[j]) for j in blk):
            break
        for c, elem, rexpr in combo:
            ce = FieldElement(k, c)
            cur = cur - elem * ce
            for e, v in rexpr.items():
                nv = expr.get(e, FieldElement(k, k.zero())) + v * ce
                if nv.is_zero():
                    expr.pop(e, None)
                else:
                    expr[e] = nv
    return SubductionResult(cur, expr)


def is_member_by_rank(f: UniPoly, P: SubalgebraPresentation, N: int,
                      piece: Optional[GradedPiece] = None) -> bool:
    """Membership by rank comparison: rank(basis + f) == rank(basis)."""
    piece = piece or filtration_basis(P, N)
    vec = piece.vector(f)
    if vec is None:
        return False
    return piece.echelon.contains(vec)


def primitive_expression(expr: dict, k: Field) -> dict:
    """Scale a QQ-expression to coprime integers with positive leading entry."""
    if k != QQ or not expr:
        return dict(expr)
    vals = [expr[e].rep for e in sorted(expr, reverse=True)]
    den = reduce(lcm, (v.denominator for v in vals), 1)
    num = reduce(gcd, (abs(v.numerator * (den // v.denominator)) for v in vals), 0)
    factor = Fraction(den, num)
    if vals[0] < 0:
        factor = -factor
    return {e: v * factor for e, v in expr.items()}


@dataclass
class CompletionResult:
    presentation: SubalgebraPresentation
    added: list  # (new generator, expression in the original generators)
    bounded: bool
    bound: int


def _leading_span(piece, P_current, n, k, K):
    """Coordinate vectors of leading coefficients of current monomials of degree n."""
    degs = P_current.degrees
    lcs = [g.lc for g in P_current.generators]
    vecs = []
    out = []

    def rec(i, total, coeff):
        if i == len(degs):
            if total == n:
                out.append(coeff)
            return
        if degs[i] == 0:
            rec(i + 1, total, coeff)
            return
        a = 0
        c = coeff
        while total + a * degs[i] <= n:
            rec(i + 1, total + a * degs[i], c)
            a += 1
            c = c * lcs[i]

    rec(0, 0, FieldElement(K, K.one()))
    for c in out:
        poly = UniPoly(K, [0] * n + [c], P_current.var)
        v = piece.vector(poly)
        if v is not None:
            vecs.append(v)
    return vecs


def sagbi_complete(P: SubalgebraPresentation, N: int,
                   piece: Optional[GradedPiece] = None) -> CompletionResult:
    """Enlarge the generators until their leading forms span every Lambda_n, n <= N.

    Over K itself the result is the finite completion; over a proper subfield
    k it is tagged as N-bounded.
    """
    K, k = P.ambient, P.k
    piece = piece or filtration_basis(P, N)
    current = P
    added = []
    for n in range(1, N + 1):
        rows = piece.leading.get(n) or []
        if not rows:
            continue
        blk = set(piece.block(n))

        def project(v):
            return [x if j in blk else k.zero() for j, x in enumerate(v)]

        while True:
            span = linalg.Echelon(k, len(piece.columns))
            for v in _leading_span(piece, current, n, k, K):
                span.insert(project(v))
            if len(span) >= len(rows):
                break
            for row_vec, elem, rexpr in rows:
                if not span.contains(project(row_vec)):
                    expr = primitive_expression(rexpr, k)
                    new = P.evaluate(expr)
                    added.append((new, expr))
                    current = current.with_generators(list(current.generators) + [new])
                    break
    return CompletionResult(current, added, bounded=(k != K), bound=N)
