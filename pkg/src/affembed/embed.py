"""Construction and verification of algebraic embeddings ``R -> F[t]``.

Given ``R = k[w_1, ..., w_m]`` inside ``K[s]`` with some ``w_i`` of positive
degree, :func:`construct_embedding` produces a polynomial ring ``F[t]``,
algebraic over the image of ``R``, together with the images of the
generators.  Two cases:

``AlgebraicCoefficients``
    ``K`` is algebraic over the detected coefficient subfield.  With ``d``
    the gcd of the degree semigroup and ``r = kappa*s**(d*e) + ...`` an
    element of least positive degree, adjoin ``c`` with ``c**e == kappa``
    and put ``t = c*s**d`` (or ``t = s`` when some generator has a term
    whose degree is not a multiple of ``d``).  The map is injective.

``Specialized``
    The detected subfield is algebraic over ``k`` while ``K = k(u)``
    has transcendental coefficients.  Evaluate ``u`` at a rational point and
    certify rank equality of the filtrations up to the bound.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    DenominatorVanishes,
    ReducibleMinimalPolynomial,
    RetriesExhausted,
    VerificationFailed,
)
from .fields import Field, FieldElement, FunctionField, eth_root_extend, lift_through, specialize
from .graded import (
    SubalgebraPresentation,
    degree_data,
    filtration_basis,
)
from .unipoly import UniPoly, map_coefficients

ALGEBRAIC = "AlgebraicCoefficients"
SPECIALIZED = "Specialized"


# -- transcendence degree ----------------------------------------------------


def jacobian_trdeg(generators, coefficient_field: Optional[Field] = None) -> int:
    """tr.deg over k of the algebra generated by polynomials over K.

    Rank of the Jacobian with respect to ``(u, s)``, or ``s`` alone when K
    has no transcendental step outside k.  Characteristic zero.
    """
    gens = [g for g in generators]
    if not gens:
        return 0
    K = gens[0].field
    k = coefficient_field
    use_u = K.transcendental is not None and (k is None or not k.contains_field(K.transcendental))
    cols = [[g.deriv() for g in gens]]
    if use_u:
        cols.append([g.d_u() for g in gens])
    if len(cols) == 2:
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                minor = cols[0][i] * cols[1][j] - cols[0][j] * cols[1][i]
                if minor:
                    return 2
    return 1 if any(e for col in cols for e in col) else 0


# -- coefficient field discovery ----------------------------------------------


def integer_kernel(vec):
    """Basis of the integer lattice {a : sum a_i*vec_i == 0}.

    Column operations with extended gcd reduce ``vec`` to (g, 0, ..., 0); the
    transformed unit vectors of the zero positions span the kernel.
    """
    m = len(vec)
    v = list(vec)
    U = [[int(i == j) for j in range(m)] for i in range(m)]  # columns are basis vectors

    def col(j):
        return [U[i][j] for i in range(m)]

    def set_col(j, c):
        for i in range(m):
            U[i][j] = c[i]

    piv = None
    for j in range(m):
        if v[j] == 0:
            continue
        if piv is None:
            piv = j
            continue
        a, b = v[piv], v[j]
        g, x, y = _xgcd(a, b)
        cp, cj = col(piv), col(j)
        set_col(piv, [x * p + y * q for p, q in zip(cp, cj)])
        set_col(j, [(-b // g) * p + (a // g) * q for p, q in zip(cp, cj)])
        v[piv], v[j] = g, 0
    basis = [col(j) for j in range(m) if j != piv]
    out = []
    for b in basis:
        first = next((x for x in b if x), 0)
        out.append(tuple(-x for x in b) if first < 0 else tuple(b))
    return sorted(out, key=lambda b: (sum(abs(x) for x in b), b))


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass
class EmbeddingProblem:
    presentation: SubalgebraPresentation
    bound: Optional[int] = None
    seed: int = 0
    retries: int = 8

    def __post_init__(self):
        P = self.presentation
        if not any(g.degree >= 1 for g in P.generators):
            raise ValueError("R must not lie in K")
        if self.bound is None:
            self.bound = default_bound(P)


def default_bound(P: SubalgebraPresentation) -> int:
    """2 * (max generator degree) + conductor exponent of the degree semigroup."""
    n0 = 2 * P.max_degree
    sg = degree_data(P, n0)
    return n0 + sg.conductor_exponent


@dataclass
class CoefficientFieldReport:
    bound: int
    generators: list
    trdeg: int
    lattice: list
    sources: list  # one label per generator: "lattice" or "leading:n"

    def to_json(self):
        return {
            "bound": self.bound,
            "generators": [repr(g) for g in self.generators],
            "trdeg": self.trdeg,
            "lattice": [list(b) for b in self.lattice],
            "sources": self.sources,
        }


def discover_coefficient_field(problem: EmbeddingProblem, bound: Optional[int] = None,
                               piece=None) -> CoefficientFieldReport:
    """Bounded lower approximation of frac(k[leading forms]) intersected with K."""
    P = problem.presentation
    K = P.ambient
    N = problem.bound if bound is None else bound
    gens, sources = [], []
    seen = set()

    def add(x, label):
        if x.is_zero() or x in seen:
            return
        if x == K(1):
            return
        seen.add(x)
        gens.append(x)
        sources.append(label)

    lcs = [g.lc for g in P.generators]
    lattice = integer_kernel([g.degree for g in P.generators])
    for b in lattice:
        x = K(1)
        for lc, a in zip(lcs, b):
            x = x * lc**a
        add(x, "lattice")
    piece = piece if piece is not None and piece.bound == N else filtration_basis(P, N)
    for n in range(N + 1):
        rows = piece.leading.get(n) or []
        if len(rows) < 2:
            continue
        lead = [elem.lc for _, elem, _ in rows]
        for j in range(1, len(lead)):
            add(lead[j] / lead[0], f"leading:{n}")
    trdeg = 0 if all(x.is_constant_in_u() for x in gens) else 1
    if K.transcendental is None:
        trdeg = 0
    return CoefficientFieldReport(N, gens, trdeg, lattice, sources)


# -- certificate ----------------------------------------------------------------


@dataclass
class EmbeddingCertificate:
    case: str
    field_tower: Field
    images: list  # UniPoly over field_tower in variable t
    d: int
    t: str  # description of t in terms of s
    t_mode: str  # "power" (t = c*s^d), "identity" (t = s)
    c: Optional[FieldElement] = None
    e: int = 1
    r_expression: dict = field(default_factory=dict)
    adjunctions: list = field(default_factory=list)
    reparametrization: Optional[tuple] = None
    point: Optional[FieldElement] = None
    rejected: list = field(default_factory=list)
    coefficient_report: Optional[CoefficientFieldReport] = None
    verification: dict = field(default_factory=dict)


def _fresh_name(F: Field, base="c"):
    name, i = base, 0
    while name in F.generators:
        i += 1
        name = f"{base}{i}"
    return name


def _least_element(P, piece):
    """Element r of least positive degree: a generator if possible."""
    n0 = min(n for n in piece.leading_degrees() if n > 0)
    for i, g in enumerate(P.generators):
        if g.degree == n0:
            exps = tuple(int(j == i) for j in range(len(P.generators)))
            return g, {exps: FieldElement(P.k, P.k.one())}
    _, elem, expr = piece.leading[n0][0]
    return elem, expr


def _algebraic_case(problem, piece, report, rejected=()):
    P = problem.presentation
    K = P.ambient
    sg = degree_data(P, problem.bound, piece)
    d = sg.d
    r, r_expr = _least_element(P, piece)
    e = r.degree // d
    power_mode = all(j % d == 0 for g in P.generators for j in g.support())
    if not power_mode:
        F = K
        images = [g.with_var("t") for g in P.generators]
        return EmbeddingCertificate(
            ALGEBRAIC, F, images, d, "s", "identity", None, e, r_expr,
            [], None, None, list(rejected), report)
    ext = eth_root_extend(K, r.lc, e, _fresh_name(K))
    F, c = ext.tower, ext.root
    adjunctions = []
    if ext.reparametrization is not None:
        old, new, ex = ext.reparametrization
        adjunctions.append({"kind": "reparametrize", "old": old, "new": new, "exponent": ex,
                            "root": repr(c), "e": e, "kappa": repr(r.lc)})
    elif F != K:
        adjunctions.append({"kind": "algebraic", "name": F.name,
                            "minpoly": [repr(FieldElement(F.base, x)) for x in F.minpoly],
                            "e": e, "kappa": repr(r.lc)})
    images = [_rewrite_power(g, ext, c, d) for g in P.generators]
    t_desc = f"({c})*s" if d == 1 else f"({c})*s^{d}"
    return EmbeddingCertificate(
        ALGEBRAIC, F, images, d, t_desc, "power", c, e, r_expr, adjunctions,
        ext.reparametrization, None, list(rejected), report)


def _rewrite_power(g: UniPoly, ext, c, d) -> UniPoly:
    """Rewrite g(s) with s**d = t/c as a polynomial in t over the new tower."""
    F = ext.tower
    cinv = c.inverse()
    out = []
    for j, a in enumerate(g.coeffs):
        if j % d:
            continue
        coeff = ext.lift(FieldElement(g.field, a)) * cinv ** (j // d)
        out.append(coeff)
    return UniPoly(F, out, "t")


def specialization_points(seed: int, count: int):
    """0, then +-1, +-2, ... with the sign order within each height set by the seed."""
    rng = random.Random(seed)
    pts = [0]
    h = 1
    while len(pts) < count:
        pair = [h, -h]
        if seed and rng.random() < 0.5:
            pair.reverse()
        pts.extend(pair)
        h += 1
    return pts[:count]


def _try_specialize(problem, u0, source_piece):
    P = problem.presentation
    K = P.ambient
    try:
        sp = specialize(K, u0)
    except ReducibleMinimalPolynomial:
        return None, "minimal polynomial splits at this point"
    try:
        images = [map_coefficients(g, sp).with_var("t") for g in P.generators]
    except DenominatorVanishes:
        return None, "denominator vanishes"
    if any(img.degree != g.degree for img, g in zip(images, P.generators)):
        return None, "leading coefficient vanishes"
    img_P = SubalgebraPresentation(sp.target, tuple(images), P.k, "t")
    img_piece = filtration_basis(img_P, problem.bound)
    src, dst = source_piece.rank_table(), img_piece.rank_table()
    for n, (a, b) in enumerate(zip(src, dst)):
        if a != b:
            return None, {"rank_drop_at": n, "source_rank": a, "image_rank": b}
    return (sp, images), None


def construct_embedding(problem: EmbeddingProblem, verify: bool = True) -> EmbeddingCertificate:
    P = problem.presentation
    K = P.ambient
    T = K.transcendental
    N = problem.bound
    k_piece = filtration_basis(P, N)
    needs_u = T is not None and not P.k.contains_field(T)
    if not needs_u:
        cert = _algebraic_case(problem, k_piece, None)
    else:
        bounds = [min(P.max_degree, N), N, 2 * N]
        rejected = []
        cert = None
        for attempt, b in enumerate(bounds):
            report = discover_coefficient_field(problem, b, k_piece if b == N else None)
            if report.trdeg == 1:
                cert = _algebraic_case(problem, k_piece, report, rejected)
                break
            if attempt > 0 and rejected:
                continue
            for u0 in specialization_points(problem.seed, problem.retries):
                ok, why = _try_specialize(problem, u0, k_piece)
                if ok is None:
                    rejected.append({"u0": u0, "reason": why})
                    continue
                sp, images = ok
                r, r_expr = _least_element(P, k_piece)
                d = degree_data(P, N, k_piece).d
                cert = EmbeddingCertificate(
                    SPECIALIZED, sp.target, images, d, "s", "identity", None,
                    r.degree // d, r_expr, [], None, sp.point, list(rejected), report)
                break
            if cert is not None:
                break
        if cert is None:
            raise RetriesExhausted("no specialization preserved the filtration ranks", rejected)
    if verify:
        cert.verification = verify_certificate(problem, cert)
    return cert


# -- verification ----------------------------------------------------------------


def _image_presentation(cert, k):
    return SubalgebraPresentation(cert.field_tower, tuple(cert.images), k, "t")


def _coerce_k(cert, x: FieldElement):
    return lift_through(cert.field_tower, x, cert.reparametrization)


def verify_certificate(problem: EmbeddingProblem, cert: EmbeddingCertificate) -> dict:
    """Recheck a certificate independently; raise VerificationFailed on the first failure."""
    P = problem.presentation
    K, k = P.ambient, P.k
    F = cert.field_tower
    N = problem.bound
    images = [UniPoly(F, [F.coerce_rep(FieldElement(img.field, c)) for c in img.coeffs], "t",
                      raw=True) for img in cert.images]
    if len(images) != len(P.generators):
        raise VerificationFailed("homomorphism", "number of images differs from generators")
    scale = cert.d if cert.t_mode == "power" else 1

    # (a) relations among monomials up to N hold for the images
    if cert.case == ALGEBRAIC:
        rel_P = SubalgebraPresentation(K, P.generators, K, P.var)
    else:
        rel_P = P
    rel_piece = filtration_basis(rel_P, N)
    img_ring = SubalgebraPresentation(F, tuple(images), F, "t") if images else None
    checked = 0
    for rel in rel_piece.relations:
        expr = {e: _coerce_k(cert, FieldElement(rel_P.k, c)) for e, c in rel.items()}
        value = img_ring.evaluate(expr)
        if value:
            raise VerificationFailed("homomorphism", {"relation": _show_expr(rel, rel_P.k),
                                                      "image_value": repr(value)})
        checked += 1

    # (b) degrees are preserved
    degree_table = []
    for g, img in zip(P.generators, images):
        degree_table.append([g.degree, img.degree * scale])
        if img.degree * scale != g.degree:
            raise VerificationFailed("degree", {"source": g.degree, "image": img.degree * scale})

    # (c) filtration ranks agree up to N
    src_piece = filtration_basis(P, N)
    src_ranks = src_piece.rank_table()
    k_img = k
    if cert.reparametrization is not None and not F.contains_field(k):
        raise VerificationFailed("rank", "coefficient field not contained in target tower")
    img_piece = filtration_basis(_image_presentation(cert, k_img), N // scale)
    img_table = img_piece.rank_table()
    img_ranks = [img_table[n // scale] for n in range(N + 1)]
    for n, (a, b) in enumerate(zip(src_ranks, img_ranks)):
        if a != b:
            raise VerificationFailed("rank", {"degree": n, "source_rank": a, "image_rank": b})

    # (d) transcendence degrees
    tr_src = jacobian_trdeg(P.generators, k)
    tr_img = jacobian_trdeg(images, k)
    tr_target = 1 + (1 if F.transcendental is not None and not k.contains_field(F.transcendental)
                     else 0)
    if not (tr_src == tr_img == tr_target):
        raise VerificationFailed("trdeg", {"source": tr_src, "image": tr_img,
                                           "target": tr_target})

    # (e) algebraicity witnesses
    witnesses = []
    for G in F.chain[1:]:
        if K.contains_field(G) and G in K.chain:
            continue
        if isinstance(G, FunctionField):
            witnesses.append({"generator": G.name, "kind": "transcendental",
                              "reason": "counted by trdeg"})
            continue
        mp = UniPoly(G.base, list(G.minpoly), "X", raw=True).over(G)
        if mp(G.gen()):
            raise VerificationFailed("witness", {"generator": G.name})
        witnesses.append({"generator": G.name, "kind": "minimal_polynomial",
                          "polynomial": [repr(FieldElement(G.base, c)) for c in G.minpoly]})
    r_img = img_ring.evaluate({e: _coerce_k(cert, FieldElement(k, v.rep if isinstance(v, FieldElement) else v))
                               for e, v in cert.r_expression.items()})
    if r_img.degree < 1:
        raise VerificationFailed("witness", {"t": "image of r is constant"})
    # W(X) = pi(r)(X) - pi(r): monic-free polynomial over the image algebra with root t
    w_at_t = r_img.compose(UniPoly.gen(F, "t")) - r_img
    if w_at_t:
        raise VerificationFailed("witness", {"t": repr(w_at_t)})
    witnesses.append({"generator": "t", "kind": "root",
                      "polynomial": f"P(X) - ({r_img}) with P = {r_img.with_var('X')}",
                      "r": _show_expr({e: v.rep for e, v in cert.r_expression.items()}, k)})
    return {
        "bound": N,
        "relations_checked": checked,
        "degree_table": degree_table,
        "ranks": {"source": src_ranks, "image": img_ranks},
        "trdeg_source": tr_src,
        "trdeg_image": tr_img,
        "trdeg_target": tr_target,
        "witnesses": witnesses,
        "checks": {"homomorphism": True, "degree": True, "rank": True, "trdeg": True,
                   "witness": True},
    }


def _show_expr(expr, k):
    parts = []
    for e in sorted(expr, reverse=True):
        v = expr[e]
        mon = "*".join(f"w{i + 1}^{a}" if a > 1 else f"w{i + 1}" for i, a in enumerate(e) if a)
        parts.append(f"({FieldElement(k, v)})*{mon or '1'}")
    return " + ".join(parts) if parts else "0"
