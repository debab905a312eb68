"""Task dispatch: every task runs its verifier before a report is emitted."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Optional

import sympy

from .. import __version__
from ..embed import (
    EmbeddingProblem,
    construct_embedding,
    default_bound,
    jacobian_trdeg,
    verify_certificate,
)
from ..errors import AffEmbedError, BoundTooLarge, UnsupportedTowerShape, VerificationFailed
from .. import graded
from ..graded import degree_data, filtration_basis, sagbi_complete, subduct
from ..lnd import (
    SliceData,
    cancellation_trace,
    eigen_witness,
    is_locally_nilpotent,
    ml_intersection,
    reconstruct,
    slice_expansion,
)
from ..normalize import conductor, conductor_membership, normalize_curve
from ..unipoly import UniPoly
from . import grammar, serialize
from .build import BuildError, Builder
from .grammar import Name

EXIT_OK, EXIT_VERIFY, EXIT_PARSE, EXIT_UNSUPPORTED = 0, 1, 2, 3


@dataclass
class Options:
    bound: Optional[int] = None
    seed: Optional[int] = None
    retries: Optional[int] = None
    limit: Optional[int] = None  # monomial limit for filtration bases
    base_dir: str = "."


@dataclass
class RunReport:
    task: str
    status: str  # verified | verification_failed | parse_error | unsupported
    exit_code: int
    payload: dict
    options: dict = field(default_factory=dict)
    input_sha256: str = ""
    timing: float = 0.0
    trace: list = field(default_factory=list)

    def to_json(self, include_timing=True):
        out = {
            "schema": serialize.SCHEMA,
            "tool": "affembed",
            "version": __version__,
            "task": self.task,
            "status": self.status,
            "exit_code": self.exit_code,
            "input_sha256": self.input_sha256,
            "options": self.options,
            "result": self.payload,
        }
        if include_timing:
            out["timing_seconds"] = round(self.timing, 6)
        return out


def _opt(task_opts, cli_value, key, default):
    if cli_value is not None:
        return cli_value
    return task_opts.get(key, default)


def run_text(text: str, options: Options = None) -> RunReport:
    options = options or Options()
    digest = hashlib.sha256(text.encode("utf-8", "replace")).hexdigest()
    start = time.perf_counter()
    try:
        pf = grammar.parse(text)
    except grammar.ParseError as exc:
        rep = RunReport("parse", "parse_error", EXIT_PARSE, exc.to_json(), {}, digest)
        rep.trace = [exc.diagnostic()]
        return rep
    try:
        report = run(pf, options)
    except grammar.ParseError as exc:
        report = RunReport(pf.task.kind, "parse_error", EXIT_PARSE, exc.to_json())
        report.trace = [exc.diagnostic()]
    except BuildError as exc:
        report = RunReport(pf.task.kind, "parse_error", EXIT_PARSE, exc.to_json())
        report.trace = [str(exc)]
    except (UnsupportedTowerShape, BoundTooLarge) as exc:
        report = RunReport(pf.task.kind, "unsupported", EXIT_UNSUPPORTED,
                           {"error": type(exc).__name__, "message": str(exc)})
        report.trace = [f"unsupported: {exc}"]
    except VerificationFailed as exc:
        report = RunReport(pf.task.kind, "verification_failed", EXIT_VERIFY,
                           {"error": "VerificationFailed", "check": exc.check,
                            "witness": _jsonable(exc.witness)})
        report.trace = [f"verification failed at {exc.check}: {exc.witness}"]
    except AffEmbedError as exc:
        report = RunReport(pf.task.kind, "verification_failed", EXIT_VERIFY,
                           {"error": type(exc).__name__, "message": str(exc)})
        report.trace = [f"{type(exc).__name__}: {exc}"]
    if not report.options:
        report.options = {k: v for k, v in (("bound", options.bound), ("seed", options.seed),
                                            ("retries", options.retries),
                                            ("monomial_limit", options.limit)) if v is not None}
    report.input_sha256 = digest
    report.timing = time.perf_counter() - start
    return report


def _jsonable(x):
    return json.loads(json.dumps(x, default=str))


def run(pf: grammar.ProblemFile, options: Options) -> RunReport:
    task = pf.task
    limit = _opt(task.options, options.limit, "limit", None)
    saved = graded.MONOMIAL_LIMIT
    if limit is not None:
        graded.MONOMIAL_LIMIT = limit
    b = Builder(pf)
    handler = {
        "embed": _embed, "sagbi": _sagbi, "normalize": _normalize, "conductor": _conductor,
        "lnd": _lnd, "cancel": _cancel, "verify": _verify,
    }[task.kind]
    try:
        return handler(pf, b, task, options)
    finally:
        graded.MONOMIAL_LIMIT = saved


def _need_gens(pf, task):
    if task.target not in pf.gens:
        raise grammar.UndefinedName(task.line, 1, ["gens declaration"], task.target)
    return task.target


def _problem(pf, b, task, options) -> EmbeddingProblem:
    P = b.presentation(_need_gens(pf, task))
    bound = _opt(task.options, options.bound, "bound", None)
    seed = _opt(task.options, options.seed, "seed", 0)
    retries = _opt(task.options, options.retries, "retries", 8)
    return EmbeddingProblem(P, bound, seed, retries)


def _embed(pf, b, task, options):
    problem = _problem(pf, b, task, options)
    cert = construct_embedding(problem)
    payload = serialize.certificate_to_json(cert, problem)
    P = problem.presentation
    piece = filtration_basis(P, problem.bound)
    sg = degree_data(P, problem.bound, piece)
    payload["semigroup"] = sg.to_json()
    payload["dims"] = piece.dim_table()
    payload["trdeg_over_K"] = jacobian_trdeg(P.generators, P.ambient)
    trace = _embed_trace(cert, problem, sg)
    opts = {"bound": problem.bound, "seed": problem.seed, "retries": problem.retries,
            "monomial_limit": graded.MONOMIAL_LIMIT}
    return RunReport("embed", "verified", EXIT_OK, payload, opts, trace=trace)


def _embed_trace(cert, problem, sg):
    P = problem.presentation
    lines = [f"R = k[{', '.join(map(repr, P.generators))}] over k = {P.k}, K = {P.ambient}",
             f"leading forms: {', '.join(repr(g.leading_form()) for g in P.generators)}",
             f"degree semigroup {list(sg.generators)}, d = {sg.d}, "
             f"conductor exponent {sg.conductor_exponent}; bound N = {problem.bound}"]
    for rej in cert.rejected:
        lines.append(f"specialization u = {rej['u0']} rejected: {rej['reason']}")
    if cert.coefficient_report is not None:
        rep = cert.coefficient_report
        lines.append(f"coefficient field generators {[repr(g) for g in rep.generators]} "
                     f"(tr.deg {rep.trdeg}) at bound {rep.bound}")
    lines.append(f"case {cert.case}: e = {cert.e}, t = {cert.t}"
                 + (f", c = {cert.c}" if cert.c is not None else "")
                 + (f", u = {cert.point}" if cert.point is not None else ""))
    for adj in cert.adjunctions:
        lines.append(f"adjunction: {adj}")
    for g, img in zip(P.generators, cert.images):
        lines.append(f"  {g}  ->  {img}")
    v = cert.verification
    lines.append(f"rank table source {v['ranks']['source']}")
    lines.append(f"rank table image  {v['ranks']['image']}")
    lines.append(f"checks: {', '.join(k for k, ok in v['checks'].items() if ok)} passed")
    return lines


def _sagbi(pf, b, task, options):
    P = b.presentation(_need_gens(pf, task))
    N = _opt(task.options, options.bound, "bound", None) or default_bound(P)
    res = sagbi_complete(P, N)
    Q = res.presentation
    # every added element expands from its expression and subducts to zero
    piece = filtration_basis(Q, N)
    for g, expr in res.added:
        if P.evaluate(expr) != g:
            raise VerificationFailed("sagbi", {"element": repr(g), "reason": "expression"})
        if not subduct(g, Q, N, piece).is_member:
            raise VerificationFailed("sagbi", {"element": repr(g), "reason": "subduction"})
    sg = degree_data(Q, N, piece)
    payload = {
        "generators": [repr(g) for g in Q.generators],
        "added": [repr(g) for g, _ in res.added],
        "bounded": res.bounded,
        "bound": N,
        "semigroup": sg.to_json(),
        "dims": piece.dim_table(),
    }
    trace = [f"added {a}" for a in payload["added"]] or ["nothing added"]
    trace.append(f"semigroup {list(sg.generators)}; bounded={res.bounded} at N = {N}")
    return RunReport("sagbi", "verified", EXIT_OK, payload, {"bound": N}, trace=trace)


def _check_normalization(P, norm):
    for g, ex in zip(P.generators, norm.expressions):
        if ex.compose(norm.theta).with_var(P.var) != g:
            raise VerificationFailed("normalization", {"generator": repr(g)})


def _normalize(pf, b, task, options):
    P = b.presentation(_need_gens(pf, task))
    norm = normalize_curve(P)
    _check_normalization(P, norm)
    payload = {"normalization": norm.to_json()}
    trace = [f"Luroth generator t0 = {norm.luroth}", f"theta = {norm.theta} (e = {norm.e})"]
    trace += [f"  {g} = {ex}" for g, ex in zip(P.generators, norm.expressions)]
    return RunReport("normalize", "verified", EXIT_OK, payload, {}, trace=trace)


def _conductor(pf, b, task, options):
    P = b.presentation(_need_gens(pf, task))
    norm = normalize_curve(P)
    _check_normalization(P, norm)
    N = _opt(task.options, options.bound, "bound", None)
    cond = conductor(P, norm, N)
    theta = norm.theta
    if cond.exact:
        # theta^(c+j) in R for j below the largest expression degree
        span = max(ex.degree for ex in norm.expressions)
        check_bound = theta.degree * (cond.exponent + span)
        piece = filtration_basis(P, check_bound)
        for j in range(span + 1):
            if not subduct(theta ** (cond.exponent + j), P, check_bound, piece).is_member:
                raise VerificationFailed("conductor", {"power": cond.exponent + j})
    else:
        check_bound = cond.bound
        for a in cond.elements:
            if not conductor_membership(a, P, theta, check_bound):
                raise VerificationFailed("conductor", {"element": repr(a)})
    payload = {"normalization": norm.to_json(), "conductor": cond.to_json(),
               "checked_to_degree": check_bound}
    trace = [f"theta = {theta}", f"conductor generator {cond.generator} "
             f"({'exact' if cond.exact else f'bounded at {cond.bound}'})"]
    return RunReport("conductor", "verified", EXIT_OK, payload, {"bound": N}, trace=trace)


def _lnd(pf, b, task, options):
    if task.target not in pf.derivations:
        raise grammar.UndefinedName(task.line, 1, ["derivation declaration"], task.target)
    D = b.derivation(task.target)
    bound = _opt(task.options, options.bound, "bound", None)
    verdict = is_locally_nilpotent(D, bound)
    # re-verify the verdict
    for v, n in verdict.indices.items():
        if not D.iterate(sympy.Symbol(v), n).is_zero:
            raise VerificationFailed("lnd", {"variable": v, "index": n})
    if verdict.witness and verdict.witness.get("kind") == "eigen":
        if eigen_witness(D, sympy.sympify(verdict.witness["f"])) is None:
            raise VerificationFailed("lnd", verdict.witness)
    payload = {"derivation": D.to_json(), "verdict": verdict.to_json()}
    trace = [f"D = {D}", f"verdict {verdict.status} at bound {verdict.bound}",
             f"indices {verdict.indices}"]
    if "slice" in task.options and "b" in task.options:
        ring = pf.derivations[task.target].ring
        s_expr, b_expr = b.sympy_exprs(ring, [grammar.parse_expression(task.options["slice"]),
                                              grammar.parse_expression(task.options["b"])],
                                       task.line)
        sl = SliceData.make(D, s_expr)
        exp = slice_expansion(D, sl, b_expr)
        rec, power = reconstruct(sl, exp)
        if rec != D.poly(b_expr) * sl.Ds**power or any(not D(n).is_zero for n in exp.numerators):
            raise VerificationFailed("slice", {"b": str(b_expr)})
        payload["slice_expansion"] = exp.to_json()
        trace.append(f"slice expansion of {b_expr}: {exp.to_json()}")
    if "ml" in task.options:
        basis = ml_intersection(D.variables, [D], task.options["ml"])
        payload["kernel_basis"] = [str(p.as_expr()) for p in basis]
        trace.append(f"kernel up to degree {task.options['ml']}: {payload['kernel_basis']}")
    return RunReport("lnd", "verified", EXIT_OK, payload, {"bound": verdict.bound}, trace=trace)


def _cancel(pf, b, task, options):
    gname = _need_gens(pf, task)
    dname = task.options.get("derivation")
    if dname is None or dname not in pf.derivations:
        raise grammar.UndefinedName(task.line, 1, ["derivation=NAME"], dname)
    gd = pf.gens[gname]
    dd = pf.derivations[dname]
    ring, syms = b.sympy_ring(gd.ring)
    if dd.ring != gd.ring:
        raise BuildError(task.line, "derivation and generators must share a ring")
    gens = b.sympy_exprs(gd.ring, gd.exprs, gd.line)
    used = set().union(*[g.free_symbols for g in gens])
    if len(used) != 1:
        raise UnsupportedTowerShape("generators of R must use exactly one ring variable")
    theta = used.pop()
    extra = [v for v in ring.variables if v != str(theta)]
    uni = [_sym_to_uni(g, theta) for g in gens]
    img = [sympy.Integer(0)] * len(gens)
    ximg = {v: sympy.Integer(0) for v in extra}
    for key, val in dd.pairs:
        kexpr = b.sympy_exprs(gd.ring, [key], dd.line)[0]
        vexpr = b.sympy_exprs(gd.ring, [val], dd.line)[0]
        if isinstance(key, Name) and key.name in ximg:
            ximg[key.name] = vexpr
            continue
        idx = next((i for i, g in enumerate(gens) if sympy.expand(g - kexpr) == 0), None)
        if idx is None:
            raise BuildError(dd.line, f"key {kexpr} is neither an adjoined variable "
                                      "nor a generator of R")
        img[idx] = vexpr
    # adjoined variables are renamed x1..xn in the trace
    rename = {sympy.Symbol(v): sympy.Symbol(f"x{j + 1}") for j, v in enumerate(extra)}
    img = [sympy.sympify(e).xreplace(rename) for e in img]
    ximgs = [sympy.sympify(ximg[v]).xreplace(rename) for v in extra]
    bound = _opt(task.options, options.bound, "bound", None)
    tr = cancellation_trace(uni, len(extra), img, ximgs, bound)
    if not all(st["verified"] for st in tr.steps):
        raise VerificationFailed("trace", tr.to_json())
    payload = {"trace": tr.to_json(), "variables": {f"x{j + 1}": v for j, v in enumerate(extra)}}
    return RunReport("cancel", "verified", EXIT_OK, payload, {"bound": bound},
                     trace=tr.narrative().splitlines())


def _sym_to_uni(expr, sym):
    from fractions import Fraction

    from ..fields import QQ

    poly = sympy.Poly(expr, sym, domain="QQ")
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    return UniPoly(QQ, coeffs, str(sym))


def _verify(pf, b, task, options):
    import os

    problem = _problem(pf, b, task, options)
    path = task.options.get("cert")
    if path is None:
        raise grammar.ParseError(task.line, 1, ["cert=FILE"], None)
    full = path if os.path.isabs(path) else os.path.join(options.base_dir, path)
    try:
        with open(full, encoding="utf-8") as fh:
            data = json.load(fh)
        if "result" in data:
            data = data["result"]
        if options.bound is None and "bound" in data and "bound" not in task.options:
            problem.bound = int(data["bound"])
        cert = serialize.certificate_from_json(data, problem.presentation.k)
    except (OSError, ValueError, KeyError, TypeError, grammar.ParseError, AffEmbedError,
            ZeroDivisionError) as exc:
        raise VerificationFailed("certificate", f"unreadable certificate: {exc}") from exc
    report = verify_certificate(problem, cert)
    payload = {"certificate": path, "verification": report}
    trace = [f"certificate {path} re-verified at bound {problem.bound}",
             f"checks: {', '.join(report['checks'])}"]
    return RunReport("verify", "verified", EXIT_OK, payload, {"bound": problem.bound},
                     trace=trace)
