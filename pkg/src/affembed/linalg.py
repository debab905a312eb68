"""Exact linear algebra over a field level and coordinates of tower elements.

Vectors are dense lists of raw reps of the coefficient field.  Column order
carries meaning for the graded code: a pivot is the first nonzero entry, so
placing higher degrees first makes pivots leading terms.
"""

from __future__ import annotations

from . import _poly
from .fields import AlgebraicExtension, Field, FieldElement


class Echelon:
    """Incrementally built semi-echelon basis with optional transforms.

    Each stored row is normalized to 1 at its pivot and zero at every
    earlier column.  ``transform`` dicts record the row as a combination of
    the inserted input vectors.
    """

    def __init__(self, F: Field, ncols: int):
        self.F = F
        self.ncols = ncols
        self.rows = {}  # pivot column -> (vector, transform)

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec, transform=None):
        F = self.F
        vec = list(vec)
        tr = dict(transform) if transform is not None else None
        for col in range(self.ncols):
            c = vec[col]
            if F.is_zero(c) or col not in self.rows:
                continue
            row, rtr = self.rows[col]
            for j in range(col, self.ncols):
                if not F.is_zero(row[j]):
                    vec[j] = F.sub(vec[j], F.mul(c, row[j]))
            if tr is not None:
                for key, v in rtr.items():
                    nv = F.sub(tr.get(key, F.zero()), F.mul(c, v))
                    if F.is_zero(nv):
                        tr.pop(key, None)
                    else:
                        tr[key] = nv
        return vec, tr

    def insert(self, vec, transform=None):
        """Add a vector; return None if independent, else the relation found."""
        F = self.F
        vec, tr = self.reduce(vec, transform)
        for col in range(self.ncols):
            if not F.is_zero(vec[col]):
                inv = F.inv(vec[col])
                vec = [F.mul(inv, x) for x in vec]
                if tr is not None:
                    tr = {k: F.mul(inv, v) for k, v in tr.items()}
                self.rows[col] = (vec, tr)
                return None
        return tr if tr is not None else {}

    def pivot(self, vec):
        for col in range(self.ncols):
            if not self.F.is_zero(vec[col]):
                return col
        return None

    def contains(self, vec):
        red, _ = self.reduce(vec)
        return all(self.F.is_zero(x) for x in red)

    def reduced_rows(self):
        """Fully reduced rows sorted by pivot (canonical RREF)."""
        F = self.F
        pivots = sorted(self.rows)
        rows = {p: (list(v), dict(t) if t is not None else None) for p, (v, t) in self.rows.items()}
        for p in reversed(pivots):
            vec, tr = rows[p]
            for q in pivots:
                if q >= p:
                    break
                qvec, qtr = rows[q]
                c = qvec[p]
                if F.is_zero(c):
                    continue
                qvec = [F.sub(a, F.mul(c, b)) for a, b in zip(qvec, vec)]
                if qtr is not None:
                    qtr = dict(qtr)
                    for key, v in tr.items():
                        nv = F.sub(qtr.get(key, F.zero()), F.mul(c, v))
                        if F.is_zero(nv):
                            qtr.pop(key, None)
                        else:
                            qtr[key] = nv
                rows[q] = (qvec, qtr)
        return [(p, rows[p][0], rows[p][1]) for p in pivots]


def rank(F: Field, rows) -> int:
    rows = list(rows)
    if not rows:
        return 0
    E = Echelon(F, len(rows[0]))
    for r in rows:
        E.insert(r)
    return len(E)


def nullspace(F: Field, rows, ncols: int):
    """Basis of {x : rows . x = 0}, one vector per free column, canonical."""
    E = Echelon(F, ncols)
    for r in rows:
        E.insert(r)
    red = E.reduced_rows()
    pivots = {p: vec for p, vec, _ in red}
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [F.zero()] * ncols
        x[f] = F.one()
        for p, vec in pivots.items():
            x[p] = F.neg(vec[f])
        basis.append(x)
    return basis


# -- coordinates of tower elements over a sub-tower ----------------------------


def _poly_lcm(F, a, b):
    g = _poly.gcd(F, a, b)
    return _poly.monic(F, _poly.divmod_(F, _poly.mul(F, a, b), g)[0])


def u_denominator(F: Field, rep):
    """Monic polynomial D(u) over the base of the transcendental step such
    that D*x has polynomial u-coordinates (``[one]`` when no clearing is
    needed)."""
    T = F.transcendental
    if T is None or not F.contains_field(T):
        return None
    B = T.base

    def rec(G, r):
        if G == T:
            return list(r[1])
        if not G.contains_field(T):
            return [B.one()]
        acc = [B.one()]
        for c in r:
            acc = _poly_lcm(B, acc, rec(G.base, c))
        return acc

    return rec(F, rep)


def common_u_denominator(F: Field, reps):
    T = F.transcendental
    if T is None:
        return None
    B = T.base
    acc = [B.one()]
    for r in reps:
        acc = _poly_lcm(B, acc, u_denominator(F, r))
    return FieldElement(T, T.from_polys(acc))


def coordinates(F: Field, k: Field, rep):
    """Coordinates of ``rep`` over the sub-tower ``k`` as {basis key: k-rep}.

    Basis keys are tuples of (generator name, exponent) pairs.  Above ``k``
    a transcendental step requires polynomial u-dependence; clear with
    :func:`common_u_denominator` first.
    """
    if F == k:
        return {(): rep}
    if not F.contains_field(k):
        raise ValueError(f"{k} is not a sub-tower of {F}")
    out = {}
    if isinstance(F, AlgebraicExtension):
        parts = enumerate(rep)
    else:
        if len(rep[1]) != 1:
            raise ValueError("element has a u-denominator; clear it first")
        parts = enumerate(rep[0])
    for i, c in parts:
        if F.base.is_zero(c):
            continue
        for key, v in coordinates(F.base, k, c).items():
            out[((F.name, i),) + key] = v
    return out


def from_coordinates(F: Field, k: Field, coords):
    """Inverse of :func:`coordinates`."""
    acc = F.zero()
    for key, v in coords.items():
        term = F.coerce_rep(FieldElement(k, v))
        for name, i in key:
            G = next(G for G in F.chain if G.name == name)
            term = F.mul(term, F.pow(F.coerce_rep(G.gen()), i))
        acc = F.add(acc, term)
    return acc


def basis_key_order(key):
    return tuple((name, -i) for name, i in key)
