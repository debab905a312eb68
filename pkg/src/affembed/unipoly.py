"""Dense univariate polynomials and rational functions over a field tower."""

from __future__ import annotations

from typing import Optional

from . import _poly
from .errors import DegreeMismatch
from .fields import Field, FieldElement


class UniPoly:
    """Immutable dense polynomial; ``coeffs`` are raw reps, lowest first."""

    __slots__ = ("field", "coeffs", "var")

    def __init__(self, field: Field, coeffs, var: str = "s", raw: bool = False):
        self.field = field
        self.var = var
        if raw:
            self.coeffs = tuple(_poly.trim(field, coeffs))
        else:
            self.coeffs = tuple(_poly.trim(field, [field.coerce_rep(c) for c in coeffs]))

    # -- construction ------------------------------------------------------
    @classmethod
    def monomial(cls, field, n, coeff=1, var="s"):
        return cls(field, [0] * n + [coeff], var)

    @classmethod
    def gen(cls, field, var="s"):
        return cls.monomial(field, 1, 1, var)

    def _new(self, coeffs, field=None):
        return UniPoly(field or self.field, coeffs, self.var, raw=True)

    def coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.field == self.field:
                return other
            if self.field.contains_field(other.field):
                return other.over(self.field)
            raise TypeError(f"incompatible fields {self.field} and {other.field}")
        return UniPoly(self.field, [other], self.var)

    def over(self, field: Field) -> "UniPoly":
        """The same polynomial viewed over a larger tower."""
        src = self.field
        return UniPoly(field, [field.coerce_rep(FieldElement(src, c)) for c in self.coeffs],
                       self.var, raw=True)

    # -- basic data ----------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def coeff(self, i) -> FieldElement:
        if 0 <= i < len(self.coeffs):
            return FieldElement(self.field, self.coeffs[i])
        return FieldElement(self.field, self.field.zero())

    def __getitem__(self, i):
        return self.coeff(i)

    @property
    def lc(self) -> FieldElement:
        return self.coeff(self.degree)

    def leading_form(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self._new([self.field.zero()] * self.degree + [self.coeffs[-1]])

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if not self.field.is_zero(c)]

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = self.coerce(other)
        if other.field != self.field:
            return other + self
        return self._new(_poly.add(self.field, list(self.coeffs), list(other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return self._new(_poly.neg(self.field, list(self.coeffs)))

    def __sub__(self, other):
        return self + (-self.coerce(other))

    def __rsub__(self, other):
        return self.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            other = self.coerce(other)
            return self._new(_poly.mul(self.field, list(self.coeffs), list(other.coeffs)))
        c = self.field.coerce_rep(other)
        return self._new(_poly.scale(self.field, list(self.coeffs), c))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return self._new(_poly.power(self.field, list(self.coeffs), n))

    def __divmod__(self, other):
        other = self.coerce(other)
        q, r = _poly.divmod_(self.field, list(self.coeffs), list(other.coeffs))
        return self._new(q), self._new(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        """Division by a nonzero scalar."""
        c = self.field.coerce_rep(other)
        return self._new(_poly.scale(self.field, list(self.coeffs), self.field.inv(c)))

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            if other.field != self.field:
                try:
                    other = self.coerce(other)
                except TypeError:
                    try:
                        return other.coerce(self) == other
                    except TypeError:
                        return False
            return self.coeffs == other.coeffs
        try:
            return self == self.coerce(other)
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def monic(self) -> "UniPoly":
        return self._new(_poly.monic(self.field, list(self.coeffs)))

    def deriv(self) -> "UniPoly":
        return self._new(_poly.deriv(self.field, list(self.coeffs)))

    def d_u(self) -> "UniPoly":
        """Coefficientwise derivative in the transcendental generator."""
        F = self.field
        return self._new([F.d_u(c) for c in self.coeffs])

    def __call__(self, x):
        """Evaluate at a field element, or compose with a polynomial."""
        if isinstance(x, UniPoly):
            return self.compose(x)
        x = self.field(x)
        return FieldElement(self.field, _poly.evaluate(self.field, list(self.coeffs), x.rep))

    def compose(self, h: "UniPoly") -> "UniPoly":
        h = self.coerce(h)
        out = _poly.compose(self.field, list(self.coeffs), list(h.coeffs))
        return UniPoly(self.field, out, h.var, raw=True)

    def with_var(self, var) -> "UniPoly":
        return UniPoly(self.field, self.coeffs, var, raw=True)

    def __repr__(self):
        F = self.field
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            cs = F.show(c)
            if i == 0:
                terms.append(cs)
                continue
            mon = self.var if i == 1 else f"{self.var}^{i}"
            if c == F.one():
                terms.append(mon)
            elif c == F.neg(F.one()):
                terms.append("-" + mon)
            else:
                terms.append(f"({cs})*{mon}")
        return " + ".join(terms)


def euclidean_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic greatest common divisor; ``f`` and ``g`` not both zero."""
    g = f.coerce(g)
    if not f and not g:
        raise ValueError("gcd of two zero polynomials")
    return f._new(_poly.gcd(f.field, list(f.coeffs), list(g.coeffs)))


def resultant(f: UniPoly, g: UniPoly) -> FieldElement:
    """Resultant via the Euclidean remainder sequence."""
    F = f.field
    g = f.coerce(g)
    a, b = list(f.coeffs), list(g.coeffs)
    if not a or not b:
        return F(0)
    res = F.one()
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return FieldElement(F, F.mul(res, F.pow(b[0], da)))
        r = _poly.rem(F, a, b)
        if not r:
            return F(0)
        dr = len(r) - 1
        if da % 2 == 1 and db % 2 == 1:
            res = F.neg(res)
        res = F.mul(res, F.pow(b[-1], da - dr))
        a, b = b, r


def taylor_shift(f: UniPoly, c) -> UniPoly:
    return f.compose(UniPoly(f.field, [c, 1], f.var))


def _series_root(F, series, r, n):
    """First n coefficients of the r-th root of a series with constant term 1."""
    root = [F.one()] + [F.zero()] * (n - 1)
    inv_r = F.inv(F.from_int(r))
    for k in range(1, n):
        power = _poly.power(F, _poly.trim(F, root[:k]), r)
        pk = power[k] if k < len(power) else F.zero()
        fk = series[k] if k < len(series) else F.zero()
        root[k] = F.mul(F.sub(fk, pk), inv_r)
    return root


def adic_expansion(f: UniPoly, h: UniPoly) -> Optional[UniPoly]:
    """Return g with f == g(h) if such g exists, else None (var ``y``)."""
    if h.degree < 1:
        raise ValueError("h must be non-constant")
    F = f.field
    h = f.coerce(h)
    digits = []
    cur = f
    while cur:
        q, r = divmod(cur, h)
        if r.degree > 0:
            return None
        digits.append(r.coeffs[0] if r else F.zero())
        cur = q
    return UniPoly(F, digits, "y", raw=True)


def decompose_right(f: UniPoly, e: int):
    """Find (g, h) with f == g(h), deg h == e, h monic with zero constant term.

    Returns None when no such right factor exists.
    """
    n = f.degree
    if e < 1 or n < 0 or n % e:
        raise DegreeMismatch(f"{e} does not divide deg f = {n}")
    F = f.field
    if e == n:
        h = (f - f.coeff(0)).monic()
        g = UniPoly(F, [f.coeffs[0], f.coeffs[-1]], "y", raw=True)
        return g, h
    r = n // e
    fm = f.monic()
    rev = list(reversed(fm.coeffs))
    root = _series_root(F, rev, r, e)
    # root holds 1, h_{e-1}, ..., h_1; the constant term of h is forced to 0
    h = UniPoly(F, [F.zero()] + list(reversed(root[1:])) + [F.one()], f.var, raw=True)
    g = adic_expansion(f, h)
    if g is None:
        return None
    return g, h


def map_coefficients(f: UniPoly, phi, target: Optional[Field] = None) -> UniPoly:
    """Apply a coefficient homomorphism; ``target`` defaults to ``phi.target``."""
    target = target if target is not None else phi.target
    out = [target.coerce_rep(phi(FieldElement(f.field, c))) for c in f.coeffs]
    return UniPoly(target, out, f.var, raw=True)


class RationalFunction:
    """``num/den`` in lowest terms with ``den`` monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: Optional[UniPoly] = None):
        if den is None:
            den = UniPoly(num.field, [1], num.var)
        den = num.coerce(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = euclidean_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        else:
            den = UniPoly(num.field, [1], num.var)
        lc = den.lc
        self.num = num / lc
        self.den = den / lc

    @property
    def field(self):
        return self.num.field

    @property
    def var(self):
        return self.num.var

    @property
    def degree(self):
        """max(deg num, deg den): the index [k(s) : k(f)] for non-constant f."""
        return max(self.num.degree, self.den.degree)

    def is_constant(self):
        return self.num.degree <= 0 and self.den.degree <= 0

    def is_polynomial(self):
        return self.den.degree == 0

    def __add__(self, other):
        other = _as_rf(other, self)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_as_rf(other, self))

    def __rsub__(self, other):
        return _as_rf(other, self) - self

    def __mul__(self, other):
        other = _as_rf(other, self)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other, self)
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other, self) / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        return RationalFunction(self.num**n, self.den**n)

    def __eq__(self, other):
        try:
            other = _as_rf(other, self)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def compose(self, t: "RationalFunction") -> "RationalFunction":
        """self(t) for a rational function t."""
        t = _as_rf(t, self)
        m = self.degree
        # homogenize: num(t) = sum a_i p^i q^(m-i) / q^m
        p, q = t.num, t.den

        def hom(poly):
            acc = UniPoly(self.field, [], t.var)
            for i, c in enumerate(poly.coeffs):
                acc = acc + (p**i) * (q ** (m - i)) * FieldElement(self.field, c)
            return acc

        return RationalFunction(hom(self.num), hom(self.den))

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num})/({self.den})"


def _as_rf(x, like: RationalFunction) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, UniPoly):
        return RationalFunction(like.num.coerce(x))
    return RationalFunction(UniPoly(like.field, [x], like.var))
