"""Exact arithmetic in field towers over the rationals.

A tower is built from ``QQ`` by algebraic steps (a root of a monic
irreducible polynomial over the level below) and at most one transcendental
step (a rational function field in one variable).  Each level is a
:class:`Field`; elements are wrapped in :class:`FieldElement` but all level
methods work on raw canonical representations:

* ``QQ``: :class:`fractions.Fraction`
* algebraic step of degree n: a tuple of n base representations
* transcendental step: a pair ``(num, den)`` of coefficient tuples over the
  base, ``den`` monic and coprime to ``num``

Representations are canonical, so equality of elements is equality of
representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Optional

from . import _poly
from .errors import (
    DenominatorVanishes,
    ReducibleMinimalPolynomial,
    UnsupportedTowerShape,
)


class Field:
    base: Optional["Field"] = None
    name: str = ""

    # -- tower structure -------------------------------------------------
    @property
    def chain(self):
        """Levels from QQ up to self."""
        out = []
        F = self
        while F is not None:
            out.append(F)
            F = F.base
        return out[::-1]

    @property
    def key(self):
        return tuple(F._step_key() for F in self.chain)

    def __eq__(self, other):
        return isinstance(other, Field) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def contains_field(self, other: "Field") -> bool:
        """True when ``other`` is a sub-tower (prefix) of this tower."""
        k = other.key
        return self.key[: len(k)] == k

    @property
    def transcendental(self) -> Optional["FunctionField"]:
        for F in self.chain:
            if isinstance(F, FunctionField):
                return F
        return None

    @property
    def generators(self):
        return [F.name for F in self.chain[1:]]

    # -- elements --------------------------------------------------------
    def __call__(self, x) -> "FieldElement":
        return FieldElement(self, self.coerce_rep(x))

    def gen(self) -> "FieldElement":
        raise TypeError(f"{self!r} has no generator")

    def coerce_rep(self, x):
        if isinstance(x, FieldElement):
            if x.field == self:
                return x.rep
            if self.base is not None and self.contains_field(x.field):
                return self.embed(self.base.coerce_rep(x))
            raise TypeError(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, (int, Rational)):
            return self.from_fraction(Fraction(x))
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def from_int(self, n):
        return self.from_fraction(Fraction(n))

    def from_fraction(self, q):
        return self.embed(self.base.from_fraction(q))

    def zero(self):
        return self.from_fraction(Fraction(0))

    def one(self):
        return self.from_fraction(Fraction(1))

    def is_zero(self, a):
        return a == self.zero()

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = self.one(), a
        while n:
            if n & 1:
                result = self.mul(result, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return result

    @property
    def absolute_degree(self):
        """Degree over QQ of the algebraic part (None once transcendental)."""
        deg = 1
        for F in self.chain[1:]:
            if isinstance(F, FunctionField):
                return None
            deg *= F.degree
        return deg

    def __repr__(self):
        parts = ["QQ"]
        for F in self.chain[1:]:
            if isinstance(F, FunctionField):
                parts.append(f"({F.name})")
            else:
                parts.append(f"[{F.name}]")
        return "".join(parts)


class RationalField(Field):
    name = "QQ"

    def _step_key(self):
        return ("Q",)

    def from_fraction(self, q):
        return Fraction(q)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_zero(self, a):
        return a == 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return 1 / a

    def embed(self, a):
        return a

    def d_u(self, a):
        return Fraction(0)

    def show(self, a):
        return str(a)


QQ = RationalField()


class AlgebraicExtension(Field):
    """``base[name]/(minpoly)`` with ``minpoly`` monic and irreducible.

    Use :func:`adjoin_algebraic` to construct with an irreducibility check.
    """

    def __init__(self, base: Field, name: str, minpoly):
        self.base = base
        self.name = name
        self.minpoly = tuple(minpoly)
        self.degree = len(self.minpoly) - 1
        if self.degree < 2:
            raise ValueError("minimal polynomial must have degree >= 2")
        if self.minpoly[-1] != base.one():
            raise ValueError("minimal polynomial must be monic")

    def _step_key(self):
        return ("alg", self.name, self.minpoly)

    def _pad(self, p):
        p = list(p) + [self.base.zero()] * (self.degree - len(p))
        return tuple(p)

    def _reduce(self, p):
        return self._pad(_poly.rem(self.base, p, list(self.minpoly)))

    def embed(self, a):
        return self._pad([a])

    def gen(self):
        return FieldElement(self, self._pad([self.base.zero(), self.base.one()]))

    def add(self, a, b):
        B = self.base
        return tuple(B.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        B = self.base
        return tuple(B.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        B = self.base
        return self._reduce(_poly.mul(B, _poly.trim(B, a), _poly.trim(B, b)))

    def inv(self, a):
        B = self.base
        p = _poly.trim(B, a)
        if not p:
            raise ZeroDivisionError(f"division by zero in {self}")
        g, s, _ = _poly.xgcd(B, p, list(self.minpoly))
        if len(g) != 1:
            raise ZeroDivisionError("minimal polynomial is not irreducible")
        return self._reduce(s)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def d_u(self, a):
        """Derivative with respect to the transcendental generator."""
        B = self.base
        if self.transcendental is None:
            return self.zero()
        m = [B.d_u(c) for c in self.minpoly]
        dm = _poly.deriv(B, list(self.minpoly))
        # d(alpha) = -m^D(alpha) / m'(alpha)
        num = self._reduce(_poly.trim(B, m))
        den = self._reduce(dm)
        dalpha = self.neg(self.div(num, den))
        out = self._pad([B.d_u(c) for c in a])
        da = _poly.trim(B, a)
        deriv_alpha = self._reduce(_poly.deriv(B, da))
        return self.add(out, self.mul(deriv_alpha, dalpha))

    def show(self, a):
        terms = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            cs = self.base.show(c)
            if i == 0:
                terms.append(cs)
            else:
                mon = self.name if i == 1 else f"{self.name}^{i}"
                terms.append(mon if c == self.base.one() else f"({cs})*{mon}")
        return " + ".join(terms) if terms else "0"


class FunctionField(Field):
    """Rational function field ``base(name)`` in one transcendental."""

    def __init__(self, base: Field, name: str):
        if base.transcendental is not None:
            raise UnsupportedTowerShape(
                "at most one transcendental generator is supported"
            )
        self.base = base
        self.name = name

    def _step_key(self):
        return ("trans", self.name)

    def _make(self, num, den):
        B = self.base
        num = _poly.trim(B, num)
        den = _poly.trim(B, den)
        if not den:
            raise ZeroDivisionError(f"division by zero in {self}")
        if not num:
            return ((), (B.one(),))
        g = _poly.gcd(B, num, den)
        if len(g) > 1:
            num = _poly.divmod_(B, num, g)[0]
            den = _poly.divmod_(B, den, g)[0]
        lc = B.inv(den[-1])
        return (tuple(_poly.scale(B, num, lc)), tuple(_poly.scale(B, den, lc)))

    def from_polys(self, num, den=None):
        B = self.base
        return self._make(list(num), list(den) if den is not None else [B.one()])

    def embed(self, a):
        return self._make([a], [self.base.one()])

    def gen(self):
        B = self.base
        return FieldElement(self, ((B.zero(), B.one()), (B.one(),)))

    def zero(self):
        return ((), (self.base.one(),))

    def one(self):
        return ((self.base.one(),), (self.base.one(),))

    def is_zero(self, a):
        return not a[0]

    def add(self, a, b):
        B = self.base
        if a[1] == b[1]:
            return self._make(_poly.add(B, list(a[0]), list(b[0])), list(a[1]))
        num = _poly.add(
            B, _poly.mul(B, list(a[0]), list(b[1])), _poly.mul(B, list(b[0]), list(a[1]))
        )
        return self._make(num, _poly.mul(B, list(a[1]), list(b[1])))

    def neg(self, a):
        return (tuple(_poly.neg(self.base, list(a[0]))), a[1])

    def mul(self, a, b):
        B = self.base
        return self._make(
            _poly.mul(B, list(a[0]), list(b[0])), _poly.mul(B, list(a[1]), list(b[1]))
        )

    def inv(self, a):
        if not a[0]:
            raise ZeroDivisionError(f"division by zero in {self}")
        return self._make(list(a[1]), list(a[0]))

    def d_u(self, a):
        B = self.base
        n, d = list(a[0]), list(a[1])
        num = _poly.sub(B, _poly.mul(B, _poly.deriv(B, n), d), _poly.mul(B, n, _poly.deriv(B, d)))
        return self._make(num, _poly.mul(B, d, d))

    def show(self, a):
        B = self.base

        def p(coeffs):
            terms = []
            for i, c in enumerate(coeffs):
                if B.is_zero(c):
                    continue
                cs = B.show(c)
                if i == 0:
                    terms.append(cs)
                else:
                    mon = self.name if i == 1 else f"{self.name}^{i}"
                    terms.append(mon if c == B.one() else f"({cs})*{mon}")
            return " + ".join(terms) if terms else "0"

        if len(a[1]) == 1:
            return p(a[0])
        return f"({p(a[0])})/({p(a[1])})"


class FieldElement:
    """Immutable element of a :class:`Field`."""

    __slots__ = ("field", "rep")

    def __init__(self, field: Field, rep):
        self.field = field
        self.rep = rep

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field == self.field:
                return self.field, self.rep, other.rep
            if self.field.contains_field(other.field):
                return self.field, self.rep, self.field.coerce_rep(other)
            if other.field.contains_field(self.field):
                return other.field, other.field.coerce_rep(self), other.rep
            raise TypeError(f"incompatible fields {self.field} and {other.field}")
        return self.field, self.rep, self.field.coerce_rep(other)

    def __add__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.sub(a, b))

    def __rsub__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.sub(b, a))

    def __mul__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.mul(a, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.div(a, b))

    def __rtruediv__(self, other):
        if not isinstance(other, (FieldElement, int, Rational)):
            return NotImplemented
        F, a, b = self._other(other)
        return FieldElement(F, F.div(b, a))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.rep))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.rep, n))

    def inverse(self):
        return FieldElement(self.field, self.field.inv(self.rep))

    def is_zero(self):
        return self.field.is_zero(self.rep)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        try:
            F, a, b = self._other(other)
        except TypeError:
            return NotImplemented
        return a == b

    def __hash__(self):
        return hash(self.rep)

    def d_u(self):
        return FieldElement(self.field, self.field.d_u(self.rep))

    def is_constant_in_u(self):
        return self.field.transcendental is None or self.field.is_zero(self.field.d_u(self.rep))

    def __repr__(self):
        return self.field.show(self.rep)


# -- tower construction ----------------------------------------------------


def adjoin_algebraic(tower: Field, name: str, minpoly) -> AlgebraicExtension:
    """Adjoin a root of ``minpoly`` (coefficients over ``tower``, low first).

    Raises :class:`ReducibleMinimalPolynomial` carrying a monic factor when
    the polynomial factors over ``tower``.
    """
    from .factor import factor_over

    coeffs = _poly.trim(tower, [tower.coerce_rep(c) for c in minpoly])
    if len(coeffs) < 3:
        raise ValueError("minimal polynomial must have degree >= 2")
    if coeffs[-1] != tower.one():
        raise ValueError("minimal polynomial must be monic")
    if name in tower.generators:
        raise ValueError(f"generator name {name!r} already used")
    factors = factor_over(tower, coeffs)
    if len(factors) != 1 or factors[0][1] != 1:
        witness = min((f for f, _ in factors), key=len)
        raise ReducibleMinimalPolynomial(
            f"{name}: minimal polynomial is reducible over {tower}",
            factor=[FieldElement(tower, c) for c in witness],
        )
    return AlgebraicExtension(tower, name, coeffs)


def adjoin_transcendental(tower: Field, name: str) -> FunctionField:
    if name in tower.generators:
        raise ValueError(f"generator name {name!r} already used")
    return FunctionField(tower, name)


@dataclass(frozen=True)
class RootExtension:
    """Result of :func:`eth_root_extend`.

    ``lift`` maps elements of the old tower into ``tower``; it is plain
    coercion except after a reparametrization ``u = v**exponent``.
    """

    tower: Field
    root: FieldElement
    degree: int
    binomial_reducible: bool = False
    reparametrization: Optional[tuple] = None  # (old name, new name, exponent)

    def lift(self, x):
        return lift_through(self.tower, x, self.reparametrization)


def lift_through(tower: Field, x, reparametrization=None):
    if reparametrization is None or not isinstance(x, FieldElement):
        return tower(x)
    old, new, e = reparametrization
    F = x.field
    if F.transcendental is None:
        return tower(x)
    T = F.transcendental
    if T is not F:
        raise UnsupportedTowerShape("reparametrization needs the transcendental on top")
    target = tower.transcendental
    B = T.base

    def subst(p):
        out = [B.zero()] * ((len(p) - 1) * e + 1) if p else []
        for i, c in enumerate(p):
            out[i * e] = c
        return [target.base.coerce_rep(FieldElement(B, c)) for c in out]

    num, den = x.rep
    rep = target._make(subst(num), subst(den))
    return tower(FieldElement(target, rep))


def _monomial_form(F: FunctionField, rep):
    """Return (gamma, m) when rep == gamma * u**m, else None."""
    num, den = rep
    B = F.base
    nz = [i for i, c in enumerate(num) if not B.is_zero(c)]
    dz = [i for i, c in enumerate(den) if not B.is_zero(c)]
    if len(nz) != 1 or len(dz) != 1:
        return None
    return num[nz[0]], nz[0] - dz[0]


def eth_root_extend(tower: Field, kappa, e: int, name: str = "c") -> RootExtension:
    """Return a tower containing ``c`` with ``c**e == kappa``.

    No extension is made when ``kappa`` is already an ``e``-th power.  A pure
    monomial ``gamma*u**m`` over a top-level rational function field with
    ``gamma`` an ``e``-th power is handled by substituting ``u = v**e'``.
    Otherwise an irreducible factor of ``x**e - kappa`` of least degree is
    adjoined; ``binomial_reducible`` reports a proper factor.
    """
    from .factor import factor_over

    if e < 1:
        raise ValueError("e must be positive")
    kappa = tower(kappa)
    if kappa.is_zero():
        raise ValueError("kappa must be nonzero")
    if e == 1:
        return RootExtension(tower, kappa, 1)
    F = tower
    binom = [F.neg(kappa.rep)] + [F.zero()] * (e - 1) + [F.one()]
    factors = factor_over(F, binom)
    for f, _ in factors:
        if len(f) == 2:
            return RootExtension(F, FieldElement(F, F.neg(f[0])), 1)
    if isinstance(F, FunctionField):
        mono = _monomial_form(F, kappa.rep)
        if mono is not None:
            gamma, m = mono
            B = F.base
            g = None
            gbin = [B.neg(gamma)] + [B.zero()] * (e - 1) + [B.one()]
            for f, _ in factor_over(B, gbin):
                if len(f) == 2:
                    g = B.neg(f[0])
                    break
            if g is not None and m != 0:
                from math import gcd

                h = gcd(e, abs(m))
                e_new = e // h
                new_name = name if name not in F.generators else name + "_"
                Fv = FunctionField(B, new_name)
                v = Fv.gen()
                root = FieldElement(Fv, Fv.embed(g)) * v ** (m // h)
                return RootExtension(
                    Fv, root, e_new, reparametrization=(F.name, new_name, e_new)
                )
    best = min((f for f, _ in factors), key=len)
    new = AlgebraicExtension(F, name, best)
    return RootExtension(
        new, new.gen(), len(best) - 1, binomial_reducible=len(best) - 1 < e
    )


# -- specialization ----------------------------------------------------------


@dataclass(frozen=True)
class Specialization:
    """Evaluation map ``u -> point`` on a tower with a transcendental step.

    The target tower drops the transcendental step; algebraic steps above it
    are rebuilt over their specialized minimal polynomials.  Elements whose
    denominators vanish at the point raise :class:`DenominatorVanishes`.
    """

    source: Field
    target: Field
    point: FieldElement

    def __call__(self, x) -> FieldElement:
        x = self.source(x)
        top = len(self.source.chain) - 1
        return FieldElement(self.target, self._map(top, x.rep))

    def _map(self, i, rep):
        chain = self.source.chain
        T = self.source.transcendental
        tidx = chain.index(T)
        if i < tidx:
            return rep
        if i == tidx:
            B = T.base
            num = _poly.evaluate(B, list(rep[0]), self.point.rep)
            den = _poly.evaluate(B, list(rep[1]), self.point.rep)
            if B.is_zero(den):
                raise DenominatorVanishes(FieldElement(T, rep), self.point)
            return B.div(num, den)
        return tuple(self._map(i - 1, c) for c in rep)

    def defined_at(self, x) -> bool:
        try:
            self(x)
        except DenominatorVanishes:
            return False
        return True


def specialize(tower: Field, point) -> Specialization:
    """Build the evaluation homomorphism ``u -> point``.

    ``point`` must lie in the sub-tower below the transcendental step.
    Minimal polynomials of algebraic steps above the transcendental must stay
    irreducible after evaluation (checked).
    """
    T = tower.transcendental
    if T is None:
        raise UnsupportedTowerShape("tower has no transcendental step")
    point = T.base(point)
    chain = tower.chain
    built = T.base
    for step in chain[chain.index(T) + 1:]:
        sp = Specialization(step.base, built, point)
        mp = [sp(FieldElement(step.base, c)) for c in step.minpoly]
        built = adjoin_algebraic(built, step.name, mp)
    return Specialization(tower, built, point)
