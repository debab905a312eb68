"""Line-oriented problem-file grammar.

::

    # comment
    field k = Q
    field L = k(u)
    extend K = k adjoin a minpoly a^2 - 2
    ring B = K[s]
    gens R in B over k = { a*s^2, a*s^3 }
    derivation D on B = { x -> 0, y -> x }
    task embed R bound=10 seed=1

Expressions use ``+ - * / ^``, parentheses, integer literals and declared
names.  :func:`parse` only raises :class:`ParseError` (or its subclasses).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

TASK_KINDS = ("embed", "sagbi", "normalize", "conductor", "lnd", "cancel", "verify")


class ParseError(Exception):
    def __init__(self, line, column, expected, found=None, source_line=""):
        self.line = line
        self.column = column
        self.expected = tuple(expected) if not isinstance(expected, str) else (expected,)
        self.found = found
        self.source_line = source_line
        super().__init__(self.message())

    def message(self):
        exp = ", ".join(self.expected)
        found = f", found {self.found!r}" if self.found is not None else ""
        return f"line {self.line}, column {self.column}: expected {exp}{found}"

    def diagnostic(self):
        caret = " " * max(self.column - 1, 0) + "^"
        return f"{self.message()}\n  {self.source_line}\n  {caret}"

    def to_json(self):
        return {"error": type(self).__name__, "line": self.line, "column": self.column,
                "expected": list(self.expected), "found": self.found}


class UndefinedName(ParseError):
    pass


class DuplicateTask(ParseError):
    pass


# -- tokens ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
                    r"|(?P<op>->|[-+*/^()\[\]{},=]))")


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    col: int  # 1-based


def tokenize(text: str, lineno: int):
    out = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(lineno, pos + 1, ["name", "number", "operator"], text[pos], text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start + 1))
        pos = m.end()
    out.append(Token("end", "", n + 1))
    return out


# -- expressions ------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    col: int


@dataclass(frozen=True)
class Name:
    name: str
    col: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    col: int


@dataclass(frozen=True)
class Neg:
    operand: object
    col: int


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    col: int


class _Cursor:
    def __init__(self, tokens, lineno, source):
        self.toks = tokens
        self.i = 0
        self.lineno = lineno
        self.source = source

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, expected):
        t = self.tok
        return ParseError(self.lineno, t.col, expected, t.text or "end of line", self.source)

    def accept(self, kind, text=None):
        t = self.tok
        if t.kind == kind and (text is None or t.text == text):
            self.i += 1
            return t
        return None

    def expect(self, kind, text=None, what=None):
        t = self.accept(kind, text)
        if t is None:
            raise self.error([what or (repr(text) if text else kind)])
        return t

    def at_end(self):
        return self.tok.kind == "end"


def _expr(c: _Cursor):
    node = _term(c)
    while True:
        t = c.accept("op", "+") or c.accept("op", "-")
        if t is None:
            return node
        node = BinOp(t.text, node, _term(c), t.col)


def _term(c: _Cursor):
    node = _unary(c)
    while True:
        t = c.accept("op", "*") or c.accept("op", "/")
        if t is None:
            return node
        node = BinOp(t.text, node, _unary(c), t.col)


def _unary(c: _Cursor):
    t = c.accept("op", "-")
    if t is not None:
        return Neg(_unary(c), t.col)
    t = c.accept("op", "+")
    if t is not None:
        return _unary(c)
    return _power(c)


def _power(c: _Cursor):
    base = _atom(c)
    t = c.accept("op", "^")
    if t is None:
        return base
    neg = c.accept("op", "-") is not None
    e = c.accept("num")
    if e is None:
        raise c.error(["integer exponent"])
    val = int(e.text)
    return Pow(base, -val if neg else val, t.col)


def _atom(c: _Cursor):
    t = c.tok
    if t.kind == "num":
        c.i += 1
        return Num(int(t.text), t.col)
    if t.kind == "name":
        c.i += 1
        return Name(t.text, t.col)
    if c.accept("op", "("):
        node = _expr(c)
        c.expect("op", ")")
        return node
    raise c.error(["number", "name", "'('", "'-'"])


def expression_names(node):
    if isinstance(node, Name):
        yield node
    elif isinstance(node, BinOp):
        yield from expression_names(node.left)
        yield from expression_names(node.right)
    elif isinstance(node, (Neg,)):
        yield from expression_names(node.operand)
    elif isinstance(node, Pow):
        yield from expression_names(node.base)


def divide(a, b):
    from ..unipoly import UniPoly

    if isinstance(b, UniPoly):
        if b.degree != 0:
            raise ZeroDivisionError("division by a non-constant polynomial")
        b = b.coeff(0)
    if not b:
        raise ZeroDivisionError("division by zero")
    return a / b


def show(node) -> str:
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Neg):
        return f"-({show(node.operand)})"
    if isinstance(node, Pow):
        return f"({show(node.base)})^{node.exponent}"
    return f"({show(node.left)} {node.op} {show(node.right)})"


def parse_expression(text: str, lineno: int = 1):
    c = _Cursor(tokenize(text, lineno), lineno, text)
    node = _expr(c)
    if not c.at_end():
        raise c.error(["operator", "end of expression"])
    return node


# -- declarations -------------------------------------------------------------------


@dataclass
class FieldDecl:
    name: str
    line: int
    kind: str  # "Q", "transcendental", "algebraic"
    base: Optional[str] = None
    gen: Optional[str] = None
    minpoly: object = None


@dataclass
class RingDecl:
    name: str
    line: int
    field: str
    variables: list


@dataclass
class GensDecl:
    name: str
    line: int
    ring: str
    over: Optional[str]
    exprs: list


@dataclass
class DerivationDecl:
    name: str
    line: int
    ring: str
    pairs: list  # (key expression, image expression)


@dataclass
class TaskDecl:
    kind: str
    target: str
    line: int
    options: dict = field(default_factory=dict)


@dataclass
class ProblemFile:
    fields: dict
    rings: dict
    gens: dict
    derivations: dict
    task: Optional[TaskDecl]
    order: list  # declaration names in file order

    def generator_names(self, field_name):
        """Generator names of a field tower, from QQ upwards."""
        names = []
        f = self.fields[field_name]
        while f.kind != "Q":
            names.extend(reversed(f.gen.split(",")))
            f = self.fields[f.base]
        return list(reversed(names))


_INT_OPTIONS = {"bound", "seed", "retries", "n", "limit", "ml"}


def _comma_list(c: _Cursor, close: str):
    items = []
    if c.accept("op", close):
        return items
    while True:
        items.append(_expr(c))
        if c.accept("op", close):
            return items
        if not c.accept("op", ","):
            raise c.error(["','", repr(close)])


def parse(text: str) -> ProblemFile:
    """Parse a problem file; every failure is a :class:`ParseError`."""
    if not isinstance(text, str):
        raise ParseError(1, 1, ["text"], type(text).__name__)
    try:
        return _parse(text)
    except RecursionError:
        raise ParseError(0, 0, ["shallower nesting"], "deeply nested expression") from None


def _parse(text: str) -> ProblemFile:
    pf = ProblemFile({}, {}, {}, {}, None, [])
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        first = line.split()[0]
        if first == "task":
            _parse_task(pf, line, lineno)
            continue
        c = _Cursor(tokenize(line, lineno), lineno, line)
        kw = c.expect("name", what="declaration keyword")
        if kw.text not in ("field", "extend", "ring", "gens", "derivation"):
            raise ParseError(lineno, kw.col, ["field", "extend", "ring", "gens", "derivation",
                                              "task"], kw.text, line)
        name_tok = c.expect("name", what="name")
        name = name_tok.text
        if name in declared:
            raise ParseError(lineno, name_tok.col, ["new name"], name, line)
        handler = {"field": _field, "extend": _extend, "ring": _ring, "gens": _gens,
                   "derivation": _derivation}[kw.text]
        handler(pf, c, name, lineno)
        if not c.at_end():
            raise c.error(["end of line"])
        declared.add(name)
        pf.order.append(name)
    if pf.task is None:
        raise ParseError(len(text.splitlines()) + 1, 1, ["task directive"], "end of file")
    return pf


def _need(pf_map, tok, c, what):
    if what == "field" and tok.text == "Q" and "Q" not in pf_map:
        pf_map["Q"] = FieldDecl("Q", c.lineno, "Q")
    if tok.text not in pf_map:
        raise UndefinedName(c.lineno, tok.col, [f"declared {what}"], tok.text, c.source)
    return tok.text


def _check_names(c, node, allowed):
    for n in expression_names(node):
        if n.name not in allowed:
            raise UndefinedName(c.lineno, n.col, ["declared name"], n.name, c.source)


def _field(pf, c, name, lineno):
    c.expect("op", "=")
    t = c.expect("name", what="'Q' or a field name")
    if t.text == "Q" and c.at_end():
        pf.fields[name] = FieldDecl(name, lineno, "Q")
        return
    if c.at_end():
        raise c.error(["'('"])
    base = _need(pf.fields, t, c, "field")
    c.expect("op", "(")
    gens = [c.expect("name", what="variable name")]
    while c.accept("op", ","):
        gens.append(c.expect("name", what="variable name"))
    c.expect("op", ")")
    used = set(pf.generator_names(base))
    for g in gens:
        if g.text in used:
            raise ParseError(lineno, g.col, ["fresh generator name"], g.text, c.source)
    pf.fields[name] = FieldDecl(name, lineno, "transcendental", base, ",".join(g.text for g in gens))


def _extend(pf, c, name, lineno):
    c.expect("op", "=")
    base = _need(pf.fields, c.expect("name", what="field name"), c, "field")
    kw = c.expect("name", "adjoin", what="'adjoin'")
    g = c.expect("name", what="generator name")
    if g.text in pf.generator_names(base):
        raise ParseError(lineno, g.col, ["fresh generator name"], g.text, c.source)
    c.expect("name", "minpoly", what="'minpoly'")
    node = _expr(c)
    _check_names(c, node, set(pf.generator_names(base)) | {g.text})
    del kw
    pf.fields[name] = FieldDecl(name, lineno, "algebraic", base, g.text, node)


def _ring(pf, c, name, lineno):
    c.expect("op", "=")
    f = _need(pf.fields, c.expect("name", what="field name"), c, "field")
    c.expect("op", "[")
    vs = [c.expect("name", what="variable name")]
    while c.accept("op", ","):
        vs.append(c.expect("name", what="variable name"))
    c.expect("op", "]")
    used = set(pf.generator_names(f))
    seen = set()
    for v in vs:
        if v.text in used or v.text in seen:
            raise ParseError(lineno, v.col, ["fresh variable name"], v.text, c.source)
        seen.add(v.text)
    pf.rings[name] = RingDecl(name, lineno, f, [v.text for v in vs])


def _gens(pf, c, name, lineno):
    c.expect("name", "in", what="'in'")
    ring = _need(pf.rings, c.expect("name", what="ring name"), c, "ring")
    over = None
    if c.accept("name", "over"):
        over = _need(pf.fields, c.expect("name", what="field name"), c, "field")
        rf = pf.rings[ring].field
        if not set(pf.generator_names(over)) <= set(pf.generator_names(rf)) or not \
                pf.generator_names(rf)[: len(pf.generator_names(over))] == pf.generator_names(over):
            raise ParseError(lineno, c.toks[c.i - 1].col, ["sub-tower of the ring's field"],
                             over, c.source)
    c.expect("op", "=")
    c.expect("op", "{")
    if c.tok.kind == "op" and c.tok.text == "}":
        raise c.error(["generator expression"])
    exprs = _comma_list(c, "}")
    rd = pf.rings[ring]
    allowed = set(pf.generator_names(rd.field)) | set(rd.variables)
    for e in exprs:
        _check_names(c, e, allowed)
    pf.gens[name] = GensDecl(name, lineno, ring, over, exprs)


def _derivation(pf, c, name, lineno):
    c.expect("name", "on", what="'on'")
    ring = _need(pf.rings, c.expect("name", what="ring name"), c, "ring")
    c.expect("op", "=")
    c.expect("op", "{")
    rd = pf.rings[ring]
    allowed = set(pf.generator_names(rd.field)) | set(rd.variables)
    pairs = []
    if not c.accept("op", "}"):
        while True:
            key = _expr(c)
            c.expect("op", "->")
            val = _expr(c)
            _check_names(c, key, allowed)
            _check_names(c, val, allowed)
            pairs.append((key, val))
            if c.accept("op", "}"):
                break
            c.expect("op", ",", what="',' or '}'")
    pf.derivations[name] = DerivationDecl(name, lineno, ring, pairs)


def _parse_task(pf, line, lineno):
    parts = list(re.finditer(r"\S+", line))
    if pf.task is not None:
        raise DuplicateTask(lineno, parts[0].start() + 1, ["a single task directive"],
                            "task", line)
    if len(parts) < 3:
        col = parts[-1].end() + 1
        raise ParseError(lineno, col, ["task kind and target"], "end of line", line)
    kind, target = parts[1], parts[2]
    if kind.group() not in TASK_KINDS:
        raise ParseError(lineno, kind.start() + 1, list(TASK_KINDS), kind.group(), line)
    tname = target.group()
    if tname not in pf.gens and tname not in pf.derivations:
        raise UndefinedName(lineno, target.start() + 1, ["declared gens or derivation"],
                            tname, line)
    opts = {}
    for m in parts[3:]:
        key, eq, val = m.group().partition("=")
        if not eq or not key or not val:
            raise ParseError(lineno, m.start() + 1, ["key=value"], m.group(), line)
        if key in _INT_OPTIONS:
            if not re.fullmatch(r"-?\d+", val):
                raise ParseError(lineno, m.start() + len(key) + 2, ["integer"], val, line)
            opts[key] = int(val)
        elif key in ("cert", "derivation", "slice", "b", "r"):
            opts[key] = val
        else:
            raise ParseError(lineno, m.start() + 1, ["known option"], key, line)
    pf.task = TaskDecl(kind.group(), tname, lineno, opts)
