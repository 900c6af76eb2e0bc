"""Expression language: tokenizer, parser, printer and evaluator.

Grammar (all four products share one left-associative level)::

    expr   := term (('+' | '-') term)*
    term   := factor (('^' | '<<' | '>>' | '&') factor)*
    factor := unary ('*' unary)*
    unary  := '-' unary | atom
    atom   := number ['i'] | basis | ident '(' args ')' | '(' expr ')'
    basis  := 'e' digit+ | 'e{' int (',' int)* '}'

``A << B`` contracts B by A from the left; ``A >> B`` contracts A by B from
the right; ``&`` is the regressive product; ``*`` needs a scalar operand.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import geometry, grades, spaces
from .multivector import (Multivector, Space, contract_left, contract_right,
                          convention_contract, CONVENTIONS, inner, wedge)
from .star import Orientation, join, lstar, meet, regressive, rstar


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        where = f" at column {pos + 1}" if pos is not None else ""
        super().__init__(f"{msg}{where}")


class EvalError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Num:
    value: complex


@dataclass(frozen=True)
class Basis:
    indices: tuple


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class Name:
    """Bare identifier, only valid as the convention argument of conv."""
    name: str


Node = Union[Num, Basis, Neg, Bin, Call, Name]

PRODUCTS = ("^", "<<", ">>", "&")
ALIASES = {"⌋": "<<", "⌟": ">>", "∧": "^", "∨": "&"}

ARITY = {
    "lstar": (1,), "rstar": (1,), "rev": (1,), "ginv": (1,), "cconj": (1,),
    "check": (1,), "grade": (2,), "inner": (2,), "norm": (1,), "isp": (1,),
    "osp": (1,), "igrade": (1,), "ograde": (1,), "bgrade": (1,), "tgrade": (1,),
    "simple": (1,), "join": (2,), "meet": (2, 3), "proj": (2,), "regr": (2,),
    "conv": (3,),
}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<basis>e\{[^}]*\}|e\d+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)i?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op><<|>>|[-+*^&(),⌋⌟∧∨])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            text = m.group(kind)
            if kind == "op":
                text = ALIASES.get(text, text)
            out.append(Token(kind, text, pos))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


class Parser:
    def __init__(self, src: str, n: int):
        self.src = src
        self.n = n
        self.toks = tokenize(src)
        self.i = 0
        self.warnings: list[str] = []

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("op",):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos)
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        start = self.tok.pos
        node = self.factor()
        seen = set()
        while self.tok.kind == "op" and self.tok.text in PRODUCTS:
            op = self.take().text
            seen.add(op)
            node = Bin(op, node, self.factor())
        if len(seen) > 1:
            self.warnings.append(
                f"mixed products {sorted(seen)} at column {start + 1} are evaluated "
                "left to right; parenthesize to make the grouping explicit")
        return node

    def factor(self) -> Node:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.take()
            node = Bin("*", node, self.unary())
        return node

    def unary(self) -> Node:
        if self.tok.kind == "op" and self.tok.text == "-":
            self.take()
            return Neg(self.unary())
        return self.atom()

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.take()
            if t.text.endswith("i"):
                return Num(complex(0, float(t.text[:-1])))
            return Num(complex(float(t.text)))
        if t.kind == "basis":
            self.take()
            return Basis(self._basis_indices(t))
        if t.kind == "ident":
            self.take()
            if self.tok.text != "(":
                return Name(t.text)
            if t.text not in ARITY:
                raise ParseError(f"unknown function {t.text!r}", t.pos)
            self.take()
            args = [self.expr()]
            while self.tok.kind == "op" and self.tok.text == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            if len(args) not in ARITY[t.text]:
                want = " or ".join(map(str, ARITY[t.text]))
                raise ParseError(f"{t.text} takes {want} argument(s), got {len(args)}", t.pos)
            return Call(t.text, tuple(args))
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def _basis_indices(self, t: Token) -> tuple:
        body = t.text[1:]
        if body.startswith("{"):
            try:
                idx = tuple(int(x) for x in body[1:-1].split(","))
            except ValueError:
                raise ParseError(f"malformed basis literal {t.text!r}", t.pos) from None
        else:
            idx = tuple(int(c) for c in body)
        bad = [i for i in idx if i < 1 or i > self.n]
        if bad:
            raise ParseError(f"index {bad[0]} out of range for n={self.n}", t.pos)
        return idx


def parse(src: str, n: int) -> Node:
    return Parser(src, n).parse()


def parse_with_warnings(src: str, n: int) -> tuple[Node, list[str]]:
    p = Parser(src, n)
    node = p.parse()
    return node, p.warnings


# ---------------------------------------------------------------------------
# printing

def _num_text(x: float) -> str:
    return np.format_float_positional(x, trim="-")


def unparse(node: Node) -> str:
    """Text that parses back to the same tree."""
    if isinstance(node, Num):
        v = node.value
        if v.imag != 0 and v.real == 0:
            return _num_text(v.imag) + "i"
        if v.imag != 0:
            return f"({_num_text(v.real)} + {_num_text(v.imag)}i)"
        return _num_text(v.real)
    if isinstance(node, Basis):
        if all(1 <= i <= 9 for i in node.indices):
            return "e" + "".join(map(str, node.indices))
        return "e{" + ",".join(map(str, node.indices)) + "}"
    if isinstance(node, Neg):
        inner_text = unparse(node.operand)
        if isinstance(node.operand, Bin) and not inner_text.startswith("("):
            inner_text = f"({inner_text})"
        return "-" + inner_text
    if isinstance(node, Bin):
        return f"({unparse(node.left)} {node.op} {unparse(node.right)})"
    if isinstance(node, Call):
        return f"{node.name}({', '.join(unparse(a) for a in node.args)})"
    if isinstance(node, Name):
        return node.name
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation

@dataclass
class SessionConfig:
    n: int
    complex_field: bool = False
    orientation: complex = 1.0
    tol: float = 1e-12
    output: str = "text"
    space: Space = field(init=False)

    def __post_init__(self):
        self.space = Space(self.n, self.complex_field, self.tol)
        u = complex(self.orientation)
        if abs(abs(u) - 1) > 1e-12:
            raise EvalError(f"orientation must have modulus 1, got {u}")
        if not self.complex_field and abs(u.imag) > 1e-12:
            raise EvalError("complex orientation needs --complex")
        self.orientation = u

    @property
    def omega(self) -> Orientation:
        return Orientation(self.n, self.orientation)


Value = Union[Multivector, spaces.SubspaceBasis, bool]


def _mv(v, what: str) -> Multivector:
    if not isinstance(v, Multivector):
        raise EvalError(f"{what} needs a multivector, got {type(v).__name__}")
    return v


def _int_arg(v, what: str) -> int:
    v = _mv(v, what)
    if v.grades() not in ([], [0]):
        raise EvalError(f"{what} needs an integer scalar")
    c = v.scalar_part()
    if abs(c.imag) > 1e-12 or abs(c.real - round(c.real)) > 1e-12:
        raise EvalError(f"{what} needs an integer scalar, got {c}")
    return int(round(c.real))


def _scalar_of(v: Multivector) -> complex | None:
    return v.scalar_part() if v.grades() in ([], [0]) else None


def _blade_arg(v, what: str) -> Multivector:
    v = _mv(v, what)
    if v.is_zero() or not grades.is_simple(v):
        raise EvalError(f"{what} needs a nonzero blade")
    return v


class Evaluator:
    def __init__(self, cfg: SessionConfig):
        self.cfg = cfg

    def __call__(self, node: Node) -> Value:
        return self.eval(node)

    def eval(self, node: Node) -> Value:
        cfg = self.cfg
        n = cfg.n
        if isinstance(node, Num):
            if node.value.imag and not cfg.complex_field:
                raise EvalError("imaginary literal in a real space (use --complex)")
            return Multivector.scalar(n, node.value)
        if isinstance(node, Basis):
            return Multivector.basis(n, node.indices)
        if isinstance(node, Neg):
            return -_mv(self.eval(node.operand), "unary minus")
        if isinstance(node, Bin):
            return self._binary(node)
        if isinstance(node, Call):
            return self._call(node)
        if isinstance(node, Name):
            raise EvalError(f"unknown name {node.name!r}")
        raise EvalError(f"cannot evaluate {node!r}")

    def _binary(self, node: Bin) -> Multivector:
        a = _mv(self.eval(node.left), f"operator {node.op}")
        b = _mv(self.eval(node.right), f"operator {node.op}")
        op = node.op
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            s = _scalar_of(a)
            if s is not None:
                return b * s
            s = _scalar_of(b)
            if s is not None:
                return a * s
            raise EvalError("'*' needs a scalar operand; use ^, <<, >> or & for products")
        if op == "^":
            return wedge(a, b)
        if op == "<<":
            return contract_left(a, b)
        if op == ">>":
            return contract_right(a, b)
        if op == "&":
            return regressive(a, b, self.cfg.omega)
        raise EvalError(f"unknown operator {op!r}")

    def _call(self, node: Call) -> Value:
        name = node.name
        if name == "conv":
            conv = node.args[0]
            if not isinstance(conv, Name) or conv.name not in CONVENTIONS:
                raise EvalError(f"conv needs one of {', '.join(CONVENTIONS)}")
            a, b = (_mv(self.eval(x), "conv") for x in node.args[1:])
            return convention_contract(conv.name, a, b)
        args = [self.eval(a) for a in node.args]
        om = self.cfg.omega
        n = self.cfg.n
        if name == "lstar":
            return lstar(_mv(args[0], name), om)
        if name == "rstar":
            return rstar(_mv(args[0], name), om)
        if name == "rev":
            return _mv(args[0], name).involution("reversion")
        if name == "ginv":
            return _mv(args[0], name).involution("grade")
        if name == "check":
            return _mv(args[0], name).involution("check")
        if name == "cconj":
            return _mv(args[0], name).conj()
        if name == "grade":
            return _mv(args[0], name).grade_project(_int_arg(args[1], "grade"))
        if name == "inner":
            return Multivector.scalar(n, inner(_mv(args[0], name), _mv(args[1], name)))
        if name == "norm":
            return Multivector.scalar(n, _mv(args[0], name).norm())
        if name == "isp":
            return spaces.inner_space(_mv(args[0], name))
        if name == "osp":
            return spaces.outer_space(_mv(args[0], name))
        if name in ("igrade", "ograde", "bgrade", "tgrade"):
            prof = grades.grade_profile(_mv(args[0], name))
            val = {"igrade": prof.inner, "ograde": prof.outer,
                   "bgrade": prof.bottom, "tgrade": prof.top}[name]
            if val is None:
                raise EvalError(f"{name} of the zero multivector is undefined")
            return Multivector.scalar(n, val)
        if name == "simple":
            return grades.is_simple(_mv(args[0], name))
        if name == "join":
            return join(_blade_arg(args[0], name), _blade_arg(args[1], name)).mv
        if name == "meet":
            A, B = _blade_arg(args[0], name), _blade_arg(args[1], name)
            J = _blade_arg(args[2], name) if len(args) == 3 else join(A, B).mv
            if abs(J.norm() - 1) > 1e-9:
                raise EvalError("meet needs a unit blade J")
            return meet(A, B, J)
        if name == "proj":
            M, B = _mv(args[0], name), _blade_arg(args[1], name)
            return geometry.project(M, spaces.outer_space(B))
        if name == "regr":
            return regressive(_mv(args[0], name), _mv(args[1], name), om)
        raise EvalError(f"unknown function {name!r}")


def evaluate(src: str, cfg: SessionConfig) -> Value:
    value = Evaluator(cfg)(parse(src, cfg.n))
    if isinstance(value, Multivector):
        cfg.space.check(value)
    return value
