"""A small language for describing tower varieties and asking for their invariants.

Example::

    # Hirzebruch surface and a projective bundle over CP^2
    let b = BF(2);
    let c = proj(CP(2), chern(1 + y, 3));
    milnor(b);
    chern_number(c, [2, 1, 1]);

Statements end with ``;``.  Class polynomials are integer combinations of the
generator names of the variety they are evaluated in.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------


class DslError(Exception):
    kind = "error"

    def __init__(self, message: str, line: int = 0, col: int = 0, statement: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.statement = statement
        where = f"{line}:{col}: " if line else ""
        stmt = f" (statement {statement})" if statement is not None else ""
        super().__init__(f"{where}{self.kind}: {message}{stmt}")


class LexError(DslError):
    kind = "lexical error"


class ParseError(DslError):
    kind = "syntax error"


class UnboundNameError(DslError):
    kind = "unbound name"


class ArityError(DslError):
    kind = "arity error"


class EvalError(DslError):
    kind = "evaluation error"


# ---------------------------------------------------------------------------
# syntax tree
# ---------------------------------------------------------------------------

Pos = tuple[int, int]


def _pos() -> Pos:
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Gen:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Neg:
    arg: "Poly"
    pos: Pos = _pos()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * ^
    left: "Poly"
    right: "Poly"
    pos: Pos = _pos()


Poly = Union[Num, Gen, Neg, BinOp]


@dataclass(frozen=True)
class Ref:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Builtin:
    """``point()``, ``CP(n)``, ``BF(n)`` and the two-index families ``X Z Y BR H L``."""

    name: str
    ints: tuple[int, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class BFBundle:
    base: "Expr"
    classes: tuple[Poly, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Lines:
    classes: tuple[Poly, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Chern:
    poly: Poly
    rank: int
    pos: Pos = _pos()


@dataclass(frozen=True)
class Proj:
    base: "Expr"
    bundle: Union[Lines, Chern]
    pos: Pos = _pos()


@dataclass(frozen=True)
class Product:
    left: "Expr"
    right: "Expr"
    pos: Pos = _pos()


Expr = Union[Ref, Builtin, BFBundle, Proj, Product]


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Command:
    name: str
    args: tuple
    pos: Pos = _pos()


@dataclass(frozen=True)
class Script:
    statements: tuple[Union[Let, Command], ...]


BUILTIN_ARITY = {"point": 0, "CP": 1, "BF": 1, "X": 2, "Z": 2, "Y": 2, "BR": 2, "H": 2, "L": 2}
# argument kinds: e = variety expression, p = class polynomial, w = partition
COMMANDS = {"milnor": "e", "todd": "e", "chern_number": "ew", "dual_milnor": "ep", "blowup_milnor": "ee"}
RESERVED = {"let"} | set(BUILTIN_ARITY) | {"BFbundle", "proj", "product", "lines", "chern"} | set(COMMANDS)

# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<int>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>[-+*^(),;=\[\]−])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, op, eof
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    out = []
    line, line_start, i = 1, 0, 0
    while i < len(source):
        m = _TOKEN.match(source, i)
        if not m:
            raise LexError(f"unexpected character {source[i]!r}", line, i - line_start + 1)
        kind = m.lastgroup
        col = i - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "int" or kind == "ident":
            out.append(Token(kind, m.group(), line, col))
        elif kind == "op":
            out.append(Token("op", "-" if m.group() == "−" else m.group(), line, col))
        i = m.end()
    out.append(Token("eof", "", line, i - line_start + 1))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0
        self.bound: set[str] = set()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def _err(self, msg: str, tok: Token | None = None, cls=ParseError):
        tok = tok or self.tok
        return cls(msg, tok.line, tok.col)

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise self._err(f"expected {text!r}, found {found!r}")
        return self.advance()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            raise self._err(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return int(self.advance().text)

    def expect_ident(self) -> Token:
        if self.tok.kind != "ident":
            raise self._err(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def _args(self, head: Token, parse_one) -> list:
        """Comma-separated arguments up to ``)``; the open paren is already consumed."""
        args = []
        if not self.at(")"):
            args.append(parse_one(len(args)))
            while self.at(","):
                self.advance()
                args.append(parse_one(len(args)))
        self.expect(")")
        return args

    # grammar
    def script(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return Script(tuple(stmts))

    def statement(self):
        tok = self.tok
        if tok.kind == "ident" and tok.text == "let":
            self.advance()
            name = self.expect_ident()
            if name.text in RESERVED:
                raise self._err(f"{name.text!r} is reserved", name)
            if name.text in self.bound:
                raise self._err(f"{name.text!r} is already bound", name)
            self.expect("=")
            expr = self.expr()
            self.expect(";")
            self.bound.add(name.text)
            return Let(name.text, expr, (tok.line, tok.col))
        cmd = self.command()
        self.expect(";")
        return cmd

    def command(self) -> Command:
        head = self.expect_ident()
        if head.text not in COMMANDS:
            raise self._err(f"unknown command {head.text!r}", head)
        kinds = COMMANDS[head.text]
        self.expect("(")

        def one(k):
            if k >= len(kinds):
                raise self._err(f"{head.text} takes {len(kinds)} argument(s)", head, ArityError)
            return {"e": self.expr, "p": self.poly, "w": self.partition}[kinds[k]]()

        args = self._args(head, one)
        if len(args) != len(kinds):
            raise self._err(f"{head.text} takes {len(kinds)} argument(s), got {len(args)}", head, ArityError)
        return Command(head.text, tuple(args), (head.line, head.col))

    def partition(self) -> tuple[int, ...]:
        self.expect("[")
        parts = [self.expect_int()]
        while self.at(","):
            self.advance()
            parts.append(self.expect_int())
        self.expect("]")
        return tuple(parts)

    def expr(self) -> Expr:
        head = self.expect_ident()
        pos = (head.line, head.col)
        if not self.at("("):
            if head.text in RESERVED:
                raise self._err(f"{head.text!r} needs arguments", head)
            if head.text not in self.bound:
                raise self._err(f"{head.text!r} is not bound", head, UnboundNameError)
            return Ref(head.text, pos)
        self.advance()
        name = head.text
        if name in BUILTIN_ARITY:
            ints = self._args(head, lambda k: self.expect_int())
            if len(ints) != BUILTIN_ARITY[name]:
                raise self._err(f"{name} takes {BUILTIN_ARITY[name]} argument(s), got {len(ints)}",
                                head, ArityError)
            return Builtin(name, tuple(ints), pos)
        if name == "BFbundle":
            base = self.expr()
            self.expect(",")
            classes = self.classlist()
            self.expect(")")
            return BFBundle(base, classes, pos)
        if name == "proj":
            base = self.expr()
            self.expect(",")
            bundle = self.bundle()
            self.expect(")")
            return Proj(base, bundle, pos)
        if name == "product":
            left = self.expr()
            self.expect(",")
            right = self.expr()
            self.expect(")")
            return Product(left, right, pos)
        raise self._err(f"unknown constructor {name!r}", head)

    def bundle(self):
        head = self.expect_ident()
        pos = (head.line, head.col)
        self.expect("(")
        if head.text == "lines":
            classes = self.classlist()
            self.expect(")")
            return Lines(classes, pos)
        if head.text == "chern":
            poly = self.poly()
            self.expect(",")
            rank = self.expect_int()
            self.expect(")")
            return Chern(poly, rank, pos)
        raise self._err(f"expected lines(...) or chern(...), found {head.text!r}", head)

    def classlist(self) -> tuple[Poly, ...]:
        self.expect("[")
        items = [self.poly()]
        while self.at(","):
            self.advance()
            items.append(self.poly())
        self.expect("]")
        return tuple(items)

    # class polynomials: sum > product > unary minus > power > atom
    def poly(self) -> Poly:
        left = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance()
            left = BinOp(op.text, left, self.term(), (op.line, op.col))
        return left

    def term(self) -> Poly:
        left = self.unary()
        while self.at("*"):
            op = self.advance()
            left = BinOp("*", left, self.unary(), (op.line, op.col))
        return left

    def unary(self) -> Poly:
        if self.at("-"):
            op = self.advance()
            return Neg(self.unary(), (op.line, op.col))
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.at("^"):
            op = self.advance()
            tok = self.tok
            exp = self.expect_int()
            return BinOp("^", base, Num(exp, (tok.line, tok.col)), (op.line, op.col))
        return base

    def atom(self) -> Poly:
        tok = self.tok
        if tok.kind == "int":
            self.advance()
            return Num(int(tok.text), (tok.line, tok.col))
        if tok.kind == "ident":
            self.advance()
            return Gen(tok.text, (tok.line, tok.col))
        if self.at("("):
            self.advance()
            inner = self.poly()
            self.expect(")")
            return inner
        raise self._err(f"expected a class, found {tok.text or 'end of input'!r}")


def parse(source: str) -> Script:
    return _Parser(source).script()


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------

def print_poly(p: Poly, level: int = 0) -> str:
    # levels: 0 sum, 1 product, 2 unary, 3 power base
    if isinstance(p, Num):
        return str(p.value)
    if isinstance(p, Gen):
        return p.name
    if isinstance(p, Neg):
        s, own = "-" + print_poly(p.arg, 2), 2
    elif p.op in "+-":
        s, own = f"{print_poly(p.left, 0)} {p.op} {print_poly(p.right, 1)}", 0
    elif p.op == "*":
        s, own = f"{print_poly(p.left, 1)}*{print_poly(p.right, 2)}", 1
    else:
        s, own = f"{print_poly(p.left, 3)}^{print_poly(p.right)}", 3
    if own < level or (level == 3 and own == 3):
        return f"({s})"
    return s


def print_expr(e: Expr) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, Builtin):
        return f"{e.name}({', '.join(map(str, e.ints))})"
    if isinstance(e, BFBundle):
        return f"BFbundle({print_expr(e.base)}, [{', '.join(map(print_poly, e.classes))}])"
    if isinstance(e, Proj):
        b = e.bundle
        if isinstance(b, Lines):
            inner = f"lines([{', '.join(map(print_poly, b.classes))}])"
        else:
            inner = f"chern({print_poly(b.poly)}, {b.rank})"
        return f"proj({print_expr(e.base)}, {inner})"
    return f"product({print_expr(e.left)}, {print_expr(e.right)})"


def _print_arg(a) -> str:
    if isinstance(a, tuple):
        return "[" + ", ".join(map(str, a)) + "]"
    if isinstance(a, (Num, Gen, Neg, BinOp)):
        return print_poly(a)
    return print_expr(a)


def print_statement(s) -> str:
    if isinstance(s, Let):
        return f"let {s.name} = {print_expr(s.expr)};"
    return f"{s.name}({', '.join(_print_arg(a) for a in s.args)});"


def print_script(script: Script) -> str:
    return "".join(print_statement(s) + "\n" for s in script.statements)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _eval_poly(p: Poly, ring):
    if isinstance(p, Num):
        return ring.scalar(p.value)
    if isinstance(p, Gen):
        if p.name not in ring.names:
            raise UnboundNameError(f"no generator {p.name!r}; available: {', '.join(ring.names) or 'none'}",
                                   *p.pos)
        return ring.gen(p.name)
    if isinstance(p, Neg):
        return -_eval_poly(p.arg, ring)
    left = _eval_poly(p.left, ring)
    if p.op == "^":
        return left ** p.right.value
    right = _eval_poly(p.right, ring)
    return {"+": lambda: left + right, "-": lambda: left - right, "*": lambda: left * right}[p.op]()


def _eval_expr(e: Expr, env: dict):
    from . import varieties as V

    if isinstance(e, Ref):
        return env[e.name]
    if isinstance(e, Builtin):
        ctor = {"point": V.point, "CP": V.projective_space, "BF": V.bounded_flag,
                "X": V.x_variety, "Z": V.z_variety, "Y": V.y_variety,
                "BR": V.br_variety, "H": V.h_variety, "L": V.l_variety}[e.name]
        return ctor(*e.ints)
    if isinstance(e, BFBundle):
        base = _eval_expr(e.base, env)
        return V.bf_bundle(base, [_eval_poly(c, base.ring) for c in e.classes])
    if isinstance(e, Proj):
        base = _eval_expr(e.base, env)
        if isinstance(e.bundle, Lines):
            return V.projectivize_lines(base, [_eval_poly(c, base.ring) for c in e.bundle.classes])
        return V.projectivize(base, _eval_poly(e.bundle.poly, base.ring), e.bundle.rank)
    return V.product(_eval_expr(e.left, env), _eval_expr(e.right, env))


def _run_command(cmd: Command, env: dict):
    from . import charnum as C
    from .varieties import dual_hypersurface_milnor

    args = cmd.args
    if cmd.name == "milnor":
        return C.milnor_number(_eval_expr(args[0], env))
    if cmd.name == "todd":
        return C.todd_genus(_eval_expr(args[0], env))
    if cmd.name == "chern_number":
        return C.chern_number(_eval_expr(args[0], env), C.Partition(args[1]))
    if cmd.name == "dual_milnor":
        X = _eval_expr(args[0], env)
        return dual_hypersurface_milnor(X, _eval_poly(args[1], X.ring))
    return C.blowup_milnor(_eval_expr(args[0], env), _eval_expr(args[1], env))


def run(script: Script | str) -> list[dict]:
    """Execute statements in order; each command yields one result entry."""
    if isinstance(script, str):
        script = parse(script)
    env: dict = {}
    results = []
    for idx, stmt in enumerate(script.statements):
        try:
            if isinstance(stmt, Let):
                env[stmt.name] = _eval_expr(stmt.expr, env)
                continue
            value = _run_command(stmt, env)
        except DslError as exc:
            exc.statement = idx
            raise type(exc)(exc.message, exc.line, exc.col, idx) from None
        except (ValueError, ArithmeticError, KeyError) as exc:
            raise EvalError(str(exc), *stmt.pos, statement=idx) from exc
        results.append({"statement": idx, "command": print_statement(stmt).rstrip(";"),
                        "value": value if not isinstance(value, Fraction) or value.denominator != 1
                        else int(value)})
    return results
