"""A small expression language for sequences (in ``n``) and functions (in ``x``).

Grammar (EBNF, also shipped as ``docs/grammar.ebnf``)::

    expr    = term , { ( "+" | "-" ) , term } ;
    term    = unary , { ( "*" | "/" ) , unary } ;
    unary   = "-" , unary | power ;
    power   = atom , [ "^" , unary ] ;
    atom    = number | name | call | "(" , expr , ")" ;
    call    = name , "(" , [ expr , { "," , expr } ] , ")" ;
    number  = digits , [ "." , [ digits ] ] , [ exponent ]
            | "." , digits , [ exponent ] ;
    exponent = ( "e" | "E" ) , [ "+" | "-" ] , digits ;

``^`` is right-associative and binds tighter than unary minus, so ``-2^2``
is ``-4``.  Calls: ``sqrt ln lnln sin cos abs floor`` (one argument each) and
``partial_sum(body)``, meaning ``sum_{k=1}^{n} body``, allowed only in
sequence expressions, not nested, with a body in ``k`` alone.

Errors read ``line 1, col C: expected {...}`` with a 1-based column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Union

import numpy as np

from .continuity import FunctionUnderTest
from .errors import SeqlabError
from .intervals import Interval
from .sequences import RealSequence

__all__ = [
    "ParseError",
    "ArityError",
    "VariableScopeError",
    "Num",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "PartialSum",
    "Expr",
    "parse_expr",
    "pretty",
    "parse_sequence",
    "parse_function",
    "FUNCTIONS",
]

MAX_DEPTH = 100


class ParseError(SeqlabError, ValueError):
    def __init__(self, col: int, expected, detail: str = ""):
        self.col = int(col)
        self.expected = frozenset(expected)
        items = ", ".join(sorted(self.expected))
        msg = f"line 1, col {self.col}: expected {{{items}}}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ArityError(ParseError):
    pass


class VariableScopeError(ParseError):
    pass


# -- AST ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"


@dataclass(frozen=True)
class PartialSum:
    body: "Expr"


Expr = Union[Num, Var, Neg, BinOp, Call, PartialSum]

FUNCTIONS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sqrt": np.sqrt,
    "ln": np.log,
    "lnln": lambda v: np.log(np.log(v)),
    "sin": np.sin,
    "cos": np.cos,
    "abs": np.abs,
    "floor": np.floor,
}

# -- lexer ------------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)

_OPERAND_START = frozenset({"number", "name", "'('", "'-'"})


@dataclass(frozen=True)
class _Tok:
    kind: str  # number | name | op | end
    text: str
    col: int


def _lex(text: str) -> List[_Tok]:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(pos + 1, {"number", "name", "operator"}, f"unexpected {text[pos]!r}")
        kind = m.lastgroup
        if kind != "ws":
            out.append(_Tok(kind, m.group(), pos + 1))
        pos = m.end()
    out.append(_Tok("end", "", len(text) + 1))
    return out


# -- parser -----------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, mode: str):
        self.toks = _lex(text)
        self.i = 0
        self.mode = mode
        self.depth = 0
        self.in_sum = False

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def _is(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def _found(self) -> str:
        return "end of input" if self.tok.kind == "end" else f"found {self.tok.text!r}"

    def _expect(self, text: str) -> None:
        if not self._is(text):
            raise ParseError(self.tok.col, {f"'{text}'"}, self._found())
        self.i += 1

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(self.tok.col, _OPERAND_START, f"nesting deeper than {MAX_DEPTH}")

    def parse(self) -> Expr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(
                self.tok.col, {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"}, self._found()
            )
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self._is("+") or self._is("-"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self._is("*") or self._is("/"):
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self._is("-"):
            self.i += 1
            self._enter()
            node = Neg(self.unary())
            self.depth -= 1
            return node
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self._is("^"):
            self.i += 1
            self._enter()
            node = BinOp("^", base, self.unary())
            self.depth -= 1
            return node
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "name":
            self.i += 1
            if self._is("("):
                return self.call(tok)
            return self.variable(tok)
        if self._is("("):
            self.i += 1
            self._enter()
            node = self.expr()
            self._expect(")")
            self.depth -= 1
            return node
        raise ParseError(tok.col, _OPERAND_START, self._found())

    def variable(self, tok: _Tok) -> Var:
        if self.mode == "function":
            allowed = {"x"}
        elif self.in_sum:
            allowed = {"k"}
        else:
            allowed = {"n"}
        if tok.text in allowed:
            return Var(tok.text)
        if tok.text in ("n", "x", "k"):
            where = "partial_sum body" if self.in_sum else f"{self.mode} expression"
            raise VariableScopeError(
                tok.col, {repr(v) for v in allowed}, f"variable {tok.text!r} not allowed in a {where}"
            )
        raise ParseError(tok.col, {repr(v) for v in allowed} | {"function name"}, f"unknown name {tok.text!r}")

    def call(self, tok: _Tok) -> Expr:
        name = tok.text
        if name == "partial_sum":
            if self.mode != "sequence":
                raise ParseError(tok.col, {"function name"}, "partial_sum is only allowed in sequence expressions")
            if self.in_sum:
                raise ParseError(tok.col, {"function name"}, "partial_sum cannot be nested")
        elif name not in FUNCTIONS:
            raise ParseError(tok.col, {"function name"}, f"unknown function {name!r}")
        self._expect("(")
        self._enter()
        args = []
        outer = self.in_sum
        if name == "partial_sum":
            self.in_sum = True
        try:
            if not self._is(")"):
                args.append(self.expr())
                while self._is(","):
                    self.i += 1
                    args.append(self.expr())
        finally:
            self.in_sum = outer
        if not self._is(")"):
            raise ParseError(self.tok.col, {"')'", "','"}, self._found())
        self.i += 1
        self.depth -= 1
        if len(args) != 1:
            raise ArityError(tok.col, {"1 argument"}, f"{name} takes 1 argument, got {len(args)}")
        if name == "partial_sum":
            return PartialSum(args[0])
        return Call(name, args[0])


def parse_expr(text: str, mode: str = "sequence") -> Expr:
    """Parse ``text`` as a ``"sequence"`` (variable ``n``) or ``"function"`` (variable ``x``)."""
    if mode not in ("sequence", "function"):
        raise ValueError(f"mode must be 'sequence' or 'function', got {mode!r}")
    if not text.strip():
        raise ParseError(1, _OPERAND_START, "empty expression")
    return _Parser(text, mode).parse()


# -- pretty printer --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG_PREC, _POW_PREC, _ATOM_PREC = 3, 4, 5


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _POW_PREC if node.op == "^" else _PREC[node.op]
    if isinstance(node, Neg):
        return _NEG_PREC
    return _ATOM_PREC


def _wrap(node: Expr, need: bool) -> str:
    s = pretty(node)
    return f"({s})" if need else s


def pretty(node: Expr) -> str:
    """Canonical text with the fewest parentheses that re-parse to the same tree."""
    if isinstance(node, Num):
        v = float(node.value)
        if v.is_integer() and abs(v) < 1e15:
            return str(int(v))
        return repr(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _prec(node.operand) < _NEG_PREC)
    if isinstance(node, Call):
        return f"{node.func}({pretty(node.arg)})"
    if isinstance(node, PartialSum):
        return f"partial_sum({pretty(node.body)})"
    if node.op == "^":
        base = _wrap(node.left, _prec(node.left) < _ATOM_PREC)
        exp = _wrap(node.right, _prec(node.right) < _NEG_PREC)
        return f"{base}^{exp}"
    p = _PREC[node.op]
    left = _wrap(node.left, _prec(node.left) < p)
    right = _wrap(node.right, _prec(node.right) <= p)
    return f"{left} {node.op} {right}"


# -- evaluation -----------------------------------------------------------------------

Env = Dict[str, np.ndarray]
Compiled = Callable[[Env], np.ndarray]

_BIN = {"+": np.add, "-": np.subtract, "*": np.multiply, "/": np.divide, "^": np.power}


def _compile(node: Expr) -> Compiled:
    if isinstance(node, Num):
        v = float(node.value)
        return lambda env: v
    if isinstance(node, Var):
        name = node.name
        return lambda env: env[name]
    if isinstance(node, Neg):
        inner = _compile(node.operand)
        return lambda env: np.negative(inner(env))
    if isinstance(node, Call):
        fn, inner = FUNCTIONS[node.func], _compile(node.arg)
        return lambda env: fn(inner(env))
    if isinstance(node, PartialSum):
        body = _compile(node.body)

        def term(k: np.ndarray) -> np.ndarray:
            with np.errstate(all="ignore"):
                out = body({"k": k.astype(np.float64)})
            return np.broadcast_to(np.asarray(out, dtype=np.float64), k.shape)

        seq = RealSequence.partial_sums(term, name=pretty(node), provenance="parsed")
        return lambda env: seq.values(env["_idx"])
    op, left, right = _BIN[node.op], _compile(node.left), _compile(node.right)
    return lambda env: op(left(env), right(env))


def parse_sequence(text: str) -> RealSequence:
    """A :class:`RealSequence` evaluating ``text`` at ``n = 1, 2, ...``."""
    tree = parse_expr(text, "sequence")
    code = _compile(tree)

    def func(idx: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            out = code({"n": idx.astype(np.float64), "_idx": idx})
        return np.broadcast_to(np.asarray(out, dtype=np.float64), idx.shape)

    return RealSequence(func, name=pretty(tree), provenance="parsed")


def parse_function(
    text: str, domain: Optional[Interval] = None, name: Optional[str] = None
) -> FunctionUnderTest:
    """A :class:`FunctionUnderTest` for ``text`` in ``x`` (default domain: the real line)."""
    tree = parse_expr(text, "function")
    code = _compile(tree)

    def func(x: np.ndarray) -> np.ndarray:
        return np.asarray(code({"x": x}), dtype=np.float64)

    return FunctionUnderTest(func, domain or Interval.real_line(), name or pretty(tree))
