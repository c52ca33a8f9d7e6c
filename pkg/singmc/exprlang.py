# -*- coding: utf-8 -*-
"""
The integrand expression language of the command line.

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := "-" unary | power
    power := atom ("^" unary)?                      right associative, -a^b is -(a^b)
    atom  := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"

Variables are s1..s9 (the point), t1..t9 (the parameter) and the constants pi and e. Functions: sin cos exp log
sqrt abs of one argument, pow min max of two. There is no implicit multiplication. Errors carry the byte offset
into the UTF-8 text.

Evaluation is vectorised over a batch of points with numpy. Domain errors (log of a non-positive number, division
by zero, 0^negative...) give inf or nan instead of raising; the estimators apply their non-finite policy.

"""
import logging
import math
import re
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from singmc.comparison import EquatableMixin
from singmc.errors import ExprBindError, ExprSyntaxError
from singmc.estimate import Integrand
from singmc.parametric import ParametricIntegrand
from singmc.settings import Settings

logger = logging.getLogger(__name__)
logger.debug("importing...")

CONSTANTS = {"pi": math.pi, "e": math.e}
POINT_PREFIX = "s"
PARAM_PREFIX = "t"
MAX_INDEX = 9

FUNCTIONS = {
    "sin": (1, np.sin),
    "cos": (1, np.cos),
    "exp": (1, np.exp),
    "log": (1, np.log),
    "sqrt": (1, np.sqrt),
    "abs": (1, np.abs),
    "pow": (2, np.power),
    "min": (2, np.minimum),
    "max": (2, np.maximum),
}

OPERATORS = {
    "+": np.add,
    "-": np.subtract,
    "*": np.multiply,
    "/": np.true_divide,
    "^": np.power,
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[a-z]+[0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE | re.ASCII)

_END = "end"


# ---------------------------------------------------------------------------------------------------------------------
# tree
# ---------------------------------------------------------------------------------------------------------------------

class Node(EquatableMixin):
    """
    Immutable expression tree node.

    A long sum is a left-nested chain thousands of levels deep, so nothing that walks a tree recurses: the hash is
    cached at construction from the children's hashes, equality and the tree functions below use explicit stacks.
    """

    @property
    def children(self) -> Tuple["Node", ...]:
        return ()

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash(self._key()))

    def _key(self):
        return super()._key() + tuple(child._hash for child in self.children)

    def __hash__(self):
        return self._hash

    def _same(self, other):
        pairs = [(self, other)]
        while pairs:
            a, b = pairs.pop()
            if a is b:
                continue
            if not isinstance(b, Node) or a._hash != b._hash or a._key() != b._key():
                return False
            pairs.extend(zip(a.children, b.children))
        return True


@dataclass(frozen=True, eq=False)
class Number(Node):
    value: float
    _fields = ("value",)


@dataclass(frozen=True, eq=False)
class Var(Node):
    name: str
    _fields = ("name",)


@dataclass(frozen=True, eq=False)
class Neg(Node):
    operand: Node

    @property
    def children(self):
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    _fields = ("op",)

    @property
    def children(self):
        return self.left, self.right


@dataclass(frozen=True, eq=False)
class Call(Node):
    name: str
    args: Tuple[Node, ...]
    _fields = ("name",)

    @property
    def children(self):
        return self.args


def is_variable_name(name: str) -> bool:
    if name in CONSTANTS:
        return True
    if len(name) == 2 and name[0] in (POINT_PREFIX, PARAM_PREFIX) and name[1].isdigit():
        return 1 <= int(name[1]) <= MAX_INDEX
    return False


# ---------------------------------------------------------------------------------------------------------------------
# lexer and parser
# ---------------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int  # bytes


def tokenize(text: str):
    tokens = []
    pos = 0
    offset = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", offset)
        kind = match.lastgroup
        lexeme = match.group()
        if kind != "ws":
            tokens.append(Token(kind, lexeme, offset))
        offset += len(lexeme.encode("utf-8"))
        pos = match.end()
    tokens.append(Token(_END, "", offset))
    return tokens


class _Parser:

    def __init__(self, tokens):
        self.tokens = tokens
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _is_op(self, *ops) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def _expect(self, op):
        if not self._is_op(op):
            raise ExprSyntaxError(f"expected '{op}' but found {self._describe(self.current)}", self.current.offset)
        return self._advance()

    @staticmethod
    def _describe(token):
        return "end of input" if token.kind == _END else f"'{token.text}'"

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != _END:
            raise ExprSyntaxError(f"unexpected {self._describe(self.current)}", self.current.offset)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.unary()
        while self._is_op("*", "/"):
            op = self._advance().text
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Node:
        # every nested construct (parenthesis, call argument, exponent, minus) passes through here
        if self.depth >= Settings.max_expression_nesting:
            raise ExprSyntaxError(f"expression nests deeper than {Settings.max_expression_nesting} levels",
                                  self.current.offset)
        self.depth += 1
        try:
            if self._is_op("-"):
                self._advance()
                return Neg(self.unary())
            return self.power()
        finally:
            self.depth -= 1

    def power(self) -> Node:
        base = self.atom()
        if self._is_op("^"):
            self._advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number '{token.text}' overflows", token.offset)
            self._advance()
            return Number(value)
        if token.kind == "ident":
            self._advance()
            if self._is_op("("):
                return self._call(token)
            if token.text in FUNCTIONS:
                raise ExprSyntaxError(f"function '{token.text}' needs '('", self.current.offset)
            if not is_variable_name(token.text):
                raise ExprSyntaxError(f"unknown identifier '{token.text}'", token.offset)
            return Var(token.text)
        if self._is_op("("):
            self._advance()
            node = self.expr()
            self._expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {self._describe(token)}", token.offset)

    def _call(self, name_token) -> Node:
        name = name_token.text
        if name not in FUNCTIONS:
            raise ExprSyntaxError(f"unknown function '{name}'", name_token.offset)
        self._expect("(")
        args = [self.expr()]
        while self._is_op(","):
            self._advance()
            args.append(self.expr())
        self._expect(")")
        expected = FUNCTIONS[name][0]
        if len(args) != expected:
            raise ExprSyntaxError(f"function '{name}' takes {expected} argument(s), got {len(args)}",
                                  name_token.offset)
        return Call(name, tuple(args))


def parse(text) -> Node:
    """Parse an integrand expression (str, or UTF-8 bytes) into an immutable tree."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = bytes(text).decode("utf-8")
        except UnicodeDecodeError as ex:
            raise ExprSyntaxError(f"invalid UTF-8 ({ex.reason})", ex.start)
    size = len(text.encode("utf-8"))
    if size > Settings.max_expression_bytes:
        raise ExprSyntaxError(f"expression is {size} bytes, the limit is {Settings.max_expression_bytes}",
                              Settings.max_expression_bytes)
    return _Parser(tokenize(text)).parse()


def _fold(node: Node, leaf, combine):
    """Bottom-up fold with an explicit stack: leaf(node) at leaves, combine(node, child_results) above."""
    pending = [(node, False)]
    results = []
    while pending:
        current, expanded = pending.pop()
        children = current.children
        if not children:
            results.append(leaf(current))
        elif expanded:
            k = len(children)
            args = results[-k:]
            del results[-k:]
            results.append(combine(current, args))
        else:
            pending.append((current, True))
            pending.extend((child, False) for child in reversed(children))
    return results[0]


def _pretty_leaf(node):
    if isinstance(node, Number):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    raise TypeError(f"not an expression node: {node!r}")


def _pretty_combine(node, args):
    if isinstance(node, Neg):
        return f"(-{args[0]})"
    if isinstance(node, BinOp):
        return f"({args[0]} {node.op} {args[1]})"
    return f"{node.name}({', '.join(args)})"


def pretty(node: Node) -> str:
    """Fully parenthesised text that parses back to the same tree."""
    return _fold(node, _pretty_leaf, _pretty_combine)


def free_variables(node: Node) -> frozenset:
    """Names of the point and parameter variables used (constants excluded)."""
    names = set()
    pending = [node]
    while pending:
        current = pending.pop()
        if isinstance(current, Var) and current.name not in CONSTANTS:
            names.add(current.name)
        pending.extend(current.children)
    return frozenset(names)


# ---------------------------------------------------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------------------------------------------------

def _evaluate(node: Node, points: np.ndarray, theta: np.ndarray):

    def leaf(current):
        if isinstance(current, Number):
            return current.value
        if isinstance(current, Var):
            if current.name in CONSTANTS:
                return CONSTANTS[current.name]
            index = int(current.name[1]) - 1
            if current.name[0] == POINT_PREFIX:
                return points[:, index]
            return theta[index]
        raise TypeError(f"not an expression node: {current!r}")

    def combine(current, args):
        if isinstance(current, Neg):
            return np.negative(args[0])
        if isinstance(current, BinOp):
            return OPERATORS[current.op](args[0], args[1])
        return FUNCTIONS[current.name][1](*args)

    return _fold(node, leaf, combine)


def evaluate_batch(node: Node, points, theta=()) -> np.ndarray:
    """Values at each row of points (k, n) for one parameter vector, shape (k,)."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    theta = np.asarray(theta, dtype=float).reshape(-1)
    with np.errstate(all="ignore"):
        values = np.asarray(_evaluate(node, points, theta), dtype=float)
    return np.broadcast_to(values, (points.shape[0],)).copy()


def evaluate(node: Node, point, theta=()) -> float:
    """Value at one point (SimplexPoint, BallPoint or a sequence of reals)."""
    return float(evaluate_batch(node, np.asarray(point, dtype=float)[None, :], theta)[0])


# ---------------------------------------------------------------------------------------------------------------------
# binding
# ---------------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundExpression:
    """An expression checked against the point arity and the parameter dimension."""
    node: Node
    arity: int
    n_params: int
    text: str = ""

    def integrand(self) -> Integrand:
        if self.n_params:
            raise ExprBindError(f"'{self.text}' has {self.n_params} parameters, it needs a grid")
        node = self.node
        return Integrand(self.arity, lambda points: evaluate_batch(node, points), label=self.text)

    def parametric(self) -> ParametricIntegrand:
        node = self.node
        return ParametricIntegrand(self.arity, self.n_params, lambda points, theta: evaluate_batch(node, points, theta),
                                   label=self.text)


def bind(node: Node, arity: int, n_params: int = 0, text: str = "") -> BoundExpression:
    """Check that every s_k has k <= arity and every t_k has k <= n_params."""
    for name in sorted(free_variables(node)):
        index = int(name[1])
        if name[0] == POINT_PREFIX and index > arity:
            raise ExprBindError(f"variable {name} exceeds the point dimension n = {arity}")
        if name[0] == PARAM_PREFIX and index > n_params:
            raise ExprBindError(f"variable {name} exceeds the parameter dimension d = {n_params}")
    return BoundExpression(node, arity, n_params, text or pretty(node))


def compile_integrand(text, arity: int) -> Integrand:
    """parse + bind + Integrand in one step."""
    return bind(parse(text), arity, 0, text).integrand()


def compile_parametric(text, arity: int, n_params: int) -> ParametricIntegrand:
    return bind(parse(text), arity, n_params, text).parametric()


logger.debug("imported")
