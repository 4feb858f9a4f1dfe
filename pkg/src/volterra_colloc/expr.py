"""Small arithmetic expression language for config fields.

Grammar (whitespace is ignored between tokens)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right-associative
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names are the variables ``t`` and ``s``, the constant ``pi`` and the
functions ``sin cos exp sqrt log``.  ``-t^2`` parses as ``-(t^2)``.
"""
import math
import re
from dataclasses import dataclass

from . import smath
from .errors import ConfigError, EvaluationError

FUNCTIONS = {"sin": smath.sin, "cos": smath.cos, "exp": smath.exp,
             "sqrt": smath.sqrt, "log": smath.log}
CONSTANTS = {"pi": math.pi}
VARIABLES = ("t", "s")


class ExpressionSyntaxError(ConfigError):
    """Parse failure at byte ``offset``; ``expected`` lists acceptable tokens."""

    def __init__(self, message, offset, expected=()):
        super().__init__(f"{message} at offset {offset}"
                         + (f" (expected {', '.join(sorted(expected))})" if expected else ""))
        self.offset = offset
        self.expected = frozenset(expected)


@dataclass(frozen=True)
class Num:
    value: float
    pos: int = 0


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Neg:
    operand: object
    pos: int = 0


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object
    pos: int = 0


@dataclass(frozen=True)
class Call:
    func: str
    arg: object
    pos: int = 0


_TOKEN = re.compile(r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, text, variables):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = []
        pos = 0
        while True:
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                rest = len(text) - len(text[pos:].lstrip())
                if rest == len(text):
                    break
                raise ExpressionSyntaxError(f"unexpected character {text[rest]!r}", rest)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, v, pos = self.peek()
        if v != value or kind != "op":
            raise ExpressionSyntaxError(f"unexpected {v or 'end of input'!r}", pos, {value})
        return self.take()

    def parse(self):
        node = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {v!r}", pos,
                                        {"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self):
        kind, v, pos = self.peek()
        if kind == "op" and v == "-":
            self.take()
            return Neg(self.unary(), pos)
        return self.power()

    def power(self):
        base = self.atom()
        kind, v, pos = self.peek()
        if kind == "op" and v == "^":
            self.take()
            return BinOp("^", base, self.unary(), pos)
        return base

    def atom(self):
        kind, v, pos = self.take()
        if kind == "num":
            return Num(float(v), pos)
        if kind == "name":
            if v in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(v, arg, pos)
            if v in CONSTANTS:
                return Num(CONSTANTS[v], pos)
            if v in self.variables:
                return Var(v, pos)
            raise ExpressionSyntaxError(f"unknown identifier {v!r}", pos)
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExpressionSyntaxError(f"unexpected {v or 'end of input'!r}", pos,
                                    {"number", "name", "(", "-"})


def parse_expression(text, variables=VARIABLES):
    """Parse ``text`` into an AST; only names in ``variables`` are accepted."""
    return _Parser(text, variables).parse()


def eval_expression(node, bindings):
    """Evaluate an AST.  Values may be floats or stochastic scalars."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        try:
            return bindings[node.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {node.name!r} at offset {node.pos}") from None
    if isinstance(node, Neg):
        return -eval_expression(node.operand, bindings)
    if isinstance(node, Call):
        x = eval_expression(node.arg, bindings)
        fx = float(x)
        if (node.func == "log" and not fx > 0) or (node.func == "sqrt" and fx < 0):
            raise EvaluationError(f"{node.func} of {fx} at offset {node.pos}", fx)
        return FUNCTIONS[node.func](x)
    a = eval_expression(node.left, bindings)
    b = eval_expression(node.right, bindings)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        if float(b) == 0.0:
            raise EvaluationError(f"division by zero at offset {node.pos}")
        return a / b
    if isinstance(b, float) and b.is_integer() and abs(b) <= 16:
        # integer powers by repeated multiplication so stochastic bases work
        n = int(b)
        out = 1.0
        for _ in range(abs(n)):
            out = out * a
        return 1.0 / out if n < 0 else out
    try:
        return a ** b
    except (ValueError, ZeroDivisionError, OverflowError) as exc:
        raise EvaluationError(f"power fault at offset {node.pos}: {exc}") from None


def to_string(node):
    """Fully parenthesised rendering that re-parses to the same tree."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_string(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_string(node.arg)})"
    return f"({to_string(node.left)} {node.op} {to_string(node.right)})"


def strip_positions(node):
    """Same tree with every position zeroed, for structural comparison."""
    if isinstance(node, Num):
        return Num(node.value)
    if isinstance(node, Var):
        return Var(node.name)
    if isinstance(node, Neg):
        return Neg(strip_positions(node.operand))
    if isinstance(node, Call):
        return Call(node.func, strip_positions(node.arg))
    return BinOp(node.op, strip_positions(node.left), strip_positions(node.right))


def compile_expression(text, variables):
    """Parse once and return a Python callable taking the variables positionally."""
    ast = parse_expression(text, variables)

    def fn(*args):
        return eval_expression(ast, dict(zip(variables, args)))
    fn.ast = ast
    fn.source = text
    return fn
