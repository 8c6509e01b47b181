"""Parser and evaluator for scalar arithmetic expressions.

Grammar (``x`` being the configurable variable name)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | '+' unary | power
    power   := atom ('^' unary)?            # right associative
    atom    := number | 'pi' | x '[' int ']' | func '(' expr ')' | '(' expr ')'
    func    := sin | cos | exp | sqrt | abs

so ``-x[0]^2`` is ``-(x[0]^2)`` and ``2^3^2`` is ``2^(3^2)``.  Expressions
evaluate on numpy arrays as well: ``x[i]`` may be a stack of values.
"""

import re
from dataclasses import dataclass

import numpy as np

from xtkit.common.exceptions import ParseError

FUNCTIONS = {'sin': np.sin, 'cos': np.cos, 'exp': np.exp, 'sqrt': np.sqrt, 'abs': np.abs}

_TOKEN = re.compile(r'\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^()\[\],]))')


class ExpressionError(ParseError):
    """Syntax error, unknown identifier or wrong number of arguments."""


@dataclass(frozen=True)
class Number:
    value: float

    def evaluate(self, x):
        return np.float64(self.value)


@dataclass(frozen=True)
class Variable:
    index: int

    def evaluate(self, x):
        if self.index >= len(x):
            raise IndexError(f'x[{self.index}] requested from a point of dimension {len(x)}')
        return np.asarray(x[self.index], dtype=float)


@dataclass(frozen=True)
class Negate:
    operand: object

    def evaluate(self, x):
        return -self.operand.evaluate(x)


_BINARY = {'+': np.add, '-': np.subtract, '*': np.multiply, '/': np.divide, '^': np.power}


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: object
    right: object

    def evaluate(self, x):
        return _BINARY[self.op](self.left.evaluate(x), self.right.evaluate(x))


@dataclass(frozen=True)
class Call:
    name: str
    argument: object

    def evaluate(self, x):
        return FUNCTIONS[self.name](self.argument.evaluate(x))


def variables(node):
    """Set of variable indices referenced by ``node``."""
    if isinstance(node, Variable):
        return {node.index}
    if isinstance(node, Negate):
        return variables(node.operand)
    if isinstance(node, BinaryOp):
        return variables(node.left) | variables(node.right)
    if isinstance(node, Call):
        return variables(node.argument)
    return set()


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == '':
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionError(f"unexpected character '{text[start]}'", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(('end', '', len(text)))
    return tokens


class _Parser:

    def __init__(self, text, variable):
        self.text = text
        self.variable = variable
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.advance()
        if text != value or kind == 'end':
            found = f"'{text}'" if kind != 'end' else 'end of input'
            raise ExpressionError(f"expected '{value}' but found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != 'end':
            raise ExpressionError(f"unexpected '{text}'", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ('+', '-') and self.peek()[0] == 'op':
            op = self.advance()[1]
            node = BinaryOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ('*', '/') and self.peek()[0] == 'op':
            op = self.advance()[1]
            node = BinaryOp(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == 'op' and text in ('-', '+'):
            self.advance()
            operand = self.unary()
            return Negate(operand) if text == '-' else operand
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[:2] == ('op', '^'):
            self.advance()
            node = BinaryOp('^', node, self.unary())
        return node

    def atom(self):
        kind, text, pos = self.advance()
        if kind == 'num':
            return Number(float(text))
        if kind == 'op' and text == '(':
            node = self.expr()
            self.expect(')')
            return node
        if kind == 'ident':
            if text == 'pi':
                return Number(float(np.pi))
            if text == self.variable:
                self.expect('[')
                k, idx, p = self.advance()
                if k != 'num' or not idx.isdigit():
                    raise ExpressionError(f"expected an integer index but found '{idx}'", p)
                self.expect(']')
                return Variable(int(idx))
            if text in FUNCTIONS:
                self.expect('(')
                args = [self.expr()]
                while self.peek()[:2] == ('op', ','):
                    self.advance()
                    args.append(self.expr())
                close = self.peek()[2]
                self.expect(')')
                if len(args) != 1:
                    raise ExpressionError(f"'{text}' takes 1 argument but {len(args)} were given", close)
                return Call(text, args[0])
            raise ExpressionError(f"unknown identifier '{text}'", pos)
        if kind == 'end':
            raise ExpressionError('unexpected end of expression', pos)
        raise ExpressionError(f"unexpected '{text}'", pos)


def expr_parse(text, variable='x'):
    """Parse ``text`` into an expression tree."""
    return _Parser(text, variable).parse()


def expr_eval(ast, x):
    """Evaluate ``ast`` at ``x``; raises ``FloatingPointError`` on division by zero or domain errors."""
    with np.errstate(divide='raise', invalid='raise', over='raise'):
        value = ast.evaluate(x)
    return float(value) if np.ndim(value) == 0 else value


def split_expression_list(text):
    """Split ``'[e0 e1 ...]'`` into its entries; a bare expression gives one entry.

    Entries are separated by whitespace outside of parentheses and brackets,
    unless the whitespace is next to a binary operator: ``'[a + b c]'`` has
    the entries ``a + b`` and ``c``.  A sign directly attached to the
    following operand starts a new entry, so ``'[a -b]'`` has two entries.
    """
    stripped = text.strip()
    if not stripped.startswith('['):
        return [stripped]
    if not stripped.endswith(']'):
        raise ExpressionError("missing closing ']'", len(text))
    body = stripped[1:-1]
    entries, current, depth = [], '', 0
    i = 0
    while i < len(body):
        ch = body[i]
        if ch.isspace() and depth == 0:
            j = i
            while j < len(body) and body[j].isspace():
                j += 1
            prev = current.rstrip()[-1:] if current.strip() else ''
            nxt = body[j] if j < len(body) else ''
            after = body[j + 1] if j + 1 < len(body) else ''
            joined = (prev in ('+', '-', '*', '/', '^') or nxt in ('*', '/', '^')
                      or (nxt in ('+', '-') and (after.isspace() or not after)))
            if joined and prev and nxt:
                current += ' '
            elif current:
                entries.append(current)
                current = ''
            i = j
            continue
        if ch in '([':
            depth += 1
        elif ch in ')]':
            depth -= 1
        current += ch
        i += 1
    if current:
        entries.append(current)
    return entries
