"""
1-free star expressions: abstract syntax, concrete grammar, printer and measures.

Grammar (all binary operators left-associative, `+` < `.` < `*`)::

    sum  := prod ('+' prod)*
    prod := star ('.' star)*
    star := atom ('*' atom)*        # e * f is the binary star with body e, exit f
    atom := '0' | ACTION | '(' sum ')'
"""
import re
from dataclasses import dataclass, field
from functools import lru_cache

from .exceptions import ExprSyntaxError

ACTION_RE = re.compile(r'[a-z][a-z0-9_]*')


class StarExpr:
    """Base class of the five expression forms; values are immutable and hash-consed by structure"""

    __slots__ = ()

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or hash(self) != hash(other):
            return False
        return self.children() == other.children() and self._payload() == other._payload()

    def __hash__(self):
        return self._hash

    def __str__(self):
        return format_expr(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_expr(self)!r})"

    def children(self):
        return ()

    def _payload(self):
        return None


@dataclass(frozen=True, eq=False, repr=False)
class Zero(StarExpr):
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_hash', hash('0'))


@dataclass(frozen=True, eq=False, repr=False)
class Act(StarExpr):
    name: str
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        if not ACTION_RE.fullmatch(self.name):
            raise ValueError(f"invalid action name {self.name!r}")
        object.__setattr__(self, '_hash', hash(('act', self.name)))

    def _payload(self):
        return self.name


@dataclass(frozen=True, eq=False, repr=False)
class Sum(StarExpr):
    left: StarExpr
    right: StarExpr
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_hash', hash(('+', self.left._hash, self.right._hash)))

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Prod(StarExpr):
    left: StarExpr
    right: StarExpr
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_hash', hash(('.', self.left._hash, self.right._hash)))

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Star(StarExpr):
    body: StarExpr
    exit: StarExpr
    _hash: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, '_hash', hash(('*', self.body._hash, self.exit._hash)))

    def children(self):
        return (self.body, self.exit)


ZERO = Zero()


def rebuild(e, children):
    """Same constructor as e, new children"""
    if isinstance(e, Sum):
        return Sum(*children)
    if isinstance(e, Prod):
        return Prod(*children)
    if isinstance(e, Star):
        return Star(*children)
    return e


# Parsing

TOKEN_RE = re.compile(r'\s*(?:(?P<action>[a-z][a-z0-9_]*)|(?P<sym>[0+.*()]))')


def tokenize(text):
    """Split text into (kind, value, offset) tokens, ending with an ('eof', '', len(text)) token"""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = TOKEN_RE.match(text, pos)
        if match is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        if match.group('action'):
            tokens.append(('action', match.group('action'), match.start('action')))
        else:
            tokens.append(('sym', match.group('sym'), match.start('sym')))
        pos = match.end()
    tokens.append(('eof', '', len(text)))
    return tokens


class _Parser:
    """Recursive descent over the token list"""

    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def accept(self, sym):
        kind, value, _ = self.peek()
        if kind == 'sym' and value == sym:
            self.pos += 1
            return True
        return False

    def parse(self):
        e = self.sum()
        kind, value, offset = self.peek()
        if kind != 'eof':
            raise ExprSyntaxError(f"unexpected {value!r}", offset)
        return e

    def sum(self):
        e = self.prod()
        while self.accept('+'):
            e = Sum(e, self.prod())
        return e

    def prod(self):
        e = self.star()
        while self.accept('.'):
            e = Prod(e, self.star())
        return e

    def star(self):
        e = self.atom()
        while self.accept('*'):
            e = Star(e, self.atom())
        return e

    def atom(self):
        kind, value, offset = self.peek()
        if kind == 'action':
            self.pos += 1
            return Act(value)
        if kind == 'sym' and value == '0':
            self.pos += 1
            return ZERO
        if kind == 'sym' and value == '(':
            self.pos += 1
            e = self.sum()
            if not self.accept(')'):
                _, found, where = self.peek()
                raise ExprSyntaxError(f"expected ')' but found {found or 'end of input'!r}", where)
            return e
        raise ExprSyntaxError(
            f"expected '0', an action or '(' but found {value or 'end of input'!r}", offset
        )


def parse_expr(text):
    """Parse the concrete syntax into a StarExpr"""
    if not text.strip():
        raise ExprSyntaxError("empty expression", len(text))
    return _Parser(text).parse()


# Printing

def _prec(e):
    if isinstance(e, Sum):
        return 0
    if isinstance(e, Prod):
        return 1
    if isinstance(e, Star):
        return 2
    return 3


def _wrap(e, parens):
    text = format_expr(e)
    return f"({text})" if parens else text


@lru_cache(maxsize=65536)
def format_expr(e):
    """Print e with minimal parentheses; a star directly under a product is always parenthesized"""
    if isinstance(e, Zero):
        return '0'
    if isinstance(e, Act):
        return e.name
    if isinstance(e, Sum):
        return f"{_wrap(e.left, _prec(e.left) < 0)} + {_wrap(e.right, _prec(e.right) <= 0)}"
    if isinstance(e, Prod):
        left = _wrap(e.left, _prec(e.left) != 1 and _prec(e.left) != 3)
        right = _wrap(e.right, _prec(e.right) != 3)
        return f"{left}.{right}"
    if isinstance(e, Star):
        body = _wrap(e.body, _prec(e.body) < 2)
        return f"{body} * {_wrap(e.exit, _prec(e.exit) < 3)}"
    raise TypeError(f"not a star expression: {e!r}")


# Measures

def star_height(e):
    if isinstance(e, Star):
        return max(star_height(e.body) + 1, star_height(e.exit))
    if isinstance(e, (Sum, Prod)):
        return max(star_height(e.left), star_height(e.right))
    return 0


def big_sum(terms):
    """Left-nested sum of terms; [] gives 0"""
    terms = list(terms)
    if not terms:
        return ZERO
    result = terms[0]
    for term in terms[1:]:
        result = Sum(result, term)
    return result


def size(e):
    """Number of nodes of the syntax tree"""
    return 1 + sum(size(child) for child in e.children())


def actions(e):
    if isinstance(e, Act):
        return {e.name}
    found = set()
    for child in e.children():
        found |= actions(child)
    return found


def subterms(e):
    """All subterms of e, e itself first"""
    yield e
    for child in e.children():
        yield from subterms(child)
