"""Formula ASTs, parser and printer for rCTL / rCTL* (and plain CTL).

One family of node classes covers state and path formulas.  Whether a node
is a state formula is a syntactic property (see :func:`is_state_formula`);
the fragment checks decide whether a tree is admissible as rCTL, rCTL*, or
CTL.  Temporal operators in the input are always the robust ones; the dot is
presentation only.

Concrete syntax (ASCII, with Unicode alternatives)::

    formula  ::= disj ( '->' formula )?              right-assoc
    disj     ::= conj ( '|' conj )*
    conj     ::= until ( '&' until )*
    until    ::= unary ( ('U' | 'W') until )?         right-assoc
    unary    ::= ('!' | 'X' | 'F' | 'G' | 'E' | 'A') unary | primary
    primary  ::= IDENT | 'true' | 'false' | '(' formula ')'

``E``/``A`` are the path quantifiers.  Identifiers are
``[A-Za-z_][A-Za-z0-9_]*`` minus the reserved words ``E A X F G U W true
false``, so operators must be separated by whitespace: ``AG`` lexes as an
identifier, write ``A G p``.
"""
from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass

__all__ = [
    "Formula", "Atom", "Const", "Not", "And", "Or", "Implies", "Exists",
    "Forall", "Next", "Eventually", "Always", "Until", "WeakUntil",
    "TRUE_F", "FALSE_F", "FragmentTag", "FormulaError", "ParseError",
    "FragmentError", "parse", "to_text", "is_state_formula",
    "check_fragment", "subformulas", "maximal_state_subformulas",
    "children", "size", "fresh_atom_name",
]


class Formula:
    """Base class of all AST nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)

    def __getstate__(self):
        # string hashes are salted per process, so never pickle the cached hash
        return {k: v for k, v in self.__dict__.items() if k != "_hash"}


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    arg: Formula


@dataclass(frozen=True)
class Forall(Formula):
    arg: Formula


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True)
class Always(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class WeakUntil(Formula):
    left: Formula
    right: Formula


def cache_hash(cls):
    """Memoize the generated field hash; formulas are hashed constantly as dict keys."""
    field_hash = cls.__hash__

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = field_hash(self)
            object.__setattr__(self, "_hash", h)
        return h

    cls.__hash__ = __hash__
    return cls


for _cls in (Atom, Const, Not, And, Or, Implies, Exists, Forall, Next,
             Eventually, Always, Until, WeakUntil):
    cache_hash(_cls)

TRUE_F = Const(True)
FALSE_F = Const(False)

_UNARY = (Not, Exists, Forall, Next, Eventually, Always)
_BINARY = (And, Or, Implies, Until, WeakUntil)
_TEMPORAL = (Next, Eventually, Always, Until, WeakUntil)
_QUANT = (Exists, Forall)
_BOOL = (Not, And, Or, Implies)

StateFormula = Formula
PathFormula = Formula


class FragmentTag(enum.Enum):
    RCTL = "rctl"
    RCTLSTAR = "rctlstar"
    CTL = "ctl"


class FormulaError(ValueError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class FragmentError(FormulaError):
    pass


def children(f: Formula) -> tuple:
    if isinstance(f, _UNARY):
        return (f.arg,)
    if isinstance(f, _BINARY):
        return (f.left, f.right)
    return ()


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def is_state_formula(f: Formula) -> bool:
    """True iff every temporal operator of ``f`` sits under a quantifier."""
    if isinstance(f, (Atom, Const, Exists, Forall)):
        return True
    if isinstance(f, _BOOL):
        return all(is_state_formula(c) for c in children(f))
    return False


# ---------------------------------------------------------------- lexing

_SYMBOLS = {
    "(": "(", ")": ")", "!": "!", "&": "&", "|": "|", "->": "->",
    "¬": "!", "∧": "&", "∨": "|", "⇒": "->", "→": "->", "=>": "->",
    "∃": "E", "∀": "A", "◇": "F", "□": "G", "○": "X",
}
_KEYWORDS = {"E", "A", "X", "F", "G", "U", "W", "true", "false"}
_IGNORED = {"·", "̇"}


def _tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace() or ch in _IGNORED:
            i += 1
            col += 1
            continue
        two = text[i:i + 2]
        if len(two) == 2 and two in _SYMBOLS:
            tokens.append((_SYMBOLS[two], two, line, col))
            i += 2
            col += 2
            continue
        if ch in _SYMBOLS:
            tokens.append((_SYMBOLS[ch], ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i + 1
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in _KEYWORDS else "IDENT"
            tokens.append((kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, tok[2], tok[3])

    def formula(self):
        left = self.disj()
        if self.peek()[0] == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[0] == "|":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.until()
        while self.peek()[0] == "&":
            self.take()
            left = And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        kind = self.peek()[0]
        if kind == "U":
            self.take()
            return Until(left, self.until())
        if kind == "W":
            self.take()
            return WeakUntil(left, self.until())
        return left

    _unary_ops = {"!": Not, "X": Next, "F": Eventually, "G": Always,
                  "E": Exists, "A": Forall}

    def unary(self):
        kind = self.peek()[0]
        if kind in self._unary_ops:
            self.take()
            return self._unary_ops[kind](self.unary())
        return self.primary()

    def primary(self):
        tok = self.take()
        kind = tok[0]
        if kind == "IDENT":
            return Atom(tok[1])
        if kind == "true":
            return TRUE_F
        if kind == "false":
            return FALSE_F
        if kind == "(":
            inner = self.formula()
            if self.peek()[0] != ")":
                raise self.error("expected ')'")
            self.take()
            return inner
        if kind == "EOF":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected token {tok[1]!r}", tok)


def parse(text: str, tag: FragmentTag = FragmentTag.RCTLSTAR) -> Formula:
    """Parse ``text`` and check it against the fragment ``tag``.

    Under ``RCTLSTAR`` a top-level formula that is not a state formula (for
    instance ``(A F A G p) | (F p -> F q)``) is read as universally
    quantified, i.e. wrapped in ``A``.
    """
    if isinstance(tag, str):
        tag = FragmentTag(tag)
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "EOF":
        raise p.error(f"unexpected token {p.peek()[1]!r}")
    if tag is FragmentTag.RCTLSTAR and not is_state_formula(f):
        f = Forall(f)
    check_fragment(f, tag)
    return f


def check_fragment(f: Formula, tag: FragmentTag) -> None:
    """Raise :class:`FragmentError` unless ``f`` is a state formula of ``tag``."""
    if isinstance(tag, str):
        tag = FragmentTag(tag)
    if tag is FragmentTag.RCTLSTAR:
        if not is_state_formula(f):
            raise FragmentError(f"{to_text(f)} is a path formula, not a state formula")
        return
    _check_branching(f, tag)


def _check_branching(f, tag):
    if isinstance(f, (Atom, Const)):
        return
    if isinstance(f, _BOOL):
        for c in children(f):
            _check_branching(c, tag)
        return
    if isinstance(f, _QUANT):
        path = f.arg
        if isinstance(path, _TEMPORAL):
            for c in children(path):
                _check_branching(c, tag)
            return
        raise FragmentError(
            f"{tag.name}: quantifier must be followed by exactly one temporal "
            f"operator, got {to_text(f)}"
        )
    raise FragmentError(
        f"{tag.name}: temporal operator outside a path quantifier in {to_text(f)}"
    )


# -------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3, Until: 4, WeakUntil: 4}
_RIGHT_ASSOC = (Implies, Until, WeakUntil)
_BIN_SYM = {Implies: "->", Or: "|", And: "&", Until: "U", WeakUntil: "W"}
_UN_SYM = {Not: "!", Next: "X", Eventually: "F", Always: "G",
           Exists: "E", Forall: "A"}
_UNARY_PREC = 5


def to_text(f: Formula) -> str:
    """Print ``f`` in the concrete syntax; ``parse(to_text(f))`` gives back ``f``."""
    return _print(f, 0)


def _print(f, need):
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, _UNARY):
        return f"{_UN_SYM[type(f)]} {_print(f.arg, _UNARY_PREC)}"
    prec = _PREC[type(f)]
    if isinstance(f, _RIGHT_ASSOC):
        lneed, rneed = prec + 1, prec
    else:
        lneed, rneed = prec, prec + 1
    text = f"{_print(f.left, lneed)} {_BIN_SYM[type(f)]} {_print(f.right, rneed)}"
    return f"({text})" if prec < need else text


# ---------------------------------------------------------- subformulas

def _state_subformulas(f, acc):
    for c in children(f):
        _state_subformulas(c, acc)
    if is_state_formula(f):
        acc.add(f)


def subformulas(f: Formula) -> list:
    """All state subformulas of ``f`` ordered by size (ties by printed form)."""
    acc: set = set()
    _state_subformulas(f, acc)
    return sorted(acc, key=lambda g: (size(g), to_text(g)))


def fresh_atom_name(f: Formula) -> str:
    # '@' cannot occur in parsed identifiers, so fresh atoms never collide
    digest = hashlib.sha1(to_text(f).encode("utf-8")).hexdigest()[:10]
    return f"@{digest}"


def maximal_state_subformulas(path: Formula):
    """Replace the maximal state subformulas of a path formula by fresh atoms.

    Returns ``(pairs, rewritten)`` where ``pairs`` is a list of
    ``(state_subformula, atom_name)`` in left-to-right order of first
    occurrence and ``rewritten`` is ``path`` with every such subformula
    replaced by ``Atom(atom_name)``.
    """
    pairs: dict = {}

    def walk(g):
        if is_state_formula(g):
            name = pairs.get(g)
            if name is None:
                name = fresh_atom_name(g)
                pairs[g] = name
            return Atom(name)
        if isinstance(g, _UNARY):
            return type(g)(walk(g.arg))
        return type(g)(walk(g.left), walk(g.right))

    rewritten = walk(path)
    return list(pairs.items()), rewritten

