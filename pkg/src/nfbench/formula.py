"""First-order set-theory formulas: AST, parser, printer, and the built-in axioms.

Source syntax (ASCII)::

    forall z. (z mem y <-> ~(z mem x))

Connectives by increasing binding strength: ``<->``, ``->``, ``\\/``, ``/\\``,
``~``.  A quantifier body extends as far to the right as possible.  Membership
flavours are ``mem`` (the base relation), ``mem*``, ``mem'`` and ``memf``;
``D(x)`` is a unary guard atom as produced by :func:`recode_translate`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .errors import FormulaSyntaxError, TranslationError, UnboundVariableError


class RelSym(enum.Enum):
    EQ = "="
    MEM = "mem"
    MEM_STAR = "mem*"
    MEM_PRIME = "mem'"
    MEM_F = "memf"

    @property
    def is_membership(self) -> bool:
        return self is not RelSym.EQ

    @classmethod
    def parse(cls, text: str) -> "RelSym":
        for rel in cls:
            if rel.value == text or rel.name == text.upper():
                return rel
        raise ValueError(f"unknown relation symbol {text!r}")


MEMBERSHIP_FLAVORS = (RelSym.MEM, RelSym.MEM_STAR, RelSym.MEM_PRIME, RelSym.MEM_F)


@dataclass(frozen=True)
class Atom:
    rel: RelSym
    left: str
    right: str


@dataclass(frozen=True)
class Pred:
    """Unary guard atom ``name(var)``; carries no stratification constraint."""

    name: str
    var: str


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = Union[Atom, Pred, Not, And, Or, Implies, Iff, Forall, Exists]
Binary = (And, Or, Implies, Iff)
Quantifier = (Forall, Exists)

_BINARY_OPS = {And: "/\\", Or: "\\/", Implies: "->", Iff: "<->"}


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<or>\\/)
  | (?P<and>/\\)
  | (?P<not>~)
  | (?P<lparen>\()
  | (?P<rparen>\))
  | (?P<dot>\.)
  | (?P<eq>=)
  | (?P<word>[a-zA-Z][a-zA-Z0-9_]*[*']?)
    """,
    re.VERBOSE,
)

_PUNCT = {
    "iff": "<->",
    "imp": "->",
    "or": "\\/",
    "and": "/\\",
    "not": "~",
    "lparen": "(",
    "rparen": ")",
    "dot": ".",
}

KEYWORDS = {"forall", "exists"}


@dataclass(frozen=True)
class Token:
    kind: str  # one of: punct, rel, quant, ident, eof
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        word = m.group()
        pos = m.end()
        if kind == "nl":
            line, line_start = line + 1, pos
        elif kind in ("ws", "comment"):
            continue
        elif kind == "eq":
            tokens.append(Token("rel", "=", line, col))
        elif kind == "word":
            if word in ("mem", "mem*", "mem'", "memf"):
                tokens.append(Token("rel", word, line, col))
            elif word[-1] in "*'":
                raise FormulaSyntaxError(f"bad identifier {word!r}", line, col)
            elif word in KEYWORDS:
                tokens.append(Token("quant", word, line, col))
            else:
                tokens.append(Token("ident", word, line, col))
        else:
            tokens.append(Token("punct", _PUNCT[kind], line, col))
    col = pos - line_start + 1
    tokens.append(Token("eof", "<end of input>", line, col))
    return tokens


# ------------------------------------------------------------------- parser

_REL_NAMES = ("mem", "mem*", "mem'", "memf", "=")
_UNARY_START = ("~", "(", "forall", "exists", "IDENT")


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def fail(self, expected):
        t = self.tok
        raise FormulaSyntaxError(f"unexpected {t.text!r}", t.line, t.column, expected)

    def accept(self, text: str) -> bool:
        if self.tok.kind in ("punct", "quant") and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail([text])

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail(["IDENT"])
        name = self.tok.text
        self.pos += 1
        return name

    def parse(self) -> Formula:
        phi = self.formula()
        if self.tok.kind != "eof":
            self.fail(["<->", "->", "\\/", "/\\", "<end of input>"])
        return phi

    def formula(self) -> Formula:
        if self.tok.kind == "quant":
            return self.quant()
        return self.iff()

    def quant(self) -> Formula:
        kind = self.tok.text
        self.pos += 1
        var = self.ident()
        self.expect(".")
        body = self.formula()
        return Forall(var, body) if kind == "forall" else Exists(var, body)

    def iff(self) -> Formula:
        phi = self.imp()
        while self.accept("<->"):
            phi = Iff(phi, self.imp())
        return phi

    def imp(self) -> Formula:
        phi = self.disj()
        if self.accept("->"):
            return Implies(phi, self.imp())
        return phi

    def disj(self) -> Formula:
        phi = self.conj()
        while self.accept("\\/"):
            phi = Or(phi, self.conj())
        return phi

    def conj(self) -> Formula:
        phi = self.unary()
        while self.accept("/\\"):
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            phi = self.formula()
            self.expect(")")
            return phi
        if self.tok.kind == "quant":
            return self.quant()
        if self.tok.kind == "ident":
            left = self.ident()
            if self.accept("("):
                var = self.ident()
                self.expect(")")
                return Pred(left, var)
            if self.tok.kind != "rel":
                self.fail(list(_REL_NAMES) + ["("])
            rel = RelSym(self.tok.text)
            self.pos += 1
            return Atom(rel, left, self.ident())
        self.fail(_UNARY_START)


def parse_formula(text: str, closed: bool = False) -> Formula:
    """Parse ``text`` and rename bound variables apart.

    With ``closed=True`` any free variable raises :class:`UnboundVariableError`.
    """
    phi = normalize(_Parser(text).parse())
    if closed:
        free = free_vars(phi)
        if free:
            raise UnboundVariableError(free)
    return phi


# ------------------------------------------------------------------ printer

def print_formula(phi: Formula) -> str:
    if isinstance(phi, Atom):
        return f"{phi.left} {phi.rel.value} {phi.right}"
    if isinstance(phi, Pred):
        return f"{phi.name}({phi.var})"
    if isinstance(phi, Not):
        inner = print_formula(phi.body)
        if isinstance(phi.body, Binary):
            return "~" + inner
        return f"~({inner})"
    if isinstance(phi, Binary):
        left = print_formula(phi.left)
        if isinstance(phi.left, Quantifier):
            left = f"({left})"
        return f"({left} {_BINARY_OPS[type(phi)]} {print_formula(phi.right)})"
    if isinstance(phi, Quantifier):
        word = "forall" if isinstance(phi, Forall) else "exists"
        return f"{word} {phi.var}. {print_formula(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


# -------------------------------------------------------------- traversals

def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, Binary):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, Quantifier):
        yield from subformulas(phi.body)


def atoms(phi: Formula) -> list[Atom]:
    return [s for s in subformulas(phi) if isinstance(s, Atom)]


def quantifier_count(phi: Formula) -> int:
    return sum(isinstance(s, Quantifier) for s in subformulas(phi))


def all_vars(phi: Formula) -> set[str]:
    names = set()
    for s in subformulas(phi):
        if isinstance(s, Atom):
            names.update((s.left, s.right))
        elif isinstance(s, Pred):
            names.add(s.var)
        elif isinstance(s, Quantifier):
            names.add(s.var)
    return names


def free_vars(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return {phi.left, phi.right}
    if isinstance(phi, Pred):
        return {phi.var}
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, Binary):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, Quantifier):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def _rebuild(phi: Formula, fn) -> Formula:
    """Apply ``fn`` to the immediate children of ``phi``."""
    if isinstance(phi, Not):
        return Not(fn(phi.body))
    if isinstance(phi, Binary):
        return type(phi)(fn(phi.left), fn(phi.right))
    if isinstance(phi, Quantifier):
        return type(phi)(phi.var, fn(phi.body))
    return phi


def normalize(phi: Formula) -> Formula:
    """Rename bound variables so each quantifier binds a name used nowhere else.

    Free variables keep their names.  Already-normalized formulas are returned
    unchanged, which is what makes print/parse round-trips exact.
    """
    used = set(free_vars(phi))

    def fresh(name: str) -> str:
        if name not in used:
            used.add(name)
            return name
        i = 1
        while f"{name}_{i}" in used:
            i += 1
        used.add(f"{name}_{i}")
        return f"{name}_{i}"

    def go(psi: Formula, env: dict) -> Formula:
        if isinstance(psi, Atom):
            return Atom(psi.rel, env.get(psi.left, psi.left), env.get(psi.right, psi.right))
        if isinstance(psi, Pred):
            return Pred(psi.name, env.get(psi.var, psi.var))
        if isinstance(psi, Quantifier):
            new = fresh(psi.var)
            return type(psi)(new, go(psi.body, {**env, psi.var: new}))
        return _rebuild(psi, lambda child: go(child, env))

    return go(phi, {})


def recode_translate(
    phi: Formula, src: RelSym, dst: RelSym, domain_guard: Optional[str] = None
) -> Formula:
    """Replace ``src`` atoms by ``dst`` atoms, optionally relativizing quantifiers.

    With a guard ``D``: ``forall v. psi`` becomes ``forall v. (D(v) -> psi')``
    and ``exists v. psi`` becomes ``exists v. (D(v) /\\ psi')``.
    """
    for a in atoms(phi):
        if a.rel not in (RelSym.EQ, src):
            raise TranslationError(
                f"atom {print_formula(a)!r} uses {a.rel.value}, expected only = and {src.value}"
            )

    def go(psi: Formula) -> Formula:
        if isinstance(psi, Atom):
            return Atom(dst, psi.left, psi.right) if psi.rel is src else psi
        if isinstance(psi, Forall):
            body = go(psi.body)
            if domain_guard is not None:
                body = Implies(Pred(domain_guard, psi.var), body)
            return Forall(psi.var, body)
        if isinstance(psi, Exists):
            body = go(psi.body)
            if domain_guard is not None:
                body = And(Pred(domain_guard, psi.var), body)
            return Exists(psi.var, body)
        return _rebuild(psi, go)

    return go(phi)


# ----------------------------------------------------------------- axioms

class AxiomId(enum.Enum):
    COMPLEMENTS = "COMPLEMENTS"
    PAIRING = "PAIRING"
    SET_UNION = "SET_UNION"
    U_COMPOSITION = "U_COMPOSITION"
    U_INTERSECTION = "U_INTERSECTION"
    EXTENSIONALITY = "EXTENSIONALITY"

    @classmethod
    def parse(cls, text: str) -> "AxiomId":
        key = text.strip().upper().replace("-", "_")
        aliases = {"EXT": "EXTENSIONALITY", "UNION": "SET_UNION", "COMPOSITION": "U_COMPOSITION",
                   "INTERSECTION": "U_INTERSECTION", "PI": "U_INTERSECTION",
                   "COMPOSE": "U_COMPOSITION", "COMPLEMENT": "COMPLEMENTS", "PAIR": "PAIRING"}
        return cls(aliases.get(key, key))


# "{x,y} mem c" is spelled out as: exists q. (q mem c /\ forall w. (w mem q <-> (w = x \/ w = y)))
_AXIOM_TEXT = {
    AxiomId.COMPLEMENTS: "forall x. exists y. forall z. (z mem y <-> ~(z mem x))",
    AxiomId.PAIRING: "forall a. forall b. exists y. forall z. (z mem y <-> (z = a \\/ z = b))",
    AxiomId.SET_UNION: (
        "forall x. exists y. forall z. (z mem y <-> exists w. (z mem w /\\ w mem x))"
    ),
    AxiomId.U_COMPOSITION: """
        forall r. forall s. exists X. forall p.
          (p mem X <-> exists x. exists z.
             ((forall w. (w mem p <-> (w = x \\/ w = z)))
              /\\ exists y.
                   ((exists q. (q mem r /\\ forall w. (w mem q <-> (w = x \\/ w = y))))
                    /\\ exists q. (q mem s /\\ forall w. (w mem q <-> (w = y \\/ w = z))))))
    """,
    AxiomId.U_INTERSECTION: """
        exists X. forall p.
          (p mem X <-> exists x. exists y.
             ((forall w. (w mem p <-> (w = x \\/ w = y)))
              /\\ exists v. (v mem x /\\ v mem y)))
    """,
}

FIN_SF = (
    AxiomId.COMPLEMENTS,
    AxiomId.PAIRING,
    AxiomId.SET_UNION,
    AxiomId.U_COMPOSITION,
    AxiomId.U_INTERSECTION,
)

_EXTENSIONALITY_TEXT = "forall x. forall y. ((forall z. (z mem x <-> z mem y)) -> x = y)"


def builtin_axioms() -> list[tuple[AxiomId, Formula]]:
    return [(aid, parse_formula(_AXIOM_TEXT[aid], closed=True)) for aid in FIN_SF]


def axiom_formula(aid: AxiomId) -> Formula:
    if aid is AxiomId.EXTENSIONALITY:
        return parse_formula(_EXTENSIONALITY_TEXT, closed=True)
    return parse_formula(_AXIOM_TEXT[aid], closed=True)


def split_axiom(phi: Formula) -> tuple[tuple[str, ...], str, Formula]:
    """Split ``forall u1 .. uk. exists w. matrix`` into ``((u1..uk), w, matrix)``."""
    universals = []
    while isinstance(phi, Forall):
        universals.append(phi.var)
        phi = phi.body
    if not isinstance(phi, Exists):
        raise ValueError("formula is not of the shape forall* exists . matrix")
    return tuple(universals), phi.var, phi.body
