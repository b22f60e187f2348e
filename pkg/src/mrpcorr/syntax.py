"""Modal formulas: AST, parser, printer, goodness and mrp classification.

Formulas are immutable dataclasses.  A *modal reduction principle* (mrp) is an
inequality ``s(p) <= t(p)`` whose sides are strings of unary modal operators
applied to a single variable; such strings are handled as :class:`ModalString`
values, outermost operator first.

Concrete syntax (ASCII; the Unicode symbols □ ◇ ■ ⧫ ∧ ∨ ⊤ ⊥ ≤ are accepted as
aliases)::

    ineq    := formula "<=" formula
    formula := disj
    disj    := conj ("or" conj)*
    conj    := unary ("and" unary)*
    unary   := ("box" | "dia" | "bbox" | "bdia") unary | atom
    atom    := "bot" | "top" | ident | "(" formula ")"

``and``/``or`` associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Literal, Union

Op = Literal["box", "dia", "bbox", "bdia"]
SideName = Literal["left", "right"]

DIAMONDS = frozenset({"dia", "bdia"})
BOXES = frozenset({"box", "bbox"})
MODAL_OPS = ("box", "dia", "bbox", "bdia")

UNICODE = {"box": "□", "dia": "◇", "bbox": "■", "bdia": "⧫"}

__all__ = [
    "Formula", "Bottom", "Top", "Var", "Nominal", "Conominal", "And", "Or",
    "Box", "Dia", "BlackBox", "BlackDia", "ModalString", "BlockDecomposition",
    "TypeA", "TypeB", "Analytic", "NotSahlqvist", "MrpClassification",
    "ParseError", "MrpError", "parse_formula", "parse_inequality", "to_text",
    "to_unicode", "modal_string_of", "is_good", "classify_mrp", "adjoint_string",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Nominal:
    name: str


@dataclass(frozen=True)
class Conominal:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    arg: "Formula"


@dataclass(frozen=True)
class Dia:
    arg: "Formula"


@dataclass(frozen=True)
class BlackBox:
    arg: "Formula"


@dataclass(frozen=True)
class BlackDia:
    arg: "Formula"


Formula = Union[Bottom, Top, Var, Nominal, Conominal, And, Or, Box, Dia, BlackBox, BlackDia]
Unary = Union[Box, Dia, BlackBox, BlackDia]

_OP_CLASS = {"box": Box, "dia": Dia, "bbox": BlackBox, "bdia": BlackDia}
_CLASS_OP = {v: k for k, v in _OP_CLASS.items()}


def apply_op(op: str, arg: Formula) -> Formula:
    return _OP_CLASS[op](arg)


def variables(f: Formula) -> frozenset[str]:
    """Names of the propositional variables occurring in ``f``."""
    if isinstance(f, Var):
        return frozenset({f.name})
    if isinstance(f, (And, Or)):
        return variables(f.left) | variables(f.right)
    if type(f) in _CLASS_OP:
        return variables(f.arg)  # type: ignore[union-attr]
    return frozenset()


# ---------------------------------------------------------------------------
# Modal strings and blocks
# ---------------------------------------------------------------------------

class MrpError(ValueError):
    """Raised when a formula is not of the shape an mrp operation requires."""


@dataclass(frozen=True)
class ModalString:
    """A finite sequence of unary modal operators, outermost first."""

    ops: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        bad = [o for o in self.ops if o not in MODAL_OPS]
        if bad:
            raise MrpError(f"not modal operators: {bad!r}")

    @classmethod
    def of(cls, *ops: str) -> "ModalString":
        return cls(tuple(ops))

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self) -> Iterator[str]:
        return iter(self.ops)

    def __add__(self, other: "ModalString") -> "ModalString":
        return ModalString(self.ops + other.ops)

    def is_diamonds(self) -> bool:
        return all(o in DIAMONDS for o in self.ops)

    def is_boxes(self) -> bool:
        return all(o in BOXES for o in self.ops)

    def apply(self, arg: Formula) -> Formula:
        for op in reversed(self.ops):
            arg = apply_op(op, arg)
        return arg

    def text(self) -> str:
        return " ".join(self.ops) if self.ops else "ε"

    def unicode(self) -> str:
        return "".join(UNICODE[o] for o in self.ops) or "ε"

    def __str__(self) -> str:
        return self.unicode()


def split_prefix(ms: ModalString, kinds: frozenset[str]) -> tuple[ModalString, ModalString]:
    """Split ``ms`` into its maximal prefix drawn from ``kinds`` and the remainder."""
    k = 0
    while k < len(ms.ops) and ms.ops[k] in kinds:
        k += 1
    return ModalString(ms.ops[:k]), ModalString(ms.ops[k:])


@dataclass(frozen=True)
class BlockDecomposition:
    """Maximal alternating blocks of a modal string.

    ``lead`` is the kind of the first block (``"dia"`` for χ-shaped strings,
    ``"box"`` for ζ-shaped ones).  The bare variable is represented by one
    empty block.  Every other block is nonempty and the kinds alternate.
    """

    lead: Literal["dia", "box"]
    blocks: tuple[ModalString, ...]

    def __post_init__(self) -> None:
        if not self.blocks:
            raise MrpError("a block decomposition has at least one block")
        if len(self.blocks) == 1 and len(self.blocks[0]) == 0:
            return
        for k, b in enumerate(self.blocks):
            if len(b) == 0:
                raise MrpError("only the bare variable may have an empty block")
            want_dia = (k % 2 == 0) == (self.lead == "dia")
            if not (b.is_diamonds() if want_dia else b.is_boxes()):
                raise MrpError(f"block {k} of {self.string.unicode()} has the wrong kind")

    @classmethod
    def of_string(cls, ms: ModalString, lead: Literal["dia", "box"]) -> "BlockDecomposition":
        if len(ms) == 0:
            return cls(lead, (ModalString(),))
        blocks: list[ModalString] = []
        kinds = DIAMONDS if lead == "dia" else BOXES
        rest = ms
        while len(rest):
            head, rest = split_prefix(rest, kinds)
            if len(head) == 0:
                raise MrpError(
                    f"{ms.unicode()} does not start with a {'diamond' if lead == 'dia' else 'box'}"
                )
            blocks.append(head)
            kinds = BOXES if kinds is DIAMONDS else DIAMONDS
        return cls(lead, tuple(blocks))

    @property
    def string(self) -> ModalString:
        out = ModalString()
        for b in self.blocks:
            out = out + b
        return out

    @property
    def is_bare(self) -> bool:
        return len(self.blocks) == 1 and len(self.blocks[0]) == 0

    @property
    def ends_with_lead_kind(self) -> bool:
        """True when the designated terminal block (ψ_n for χ, φ_n for ζ) is empty."""
        return len(self.blocks) % 2 == 1

    def block_kinds(self) -> tuple[str, ...]:
        other = "box" if self.lead == "dia" else "dia"
        return tuple(self.lead if k % 2 == 0 else other for k in range(len(self.blocks)))

    def __str__(self) -> str:
        return " | ".join(b.unicode() for b in self.blocks)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TypeA:
    """``s = φ(α(p))`` with φ diamonds and α boxes; ``t = ψ(χ(p))`` with ψ the maximal box prefix."""

    phi: ModalString
    alpha: ModalString
    psi: ModalString
    chi: BlockDecomposition
    var: str = "p"

    def reconstruct(self) -> tuple[Formula, Formula]:
        p = Var(self.var)
        return (self.phi + self.alpha).apply(p), (self.psi + self.chi.string).apply(p)


@dataclass(frozen=True)
class TypeB:
    """``s = φ(ζ(p))`` with φ the maximal diamond prefix; ``t = ψ(δ(p))`` with ψ boxes and δ diamonds."""

    phi: ModalString
    zeta: BlockDecomposition
    psi: ModalString
    delta: ModalString
    var: str = "p"

    def reconstruct(self) -> tuple[Formula, Formula]:
        p = Var(self.var)
        return (self.phi + self.zeta.string).apply(p), (self.psi + self.delta).apply(p)


@dataclass(frozen=True)
class Analytic:
    a: TypeA
    b: TypeB

    def reconstruct(self) -> tuple[Formula, Formula]:
        return self.a.reconstruct()


@dataclass(frozen=True)
class NotSahlqvist:
    s: Formula
    t: Formula

    def reconstruct(self) -> tuple[Formula, Formula]:
        return self.s, self.t


MrpClassification = Union[TypeA, TypeB, Analytic, NotSahlqvist]


def modal_string_of(f: Formula, allow_black: bool = False) -> tuple[ModalString, str]:
    """Peel an mrp side into its operator string and variable name.

    Raises :class:`MrpError` if ``f`` contains connectives other than □/◇ (or
    also ■/⧫ when ``allow_black``), constants or nominals.
    """
    ops: list[str] = []
    allowed = MODAL_OPS if allow_black else ("box", "dia")
    while type(f) in _CLASS_OP:
        op = _CLASS_OP[type(f)]
        if op not in allowed:
            raise MrpError(f"operator {op!r} is not allowed in an mrp")
        ops.append(op)
        f = f.arg  # type: ignore[union-attr]
    if not isinstance(f, Var):
        raise MrpError(f"mrp sides must be modal strings over one variable, found {to_text(f)!r}")
    return ModalString(tuple(ops)), f.name


def is_good(t: Formula, side: SideName) -> bool:
    """Left-good: diamonds then boxes.  Right-good: boxes then diamonds."""
    ms, _ = modal_string_of(t, allow_black=True)
    first, second = (DIAMONDS, BOXES) if side == "left" else (BOXES, DIAMONDS)
    _, rest = split_prefix(ms, first)
    return rest.is_boxes() if second is BOXES else rest.is_diamonds()


def classify_mrp(s: Formula, t: Formula) -> MrpClassification:
    """Decompose an mrp ``s <= t`` into its inductive shape(s)."""
    sm, sv = modal_string_of(s)
    tm, tv = modal_string_of(t)
    if sv != tv:
        raise MrpError(f"mrp sides use different variables {sv!r} and {tv!r}")
    left_good = is_good(s, "left")
    right_good = is_good(t, "right")
    a = b = None
    if left_good:
        phi, alpha = split_prefix(sm, DIAMONDS)
        psi, chi = split_prefix(tm, BOXES)
        a = TypeA(phi, alpha, psi, BlockDecomposition.of_string(chi, "dia"), sv)
    if right_good:
        psi, delta = split_prefix(tm, BOXES)
        phi, zeta = split_prefix(sm, DIAMONDS)
        b = TypeB(phi, BlockDecomposition.of_string(zeta, "box"), psi, delta, sv)
    if a is not None and b is not None:
        return Analytic(a, b)
    if a is not None:
        return a
    if b is not None:
        return b
    return NotSahlqvist(s, t)


_LA = {"box": "bdia", "bbox": "dia"}
_RA = {"dia": "bbox", "bdia": "box"}


def adjoint_string(theta: ModalString, side: SideName) -> ModalString:
    """Left adjoint (of a box string) or right adjoint (of a diamond string).

    The adjoint of a composite reverses the order of its factors, which only
    matters for strings mixing white and black operators.
    """
    table = _LA if side == "left" else _RA
    try:
        return ModalString(tuple(table[o] for o in reversed(theta.ops)))
    except KeyError:
        kind = "box" if side == "left" else "diamond"
        raise MrpError(f"{theta.unicode()} is not a {kind} string") from None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax error with the byte offset of the offending token and the tokens expected there."""

    def __init__(self, offset: int, expected: frozenset[str], found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        exp = ", ".join(sorted(expected))
        super().__init__(f"syntax error at offset {offset}: found {found!r}, expected one of {{{exp}}}")


_ALIASES = {
    "□": "box", "◇": "dia", "■": "bbox", "⧫": "bdia", "∧": "and", "∨": "or",
    "⊤": "top", "⊥": "bot", "≤": "<=", "⊢": "<=",
}
_KEYWORDS = {"box", "dia", "bbox", "bdia", "and", "or", "top", "bot"}
_TOKEN = re.compile(r"\s*(?:(<=|\(|\)|[□◇■⧫∧∨⊤⊥≤⊢])|([a-z][a-z0-9_]*)|(\S))")
_UNARY_START = frozenset({"box", "dia", "bbox", "bdia", "bot", "top", "(", "identifier"})


@dataclass(frozen=True)
class _Tok:
    kind: str  # keyword/punctuation text, "identifier", "end" or "invalid"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace remains
            break
        start = m.start(m.lastindex)  # type: ignore[arg-type]
        off = len(text[:start].encode("utf-8"))
        sym, ident, junk = m.group(1), m.group(2), m.group(3)
        if sym is not None:
            toks.append(_Tok(_ALIASES.get(sym, sym), sym, off))
        elif ident is not None:
            toks.append(_Tok(ident if ident in _KEYWORDS else "identifier", ident, off))
        else:
            toks.append(_Tok("invalid", junk, off))
        pos = m.end()
    toks.append(_Tok("end", "", len(text.encode("utf-8"))))
    return toks


@dataclass
class _Parser:
    toks: list[_Tok]
    i: int = 0
    nominals: frozenset[str] = field(default_factory=frozenset)
    conominals: frozenset[str] = field(default_factory=frozenset)

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected: frozenset[str]) -> ParseError:
        tok = self.cur
        return ParseError(tok.offset, expected, tok.text or "end of input")

    def eat(self, kind: str) -> _Tok:
        if self.cur.kind != kind:
            raise self.fail(frozenset({kind}))
        tok = self.cur
        self.i += 1
        return tok

    def formula(self) -> Formula:
        f = self.conj()
        while self.cur.kind == "or":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.cur.kind == "and":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.cur
        if tok.kind in _OP_CLASS:
            self.i += 1
            return _OP_CLASS[tok.kind](self.unary())
        if tok.kind == "bot":
            self.i += 1
            return Bottom()
        if tok.kind == "top":
            self.i += 1
            return Top()
        if tok.kind == "identifier":
            self.i += 1
            if tok.text in self.nominals:
                return Nominal(tok.text)
            if tok.text in self.conominals:
                return Conominal(tok.text)
            return Var(tok.text)
        if tok.kind == "(":
            self.i += 1
            f = self.formula()
            self.eat(")")
            return f
        raise self.fail(_UNARY_START)

    def finish(self, follow: frozenset[str]) -> None:
        if self.cur.kind != "end":
            raise self.fail(follow | {"end"})


_AFTER_FORMULA = frozenset({"and", "or"})


def parse_formula(
    text: str, nominals: frozenset[str] = frozenset(), conominals: frozenset[str] = frozenset()
) -> Formula:
    """Parse a single formula.

    Identifiers listed in ``nominals``/``conominals`` parse as such; all others are
    propositional variables.
    """
    p = _Parser(_tokenize(text), nominals=frozenset(nominals), conominals=frozenset(conominals))
    f = p.formula()
    p.finish(_AFTER_FORMULA)
    return f


def parse_inequality(text: str) -> tuple[Formula, Formula]:
    """Parse ``formula <= formula``."""
    p = _Parser(_tokenize(text))
    lhs = p.formula()
    if p.cur.kind != "<=":
        raise p.fail(_AFTER_FORMULA | {"<="})
    p.i += 1
    rhs = p.formula()
    p.finish(_AFTER_FORMULA)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Printing
# ---------------------------------------------------------------------------

_PREC = {Or: 0, And: 1}


def _render(f: Formula, ops: dict[str, str], conn: dict[str, str], sep: str) -> str:
    def go(g: Formula, ctx: int) -> str:
        if isinstance(g, Bottom):
            return conn["bot"]
        if isinstance(g, Top):
            return conn["top"]
        if isinstance(g, (Var, Nominal, Conominal)):
            return g.name
        if type(g) in _CLASS_OP:
            return ops[_CLASS_OP[type(g)]] + sep + go(g.arg, 2)  # type: ignore[union-attr]
        if isinstance(g, (And, Or)):
            prec = _PREC[type(g)]
            word = conn["and" if isinstance(g, And) else "or"]
            out = f"{go(g.left, prec)} {word} {go(g.right, prec + 1)}"
            return f"({out})" if prec < ctx else out
        raise TypeError(f"not a formula: {g!r}")

    return go(f, 0)


def to_text(f: Formula) -> str:
    """ASCII rendering that :func:`parse_formula` reads back to the same AST."""
    return _render(f, {o: o for o in MODAL_OPS}, {"and": "and", "or": "or", "top": "top", "bot": "bot"}, " ")


def to_unicode(f: Formula) -> str:
    return _render(f, UNICODE, {"and": "∧", "or": "∨", "top": "⊤", "bot": "⊥"}, "")


def mrp_text(s: Formula, t: Formula) -> str:
    return f"{to_text(s)} <= {to_text(t)}"


def mrp_unicode(s: Formula, t: Formula) -> str:
    return f"{to_unicode(s)} ≤ {to_unicode(t)}"
