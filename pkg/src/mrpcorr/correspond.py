"""Relational correspondents of Sahlqvist modal reduction principles.

Terms live in one of three languages:

``KRel``  Kripke frames: ``Δ``, the four modal relations, ``∘`` and ``⋆``.
``GRel``  graph-based frames: ``E``, ``D = E⁻¹``, the modal relations, ``⋄_E``,
          ``□_E`` and ``∗``.
``PRel``  polarity-based frames: ``I``, ``J = I⁻¹``, the modal relations, ``;_I``
          and the unmediated ``;``.

Concrete syntax uses the symbols ``Delta E D Rdia Rbdia Rbox Rbbox I J`` and the
operators ``o`` (∘), ``*k`` (⋆), ``;d`` (⋄_E), ``;b`` (□_E), ``*g`` (∗), ``;I`` and
``;``.  A chain of one operator nests to the right; mixing operators needs
parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Union

from .frames import GraphFrame, KripkeFrame, PolarityFrame
from .relcalc import FiniteRelation, compose, semi, semi_i
from .syntax import (
    Analytic, BlockDecomposition, Conominal, Formula, ModalString, Nominal, NotSahlqvist,
    TypeA, TypeB, MrpClassification, adjoint_string, to_text, to_unicode,
)

Lang = Literal["KRel", "GRel", "PRel"]
LANGS: tuple[Lang, ...] = ("KRel", "GRel", "PRel")
Role = Literal["phi", "psi", "chi", "zeta"]

__all__ = [
    "Sym", "Comp", "RelTerm", "RelInequality", "PureInequality", "CorrespondError",
    "TermSyntaxError", "rel_term", "correspondent", "alba_output", "normalize",
    "translate_tau", "lift_term", "lift_inequality", "eval_term", "ineq_holds",
    "parse_term", "parse_rel_inequality", "term_text", "term_unicode", "check_language",
    "prel_sort",
]


class CorrespondError(ValueError):
    """Raised for non-Sahlqvist input or ill-formed terms."""


class TermSyntaxError(ValueError):
    def __init__(self, offset: int, message: str):
        self.offset = offset
        super().__init__(f"term syntax error at offset {offset}: {message}")


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------

SYMBOLS = ("Delta", "E", "D", "Rdia", "Rbdia", "Rbox", "Rbbox", "I", "J")
OPS = ("circ", "star", "dia_e", "box_e", "ast", "semi_i", "semi")

_SYM_UNICODE = {
    "Delta": "Δ", "E": "E", "D": "D", "Rdia": "R_◇", "Rbdia": "R_⧫", "Rbox": "R_□",
    "Rbbox": "R_■", "I": "I", "J": "J",
}
_OP_TEXT = {"circ": "o", "star": "*k", "dia_e": ";d", "box_e": ";b", "ast": "*g", "semi_i": ";I", "semi": ";"}
_OP_UNICODE = {"circ": "∘", "star": "⋆", "dia_e": "⋄_E", "box_e": "□_E", "ast": "∗", "semi_i": ";_I", "semi": ";"}
_TEXT_OP = {v: k for k, v in _OP_TEXT.items()}

_LANG_SYMBOLS = {
    "KRel": {"Delta", "Rdia", "Rbdia", "Rbox", "Rbbox"},
    "GRel": {"E", "D", "Rdia", "Rbdia", "Rbox", "Rbbox"},
    "PRel": {"I", "J", "Rdia", "Rbdia", "Rbox", "Rbbox"},
}
_LANG_OPS = {
    "KRel": {"circ", "star"},
    "GRel": {"dia_e", "box_e", "ast"},
    "PRel": {"semi_i", "semi"},
}

_OP_SYMBOL = {"dia": "Rdia", "bdia": "Rbdia", "box": "Rbox", "bbox": "Rbbox"}


@dataclass(frozen=True)
class Sym:
    name: str

    def __post_init__(self) -> None:
        if self.name not in SYMBOLS:
            raise CorrespondError(f"unknown relation symbol {self.name!r}")


@dataclass(frozen=True)
class Comp:
    op: str
    left: "RelTerm"
    right: "RelTerm"

    def __post_init__(self) -> None:
        if self.op not in OPS:
            raise CorrespondError(f"unknown composition {self.op!r}")


RelTerm = Union[Sym, Comp]


def chain(op: str, terms: Sequence[RelTerm]) -> RelTerm:
    """Right-nested composition ``t₁ op (t₂ op (… op tₙ))``."""
    if not terms:
        raise CorrespondError("cannot compose an empty chain")
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Comp(op, t, out)
    return out


def _render(t: RelTerm, syms: dict, ops: dict) -> str:
    if isinstance(t, Sym):
        return syms[t.name]
    left = _render(t.left, syms, ops)
    if isinstance(t.left, Comp):
        left = f"({left})"
    right = _render(t.right, syms, ops)
    if isinstance(t.right, Comp) and t.right.op != t.op:
        right = f"({right})"
    return f"{left} {ops[t.op]} {right}"


def term_text(t: RelTerm) -> str:
    return _render(t, {s: s for s in SYMBOLS}, _OP_TEXT)


def term_unicode(t: RelTerm) -> str:
    return _render(t, _SYM_UNICODE, _OP_UNICODE)


def symbols_of(t: RelTerm) -> set[str]:
    if isinstance(t, Sym):
        return {t.name}
    return symbols_of(t.left) | symbols_of(t.right)


def ops_of(t: RelTerm) -> set[str]:
    if isinstance(t, Sym):
        return set()
    return {t.op} | ops_of(t.left) | ops_of(t.right)


Sort = Literal["AxX", "XxA", "AxA", "XxX"]
_SYM_SORT: dict[str, tuple[str, str]] = {
    "I": ("A", "X"), "Rbox": ("A", "X"), "Rbbox": ("A", "X"),
    "J": ("X", "A"), "Rdia": ("X", "A"), "Rbdia": ("X", "A"),
}


def prel_sort(t: RelTerm) -> Sort:
    """Sort of a PRel term, raising :class:`CorrespondError` if it is ill-sorted."""

    def go(u: RelTerm) -> tuple[str, str]:
        if isinstance(u, Sym):
            if u.name not in _SYM_SORT:
                raise CorrespondError(f"{u.name} is not a PRel symbol")
            return _SYM_SORT[u.name]
        ls, rs = go(u.left), go(u.right)
        if u.op == "semi_i":
            if ls != rs or ls[0] == ls[1]:
                raise CorrespondError(f";_I needs two operands of one heterogeneous sort, got {ls} and {rs}")
            return ls
        if u.op == "semi":
            if ls[1] != rs[0]:
                raise CorrespondError(f"; cannot compose sorts {ls} and {rs}")
            return (ls[0], rs[1])
        raise CorrespondError(f"{u.op} is not a PRel operator")

    s = go(t)
    return f"{s[0]}x{s[1]}"  # type: ignore[return-value]


def check_language(t: RelTerm, lang: Lang) -> None:
    bad_syms = symbols_of(t) - _LANG_SYMBOLS[lang]
    bad_ops = ops_of(t) - _LANG_OPS[lang]
    if bad_syms or bad_ops:
        raise CorrespondError(f"term {term_text(t)!r} is not in {lang}: {sorted(bad_syms | bad_ops)}")
    if lang == "PRel":
        prel_sort(t)


def language_of(t: RelTerm) -> Lang:
    for lang in LANGS:
        try:
            check_language(t, lang)
            return lang
        except CorrespondError:
            continue
    raise CorrespondError(f"term {term_text(t)!r} mixes languages")


@dataclass(frozen=True)
class RelInequality:
    """``lhs ⊆ rhs`` in one language; ``label`` tags the (a)/(b) derivation of analytic mrps."""

    lhs: RelTerm
    rhs: RelTerm
    lang: Lang
    label: str = ""

    def __post_init__(self) -> None:
        check_language(self.lhs, self.lang)
        check_language(self.rhs, self.lang)
        if self.lang == "PRel" and prel_sort(self.lhs) != prel_sort(self.rhs):
            raise CorrespondError("PRel inequality sides have different sorts")

    def text(self) -> str:
        return f"{term_text(self.lhs)} <= {term_text(self.rhs)}"

    def unicode(self) -> str:
        return f"{term_unicode(self.lhs)} ⊆ {term_unicode(self.rhs)}"

    def __str__(self) -> str:
        return self.unicode()

    def same_as(self, other: "RelInequality") -> bool:
        return (self.lhs, self.rhs, self.lang) == (other.lhs, other.rhs, other.lang)


# ---------------------------------------------------------------------------
# Term concrete syntax
# ---------------------------------------------------------------------------

_TERM_TOKEN = re.compile(r"\s*(?:(;[Idb](?![A-Za-z0-9_])|;|\*[kg]|<=|⊆|\(|\))|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _term_tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        m = _TERM_TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex)  # type: ignore[arg-type]
        off = len(text[:start].encode("utf-8"))
        punct, word, junk = m.groups()
        if punct is not None:
            kind = "<=" if punct == "⊆" else punct
            out.append((kind if kind in ("<=", "(", ")") else "op", _TEXT_OP.get(punct, punct), off))
        elif word == "o":
            out.append(("op", "circ", off))
        elif word is not None:
            if word not in SYMBOLS:
                raise TermSyntaxError(off, f"unknown symbol {word!r}")
            out.append(("sym", word, off))
        else:
            raise TermSyntaxError(off, f"unexpected character {junk!r}")
        pos = m.end()
    out.append(("end", "", len(text.encode("utf-8"))))
    return out


class _TermParser:
    def __init__(self, text: str):
        self.toks = _term_tokens(text)
        self.i = 0

    @property
    def cur(self):
        return self.toks[self.i]

    def term(self) -> RelTerm:
        items = [self.operand()]
        op = None
        while self.cur[0] == "op":
            tok = self.cur
            if op is not None and tok[1] != op:
                raise TermSyntaxError(tok[2], "mixing composition operators needs parentheses")
            op = tok[1]
            self.i += 1
            items.append(self.operand())
        return items[0] if op is None else chain(op, items)

    def operand(self) -> RelTerm:
        kind, val, off = self.cur
        if kind == "sym":
            self.i += 1
            return Sym(val)
        if kind == "(":
            self.i += 1
            t = self.term()
            if self.cur[0] != ")":
                raise TermSyntaxError(self.cur[2], "expected ')'")
            self.i += 1
            return t
        raise TermSyntaxError(off, f"expected a relation symbol or '(', found {val or 'end of input'!r}")

    def expect_end(self) -> None:
        if self.cur[0] != "end":
            raise TermSyntaxError(self.cur[2], f"unexpected {self.cur[1]!r}")


def parse_term(text: str) -> RelTerm:
    p = _TermParser(text)
    t = p.term()
    p.expect_end()
    return t


def parse_rel_inequality(text: str, lang: Optional[Lang] = None) -> RelInequality:
    """Parse ``term <= term``; the language is inferred when not given."""
    p = _TermParser(text)
    lhs = p.term()
    if p.cur[0] != "<=":
        raise TermSyntaxError(p.cur[2], "expected '<='")
    p.i += 1
    rhs = p.term()
    p.expect_end()
    if lang is None:
        for cand in LANGS:
            try:
                return RelInequality(lhs, rhs, cand)
            except CorrespondError:
                continue
        raise CorrespondError("the two sides do not share a relational language")
    return RelInequality(lhs, rhs, lang)


# ---------------------------------------------------------------------------
# Compilation
# ---------------------------------------------------------------------------

# per language: (diamond base, box base, diamond step, box step, block joiner)
_SCHEMA = {
    "GRel": ("D", "E", "dia_e", "box_e", "ast"),
    "KRel": ("Delta", "Delta", "circ", "circ", "star"),
    "PRel": ("J", "I", "semi_i", "semi_i", "semi"),
}


def _string_term(ms: ModalString, kind: Literal["dia", "box"], lang: Lang) -> RelTerm:
    dbase, bbase, dstep, bstep, _ = _SCHEMA[lang]
    if kind == "dia" and not ms.is_diamonds():
        raise CorrespondError(f"{ms.unicode()} is not a diamond string")
    if kind == "box" and not ms.is_boxes():
        raise CorrespondError(f"{ms.unicode()} is not a box string")
    term: RelTerm = Sym(dbase if kind == "dia" else bbase)
    step = dstep if kind == "dia" else bstep
    for op in reversed(ms.ops):
        term = Comp(step, Sym(_OP_SYMBOL[op]), term)
    return term


def rel_term(
    part: Union[ModalString, BlockDecomposition], role: Role, lang: Lang, norm: bool = True
) -> RelTerm:
    """The relational term associated with a φ/ψ string or a χ/ζ block decomposition.

    φ (diamonds) and ψ (boxes) fold their operators onto the unit with the
    language's mediated composition.  χ and ζ join the terms of their blocks
    with the block composition, appending the unit of the lead kind when the
    last block is of the other kind.  Each block term is normalized when
    ``norm`` is set.
    """
    if role in ("phi", "psi"):
        if not isinstance(part, ModalString):
            raise CorrespondError(f"role {role} needs a modal string")
        t = _string_term(part, "dia" if role == "phi" else "box", lang)
        return normalize(t) if norm else t
    if not isinstance(part, BlockDecomposition):
        raise CorrespondError(f"role {role} needs a block decomposition")
    want = "dia" if role == "chi" else "box"
    if part.lead != want:
        raise CorrespondError(f"role {role} needs blocks led by a {want}")
    dbase, bbase, _, _, joiner = _SCHEMA[lang]
    if part.is_bare:
        return Sym(dbase if want == "dia" else bbase)
    terms = []
    for block, kind in zip(part.blocks, part.block_kinds()):
        t = _string_term(block, kind, lang)  # type: ignore[arg-type]
        terms.append(normalize(t) if norm else t)
    if not part.ends_with_lead_kind:
        terms.append(Sym(dbase if want == "dia" else bbase))
    return chain(joiner, terms)


def _parts(c: MrpClassification) -> list[tuple[str, Union[TypeA, TypeB]]]:
    if isinstance(c, NotSahlqvist):
        raise CorrespondError("the mrp is not Sahlqvist: neither side is good")
    if isinstance(c, Analytic):
        return [("a", c.a), ("b", c.b)]
    return [("a" if isinstance(c, TypeA) else "b", c)]


def correspondent(c: MrpClassification, lang: Lang, norm: bool = True) -> tuple[RelInequality, ...]:
    """First-order correspondent(s) of a classified mrp as relational inequalities.

    Type (a): ``R_{LA(ψ)} ⋄ R_φ ⊆ R_{χ[LA(α)/p]}``; type (b):
    ``R_{RA(φ)} □ R_ψ ⊆ R_{ζ[RA(δ)/p]}``, with the language's compositions.  In
    PRel the inclusion is reversed, since its relations code complements.
    Analytic mrps give both, labelled ``a`` and ``b``.
    """
    out = []
    _, _, dstep, bstep, _ = _SCHEMA[lang]
    for label, part in _parts(c):
        if isinstance(part, TypeA):
            left = Comp(
                dstep,
                rel_term(adjoint_string(part.psi, "left"), "phi", lang, norm),
                rel_term(part.phi, "phi", lang, norm),
            )
            chi = BlockDecomposition.of_string(part.chi.string + adjoint_string(part.alpha, "left"), "dia")
            right = rel_term(chi, "chi", lang, norm)
        else:
            left = Comp(
                bstep,
                rel_term(adjoint_string(part.phi, "right"), "psi", lang, norm),
                rel_term(part.psi, "psi", lang, norm),
            )
            zeta = BlockDecomposition.of_string(part.zeta.string + adjoint_string(part.delta, "right"), "box")
            right = rel_term(zeta, "zeta", lang, norm)
        if norm:
            left, right = normalize(left), normalize(right)
        if lang == "PRel":
            left, right = right, left
        out.append(RelInequality(left, right, lang, label))
    return tuple(out)


# ---------------------------------------------------------------------------
# Rewriting and translations
# ---------------------------------------------------------------------------

_UNITS = {"dia_e": {"D"}, "box_e": {"E"}, "circ": {"Delta"}, "semi_i": {"I", "J"}}
_ASSOCIATIVE = frozenset(_UNITS)


def normalize(t: RelTerm) -> RelTerm:
    """Remove units of the mediated compositions and right-nest their chains.

    Only ``⋄_E``, ``□_E``, ``∘`` and ``;_I`` are rewritten (unit laws and
    associativity); ``∗``, ``⋆`` and ``;`` keep their structure, trailing units
    included.
    """
    if isinstance(t, Sym):
        return t
    left, right = normalize(t.left), normalize(t.right)
    if t.op in _UNITS:
        if isinstance(right, Sym) and right.name in _UNITS[t.op]:
            return left
        if isinstance(left, Sym) and left.name in _UNITS[t.op]:
            return right
        if isinstance(left, Comp) and left.op == t.op:
            return normalize(Comp(t.op, left.left, Comp(t.op, left.right, right)))
    return Comp(t.op, left, right)


_TAU_SYM = {"E": "Delta", "D": "Delta"}
_TAU_OP = {"dia_e": "circ", "box_e": "circ", "ast": "star"}


def translate_tau(t: Union[RelTerm, RelInequality]) -> Union[RelTerm, RelInequality]:
    """GRel → KRel: ``E, D ↦ Δ``; ``⋄_E, □_E ↦ ∘``; ``∗ ↦ ⋆``."""
    if isinstance(t, RelInequality):
        if t.lang != "GRel":
            raise CorrespondError("τ applies to GRel inequalities")
        return RelInequality(translate_tau(t.lhs), translate_tau(t.rhs), "KRel", t.label)  # type: ignore[arg-type]
    if isinstance(t, Sym):
        return Sym(_TAU_SYM.get(t.name, t.name))
    if t.op not in _TAU_OP:
        raise CorrespondError(f"τ is undefined on {t.op}")
    return Comp(_TAU_OP[t.op], translate_tau(t.left), translate_tau(t.right))  # type: ignore[arg-type]


_LIFT_SYM = {"E": "I", "D": "J"}
_LIFT_OP = {"dia_e": "semi_i", "box_e": "semi_i", "ast": "semi"}


def lift_term(t: RelTerm) -> RelTerm:
    """GRel → PRel on terms: ``E ↦ I``, ``D ↦ J``, ``⋄_E, □_E ↦ ;_I``, ``∗ ↦ ;``."""
    if isinstance(t, Sym):
        return Sym(_LIFT_SYM.get(t.name, t.name))
    if t.op not in _LIFT_OP:
        raise CorrespondError(f"lifting is undefined on {t.op}")
    return Comp(_LIFT_OP[t.op], lift_term(t.left), lift_term(t.right))


def lift_inequality(ineq: RelInequality) -> RelInequality:
    """The PRel inequality coding the complements: ``ξ₁ ⊆ ξ₂`` becomes ``lift ξ₂ ⊆ lift ξ₁``."""
    if ineq.lang != "GRel":
        raise CorrespondError("lifting applies to GRel inequalities")
    return RelInequality(lift_term(ineq.rhs), lift_term(ineq.lhs), "PRel", ineq.label)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

FrameT = Union[KripkeFrame, GraphFrame, PolarityFrame]


def _resolve(name: str, f: FrameT) -> FiniteRelation:
    if isinstance(f, KripkeFrame):
        table = {"Delta": f.delta, "Rbox": f.r_box, "Rdia": f.r_dia, "Rbdia": f.r_bdia, "Rbbox": f.r_bbox}
    elif isinstance(f, GraphFrame):
        table = {"E": f.e, "D": f.d, "Rbox": f.r_box, "Rdia": f.r_dia, "Rbdia": f.r_bdia, "Rbbox": f.r_bbox}
    else:
        table = {"I": f.i, "J": f.j, "Rbox": f.r_box, "Rdia": f.r_dia, "Rbdia": f.r_bdia, "Rbbox": f.r_bbox}
    return table[name]


_FRAME_LANG = {KripkeFrame: "KRel", GraphFrame: "GRel", PolarityFrame: "PRel"}


def eval_term(t: RelTerm, f: FrameT) -> FiniteRelation:
    """Interpret a term on a frame of the matching kind."""
    lang = _FRAME_LANG.get(type(f))
    if lang is None:
        raise CorrespondError(f"not a frame: {type(f).__name__}")
    check_language(t, lang)  # type: ignore[arg-type]
    return _eval(t, f)


def _eval(t: RelTerm, f: FrameT) -> FiniteRelation:
    if isinstance(t, Sym):
        return _resolve(t.name, f)
    left, right = _eval(t.left, f), _eval(t.right, f)
    if t.op == "semi_i":
        return semi_i(left, right, f.i, prel_sort(t.left))  # type: ignore[union-attr]
    if t.op == "semi":
        return semi(left, right)
    e = f.e if isinstance(f, GraphFrame) else None
    return compose(t.op, left, right, e if t.op in ("dia_e", "box_e") else None)  # type: ignore[arg-type]


def ineq_holds(ineq: RelInequality, f: FrameT) -> tuple[bool, Optional[tuple[str, str]]]:
    """Whether ``lhs ⊆ rhs`` on ``f``, with a pair in ``lhs`` but not ``rhs`` on failure."""
    lhs, rhs = eval_term(ineq.lhs, f), eval_term(ineq.rhs, f)
    bad = lhs.first_violation(rhs)
    return bad is None, bad


# ---------------------------------------------------------------------------
# ALBA outputs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PureInequality:
    """``∀j[lhs ≤ rhs]`` (type a, one nominal) or ``∀m[lhs ≤ rhs]`` (type b, one conominal)."""

    var: str
    lhs: Formula
    rhs: Formula
    label: str = ""

    def text(self) -> str:
        return f"forall {self.var} . {to_text(self.lhs)} <= {to_text(self.rhs)}"

    def unicode(self) -> str:
        return f"∀{self.var}[{to_unicode(self.lhs)} ≤ {to_unicode(self.rhs)}]"

    def __str__(self) -> str:
        return self.unicode()


def alba_output(c: MrpClassification) -> tuple[PureInequality, ...]:
    """Pure inequalities for the mrp; analytic mrps give the (a) and (b) outputs."""
    out = []
    for label, part in _parts(c):
        if isinstance(part, TypeA):
            j = Nominal("j")
            lhs = (adjoint_string(part.psi, "left") + part.phi).apply(j)
            rhs = (part.chi.string + adjoint_string(part.alpha, "left")).apply(j)
            out.append(PureInequality("j", lhs, rhs, label))
        else:
            m = Conominal("m")
            lhs = (part.zeta.string + adjoint_string(part.delta, "right")).apply(m)
            rhs = (adjoint_string(part.phi, "right") + part.psi).apply(m)
            out.append(PureInequality("m", lhs, rhs, label))
    return tuple(out)
