"""Finite relation algebra on boolean matrices.

A :class:`FiniteRelation` ``T ⊆ U × V`` is stored as a ``|U| × |V|`` boolean
matrix whose row ``i`` is the set of ``V``-elements related to ``U[i]``.
Subsets of a domain are boolean vectors; a *family* of subsets is a boolean
matrix with one subset per row, which lets every set operator below act on
all singletons at once through a single integer matrix product.

Notation used throughout the package:

``T^(0)[V'] = {u | ∀v∈V'. u T v}``        (:func:`galois_pos`, side 0)
``T^(1)[U'] = {v | ∀u∈U'. u T v}``        (:func:`galois_pos`, side 1)
``T^[0]``, ``T^[1]``                      the same operators for ``T^c``
``[T]W = T^[0][W^c]``, ``⟨T⟩W = (T^[0][W])^c = T⁻¹[W]``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Optional, Sequence

import numpy as np

Side = Literal[0, 1]
CompKind = Literal["circ", "star", "dia_e", "box_e", "ast"]
Orientation = Literal["box", "dia"]

__all__ = [
    "FiniteDomain",
    "FiniteRelation",
    "CompatibilityReport",
    "polar",
    "galois_pos",
    "galois_neg",
    "box_op",
    "dia_op",
    "compose",
    "semi_i",
    "semi",
    "is_e_compatible",
    "bond_closure",
]


class DomainError(ValueError):
    """Raised when sets or relations do not fit the domains they are used with."""


@dataclass(frozen=True)
class FiniteDomain:
    """An ordered tuple of unique element labels.

    ``tag`` distinguishes domains that share labels, such as the object and
    feature copies of a set in a lifted frame.
    """

    labels: tuple[str, ...]
    tag: str = ""

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise DomainError(f"duplicate labels in domain {self.labels!r}")

    @classmethod
    def of(cls, labels: Iterable[object], tag: str = "") -> "FiniteDomain":
        return cls(tuple(str(x) for x in labels), tag)

    @classmethod
    def range(cls, n: int) -> "FiniteDomain":
        return cls(tuple(str(i) for i in range(n)))

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: object) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise DomainError(f"{label!r} is not an element of {self.labels!r}") from None

    def subset(self, labels: Iterable[object]) -> np.ndarray:
        """Boolean vector of the given labels."""
        v = np.zeros(len(self), dtype=bool)
        for x in labels:
            v[self.index(x)] = True
        return v

    def names(self, vec: np.ndarray) -> tuple[str, ...]:
        """Labels selected by a boolean vector, in domain order."""
        return tuple(lab for lab, keep in zip(self.labels, vec) if keep)

    def all_subsets(self) -> np.ndarray:
        """All ``2^n`` subsets as a family (row ``k`` is the subset with bitmask ``k``)."""
        n = len(self)
        ks = np.arange(1 << n)[:, None]
        return ((ks >> np.arange(n)[None, :]) & 1).astype(bool)


@dataclass(frozen=True, eq=False)
class FiniteRelation:
    """A relation between two finite domains, as a boolean membership matrix."""

    source: FiniteDomain
    target: FiniteDomain
    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=bool)
        if m.shape != (len(self.source), len(self.target)):
            raise DomainError(
                f"matrix shape {m.shape} does not match domains "
                f"({len(self.source)}, {len(self.target)})"
            )
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_pairs(
        cls,
        source: FiniteDomain,
        pairs: Iterable[tuple[object, object]],
        target: Optional[FiniteDomain] = None,
    ) -> "FiniteRelation":
        target = source if target is None else target
        m = np.zeros((len(source), len(target)), dtype=bool)
        for a, b in pairs:
            m[source.index(a), target.index(b)] = True
        return cls(source, target, m)

    @classmethod
    def identity(cls, dom: FiniteDomain) -> "FiniteRelation":
        return cls(dom, dom, np.eye(len(dom), dtype=bool))

    @classmethod
    def full(cls, source: FiniteDomain, target: Optional[FiniteDomain] = None) -> "FiniteRelation":
        target = source if target is None else target
        return cls(source, target, np.ones((len(source), len(target)), dtype=bool))

    @classmethod
    def empty(cls, source: FiniteDomain, target: Optional[FiniteDomain] = None) -> "FiniteRelation":
        target = source if target is None else target
        return cls(source, target, np.zeros((len(source), len(target)), dtype=bool))

    # -- basic algebra ----------------------------------------------------
    @property
    def is_endo(self) -> bool:
        return self.source == self.target

    def complement(self) -> "FiniteRelation":
        return FiniteRelation(self.source, self.target, ~self.matrix)

    def __invert__(self) -> "FiniteRelation":
        return self.complement()

    def converse(self) -> "FiniteRelation":
        return FiniteRelation(self.target, self.source, self.matrix.T)

    def with_domains(self, source: FiniteDomain, target: FiniteDomain) -> "FiniteRelation":
        return FiniteRelation(source, target, self.matrix)

    def __contains__(self, pair: tuple[object, object]) -> bool:
        a, b = pair
        return bool(self.matrix[self.source.index(a), self.target.index(b)])

    def __le__(self, other: "FiniteRelation") -> bool:
        return bool(np.all(~self.matrix | other.matrix))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteRelation):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix.tobytes()))

    def __or__(self, other: "FiniteRelation") -> "FiniteRelation":
        return FiniteRelation(self.source, self.target, self.matrix | other.matrix)

    def __and__(self, other: "FiniteRelation") -> "FiniteRelation":
        return FiniteRelation(self.source, self.target, self.matrix & other.matrix)

    def pairs(self) -> list[tuple[str, str]]:
        rows, cols = np.nonzero(self.matrix)
        return [(self.source.labels[i], self.target.labels[j]) for i, j in zip(rows, cols)]

    def is_reflexive(self) -> bool:
        return self.is_endo and bool(np.all(np.diag(self.matrix)))

    def first_violation(self, other: "FiniteRelation") -> Optional[tuple[str, str]]:
        """A pair in ``self`` but not in ``other``, if any."""
        bad = self.matrix & ~other.matrix
        if not bad.any():
            return None
        i, j = np.argwhere(bad)[0]
        return (self.source.labels[i], self.target.labels[j])

    def __repr__(self) -> str:
        return f"FiniteRelation({self.pairs()!r})"


# ---------------------------------------------------------------------------
# Set operators
# ---------------------------------------------------------------------------

def polar(t: np.ndarray, family: np.ndarray) -> np.ndarray:
    """Apply ``T^(0)`` to every row of a family.

    ``t`` has shape ``(|U|, |V|)`` and ``family`` shape ``(k, |V|)`` (or a single
    vector of length ``|V|``).  Row ``r`` of the result is
    ``{u | ∀v ∈ family[r]. t[u, v]}``.
    """
    fam = np.atleast_2d(family)
    # u fails for row r iff some v in the row has ¬t[u, v]
    bad = fam.astype(np.int32) @ (~t).T.astype(np.int32)
    out = bad == 0
    return out if np.ndim(family) == 2 else out[0]


def _as_vector(dom: FiniteDomain, s: object) -> np.ndarray:
    if isinstance(s, np.ndarray):
        if s.shape != (len(dom),):
            raise DomainError(f"subset vector of shape {s.shape} does not fit domain of size {len(dom)}")
        return s.astype(bool)
    return dom.subset(s)  # type: ignore[arg-type]


def galois_pos(t: FiniteRelation, side: Side, s: object) -> np.ndarray:
    """``T^(0)[S]`` for ``S ⊆ target`` (side 0) or ``T^(1)[S]`` for ``S ⊆ source`` (side 1)."""
    if side == 0:
        return polar(t.matrix, _as_vector(t.target, s))
    if side == 1:
        return polar(t.matrix.T, _as_vector(t.source, s))
    raise ValueError(f"side must be 0 or 1, not {side!r}")


def galois_neg(t: FiniteRelation, side: Side, s: object) -> np.ndarray:
    """``T^[0][S]`` / ``T^[1][S]``: :func:`galois_pos` applied to the complement of ``T``."""
    return galois_pos(t.complement(), side, s)


def box_op(t: FiniteRelation, w: object) -> np.ndarray:
    """``[T]W = {u | T[u] ⊆ W}``."""
    wv = _as_vector(t.target, w)
    return polar(~t.matrix, ~wv)


def dia_op(t: FiniteRelation, w: object) -> np.ndarray:
    """``⟨T⟩W = T⁻¹[W] = {u | T[u] ∩ W ≠ ∅}``."""
    wv = _as_vector(t.target, w)
    return ~polar(~t.matrix, wv)


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------

def _check_endo(*rels: FiniteRelation) -> FiniteDomain:
    dom = rels[0].source
    for r in rels:
        if r.source != dom or r.target != dom:
            raise DomainError("compositions of this kind need endorelations on a single domain")
    return dom


def _neg_chain(first: np.ndarray, *steps: np.ndarray) -> np.ndarray:
    """Column-wise ``S₁^[0][S₂^[?][ … [Sₖ^[0][a]]]]`` for all ``a`` at once.

    ``first`` is the innermost relation (its complement columns start the chain);
    every step is the matrix of a relation to be applied through ``polar`` of its
    complement.  Returns the family whose row ``a`` is the resulting set.
    """
    fam = (~first).T
    for step in steps:
        fam = polar(~step, fam)
    return fam


def compose(
    kind: CompKind,
    r: FiniteRelation,
    t: FiniteRelation,
    e: Optional[FiniteRelation] = None,
) -> FiniteRelation:
    """Compose two endorelations.

    ``circ``  ordinary composition: ``x (R∘T) z`` iff ``∃y. x R y ∧ y T z``.
    ``dia_e`` ``(R ⋄_E T)^[0][a] = R^[0][E^[0][T^[0][a]]]``.
    ``box_e`` ``(R □_E T)^[0][x] = R^[0][E^[1][T^[0][x]]]``.
    ``ast``   ``(R ∗ T)^[0][x] = R^[0][T^[0][x]]``; ``star`` is the same assignment
    used on Kripke carriers.
    """
    dom = _check_endo(r, t) if e is None else _check_endo(r, t, e)
    if kind == "circ":
        m = (r.matrix.astype(np.int32) @ t.matrix.astype(np.int32)) > 0
        return FiniteRelation(dom, dom, m)
    if kind in ("ast", "star"):
        fam = _neg_chain(t.matrix, r.matrix)
    elif kind in ("dia_e", "box_e"):
        if e is None:
            raise DomainError(f"composition {kind!r} needs the graph relation E")
        if not e.is_reflexive():
            raise DomainError("E must be reflexive")
        # E^[0] = polar(~E, ·) and E^[1] = polar(~E^T, ·)
        e_step = e.matrix if kind == "dia_e" else e.matrix.T
        fam = _neg_chain(t.matrix, e_step, r.matrix)
    else:
        raise ValueError(f"unknown composition kind {kind!r}")
    # fam[a] = (R op T)^[0][a] = {x | ¬ x (R op T) a}
    return FiniteRelation(dom, dom, ~fam.T)


def semi_i(
    r: FiniteRelation, t: FiniteRelation, i: FiniteRelation, sort: Optional[str] = None
) -> FiniteRelation:
    """I-mediated composition of two relations of the same polarity sort.

    For ``β₁, β₂ ⊆ A × X``: ``a (β₁ ;_I β₂) x`` iff ``a ∈ β₁^(0)[I^(1)[β₂^(0)[x]]]``.
    For ``δ₁, δ₂ ⊆ X × A``: ``x (δ₁ ;_I δ₂) a`` iff ``x ∈ δ₁^(0)[I^(0)[δ₂^(0)[a]]]``.
    The sort (``"AxX"`` or ``"XxA"``) is read off the domains, with ``I ⊆ A × X``,
    unless given explicitly; pass it when ``A`` and ``X`` are equal domains.
    """
    if r.source != t.source or r.target != t.target:
        raise DomainError(";_I composes two relations of the same heterogeneous sort")
    fam = t.matrix.T  # row z = t^(0)[z]
    if sort is None:
        if r.source == i.source and r.target == i.target:
            sort = "AxX"
        elif r.source == i.target and r.target == i.source:
            sort = "XxA"
    if sort == "AxX" and r.matrix.shape == i.matrix.shape:
        fam = polar(i.matrix.T, fam)  # I^(1)
    elif sort == "XxA" and r.matrix.shape == i.matrix.T.shape:
        fam = polar(i.matrix, fam)  # I^(0)
    else:
        raise DomainError(";_I operands must have sort A×X or X×A for the given I")
    fam = polar(r.matrix, fam)
    return FiniteRelation(r.source, t.target, fam.T)


def semi(r: FiniteRelation, t: FiniteRelation) -> FiniteRelation:
    """Un-mediated heterogeneous composition: ``z (R ; T) w`` iff ``z ∈ R^(0)[T^(0)[w]]``."""
    if r.target != t.source:
        raise DomainError("; needs the target of the left operand to be the source of the right one")
    fam = polar(r.matrix, t.matrix.T)
    return FiniteRelation(r.source, t.target, fam.T)


# ---------------------------------------------------------------------------
# E-compatibility
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    condition: str = ""
    element: str = ""
    offending: tuple[str, ...] = ()
    closure: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return (
            f"{self.condition} fails at {self.element}: "
            f"set {{{','.join(self.offending)}}} closes to {{{','.join(self.closure)}}}"
        )


def _close_ext(e: np.ndarray, fam: np.ndarray) -> np.ndarray:
    """``B ↦ B^[10]`` row-wise, where ``B^[1] = E^[1][B]`` and ``Y^[0] = E^[0][Y]``."""
    return polar(~e, polar(~e.T, fam))


def _close_int(e: np.ndarray, fam: np.ndarray) -> np.ndarray:
    """``Y ↦ Y^[01]`` row-wise."""
    return polar(~e.T, polar(~e, fam))


def is_e_compatible(
    r: FiniteRelation, e: FiniteRelation, orientation: Orientation = "box"
) -> CompatibilityReport:
    """Check the two singleton stability conditions for ``R`` over the graph ``(Z, E)``.

    ``box``: ``(R^[0][y])^[10] ⊆ R^[0][y]`` and ``(R^[1][b])^[01] ⊆ R^[1][b]``.
    ``dia``: ``(R^[0][b])^[01] ⊆ R^[0][b]`` and ``(R^[1][y])^[10] ⊆ R^[1][y]``.
    On failure the report names the element and the offending set.
    """
    dom = _check_endo(r, e)
    if not e.is_reflexive():
        raise DomainError("E must be reflexive")
    em = e.matrix
    cols = (~r.matrix).T  # row y = R^[0][y]
    rows = ~r.matrix  # row b = R^[1][b]
    if orientation == "box":
        checks = (
            ("(R^[0][y])^[10] ⊆ R^[0][y]", cols, _close_ext(em, cols)),
            ("(R^[1][b])^[01] ⊆ R^[1][b]", rows, _close_int(em, rows)),
        )
    elif orientation == "dia":
        checks = (
            ("(R^[0][b])^[01] ⊆ R^[0][b]", cols, _close_int(em, cols)),
            ("(R^[1][y])^[10] ⊆ R^[1][y]", rows, _close_ext(em, rows)),
        )
    else:
        raise ValueError(f"orientation must be 'box' or 'dia', not {orientation!r}")
    for name, fam, closed in checks:
        bad = np.any(closed & ~fam, axis=1)
        if bad.any():
            k = int(np.argmax(bad))
            return CompatibilityReport(
                False, name, dom.labels[k], dom.names(fam[k]), dom.names(closed[k])
            )
    return CompatibilityReport(True)


def bond_closure(seed: np.ndarray, e: np.ndarray, orientation: Orientation = "box") -> np.ndarray:
    """Smallest E-compatible complement pattern above ``seed``.

    ``seed`` is a boolean matrix proposed for ``R^c``.  Columns and rows are
    alternately replaced by their Galois closures until both are stable; the
    complement of the result is an E-compatible relation in the requested
    orientation.  Used by the frame generators.
    """
    m = np.asarray(seed, dtype=bool)
    col_close, row_close = (
        (_close_ext, _close_int) if orientation == "box" else (_close_int, _close_ext)
    )
    while True:
        nxt = col_close(e, m.T).T
        nxt = row_close(e, nxt)
        if np.array_equal(nxt, m):
            return m
        m = nxt


def relation_from_columns(dom: FiniteDomain, cols: Sequence[np.ndarray]) -> FiniteRelation:
    """Endorelation whose ``^[0]`` column sets are the given vectors."""
    return FiniteRelation(dom, dom, ~np.array(cols, dtype=bool).T)
