"""Interpretation of modal formulas on graph-based and Kripke models.

On a graph-based frame a formula denotes a formal concept ``(ext, int)``:

* ``V(□φ) = (R_□^[0][int φ], ·)``   and  ``V(■φ)`` likewise with ``R_■ = R_◇⁻¹``
* ``V(◇φ) = (·, R_◇^[0][ext φ])``   and  ``V(⧫φ)`` likewise with ``R_⧫ = R_□⁻¹``
* ``∧`` intersects extents, ``∨`` intersects intents; the missing half of each
  pair is the Galois polar of the other.

On a Kripke frame a formula denotes a set of states, with ``□ = [R_□]``,
``◇ = ⟨R_◇⟩``, ``■ = [R_◇⁻¹]`` and ``⧫ = ⟨R_□⁻¹⟩``.

The evaluator works on *families*: every environment entry is a stack of
``k`` values (one per row), so all valuations of a frame are interpreted in a
single pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .frames import Concept, ConceptLattice, GraphFrame, KripkeFrame, concept_lattice
from .relcalc import FiniteDomain, polar
from .syntax import (
    And, BlackBox, BlackDia, Bottom, Box, Conominal, Dia, Formula, Nominal, Or, Top, Var,
    variables,
)

__all__ = [
    "GraphModel", "KripkeModel", "Model", "UnboundSymbol", "ValidityCapExceeded", "Validity",
    "interpret", "sequent_true", "sequent_true_pointwise", "frame_valid",
    "GraphEvaluator", "KripkeEvaluator",
]

DEFAULT_VALUATION_CAP = 1_000_000


class UnboundSymbol(KeyError):
    """A variable, nominal or conominal without a value in the model."""


class ValidityCapExceeded(RuntimeError):
    """Refusal to enumerate more valuations than the configured cap."""


# ---------------------------------------------------------------------------
# Vectorised evaluators
# ---------------------------------------------------------------------------

class GraphEvaluator:
    """Row-wise interpretation on a graph-based frame.

    Environment values are pairs ``(extents, intents)`` of shape ``(k, |Z|)``.
    """

    def __init__(self, frame: GraphFrame):
        self.frame = frame
        ne = ~frame.e.matrix
        self._to_int = lambda b: polar(ne.T, b)  # B ↦ E^[1][B]
        self._to_ext = lambda y: polar(ne, y)  # Y ↦ E^[0][Y]
        self._nbox = ~frame.r_box.matrix
        self._ndia = ~frame.r_dia.matrix

    def ext_to_int(self, b: np.ndarray) -> np.ndarray:
        return self._to_int(b)

    def int_to_ext(self, y: np.ndarray) -> np.ndarray:
        return self._to_ext(y)

    def nominal(self, a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``j_a = (a^[10], a^[1])`` for each row of ``a`` (a family of singletons)."""
        y = self._to_int(a)
        return self._to_ext(y), y

    def conominal(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``m_x = (x^[0], x^[01])``."""
        b = self._to_ext(x)
        return b, self._to_int(b)

    def eval(self, f: Formula, env: Mapping[str, tuple[np.ndarray, np.ndarray]], k: int = 1):
        n = len(self.frame.domain)
        if isinstance(f, (Var, Nominal, Conominal)):
            try:
                return env[f.name]
            except KeyError:
                raise UnboundSymbol(f.name) from None
        if isinstance(f, Top):
            return np.ones((k, n), dtype=bool), np.zeros((k, n), dtype=bool)
        if isinstance(f, Bottom):
            return np.zeros((k, n), dtype=bool), np.ones((k, n), dtype=bool)
        if isinstance(f, And):
            (e1, _), (e2, _) = self.eval(f.left, env, k), self.eval(f.right, env, k)
            ext = e1 & e2
            return ext, self._to_int(ext)
        if isinstance(f, Or):
            (_, i1), (_, i2) = self.eval(f.left, env, k), self.eval(f.right, env, k)
            it = i1 & i2
            return self._to_ext(it), it
        ext, it = self.eval(f.arg, env, k)  # type: ignore[union-attr]
        if isinstance(f, Box):
            b = polar(self._nbox, it)
            return b, self._to_int(b)
        if isinstance(f, BlackBox):
            b = polar(self._ndia.T, it)
            return b, self._to_int(b)
        if isinstance(f, Dia):
            y = polar(self._ndia, ext)
            return self._to_ext(y), y
        if isinstance(f, BlackDia):
            y = polar(self._nbox.T, ext)
            return self._to_ext(y), y
        raise TypeError(f"not a formula: {f!r}")


class KripkeEvaluator:
    """Row-wise interpretation on a Kripke frame; environment values are ``(k, |W|)`` sets."""

    def __init__(self, frame: KripkeFrame):
        self.frame = frame
        self._nbox = ~frame.r_box.matrix
        self._ndia = ~frame.r_dia.matrix

    def eval(self, f: Formula, env: Mapping[str, np.ndarray], k: int = 1) -> np.ndarray:
        n = len(self.frame.domain)
        if isinstance(f, (Var, Nominal, Conominal)):
            try:
                return env[f.name]
            except KeyError:
                raise UnboundSymbol(f.name) from None
        if isinstance(f, Top):
            return np.ones((k, n), dtype=bool)
        if isinstance(f, Bottom):
            return np.zeros((k, n), dtype=bool)
        if isinstance(f, And):
            return self.eval(f.left, env, k) & self.eval(f.right, env, k)
        if isinstance(f, Or):
            return self.eval(f.left, env, k) | self.eval(f.right, env, k)
        w = self.eval(f.arg, env, k)  # type: ignore[union-attr]
        if isinstance(f, Box):  # [R]W = R^[0][W^c]
            return polar(self._nbox, ~w)
        if isinstance(f, BlackBox):
            return polar(self._ndia.T, ~w)
        if isinstance(f, Dia):  # <R>W = (R^[0][W])^c
            return ~polar(self._ndia, w)
        if isinstance(f, BlackDia):
            return ~polar(self._nbox.T, w)
        raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphModel:
    """A graph-based model; nominals and conominals are assigned domain elements."""

    frame: GraphFrame
    valuation: Mapping[str, Concept] = field(default_factory=dict)
    nominals: Mapping[str, str] = field(default_factory=dict)
    conominals: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)
    nominals: Mapping[str, str] = field(default_factory=dict)
    conominals: Mapping[str, str] = field(default_factory=dict)


Model = Union[GraphModel, KripkeModel]


def _graph_env(m: GraphModel, ev: GraphEvaluator) -> dict:
    dom = m.frame.domain
    env = {}
    for name, c in m.valuation.items():
        ext = dom.subset(c.extent)[None, :]
        it = dom.subset(c.intent)[None, :]
        if not np.array_equal(ev.ext_to_int(ext), it) or not np.array_equal(ev.int_to_ext(it), ext):
            raise ValueError(f"valuation of {name!r} is not a formal concept of the frame")
        env[name] = (ext, it)
    for name, a in m.nominals.items():
        env[name] = ev.nominal(dom.subset([a])[None, :])
    for name, x in m.conominals.items():
        env[name] = ev.conominal(dom.subset([x])[None, :])
    return env


def _kripke_env(m: KripkeModel) -> dict:
    dom = m.frame.domain
    env = {name: dom.subset(s)[None, :] for name, s in m.valuation.items()}
    for name, a in m.nominals.items():
        env[name] = dom.subset([a])[None, :]
    for name, x in m.conominals.items():
        env[name] = ~dom.subset([x])[None, :]
    return env


def interpret(m: Model, phi: Formula) -> Union[Concept, frozenset[str]]:
    """Meaning of ``phi``: a concept on graph models, a set of states on Kripke models."""
    dom = m.frame.domain
    if isinstance(m, GraphModel):
        ev = GraphEvaluator(m.frame)
        ext, it = ev.eval(phi, _graph_env(m, ev))
        return Concept(frozenset(dom.names(ext[0])), frozenset(dom.names(it[0])))
    ev_k = KripkeEvaluator(m.frame)
    return frozenset(dom.names(ev_k.eval(phi, _kripke_env(m))[0]))


def sequent_true(m: Model, phi: Formula, psi: Formula) -> bool:
    """``φ ⊢ ψ`` holds in ``m``: extent (resp. extension) inclusion."""
    a, b = interpret(m, phi), interpret(m, psi)
    if isinstance(a, Concept):
        return a.extent <= b.extent  # type: ignore[union-attr]
    return a <= b  # type: ignore[operator]


def sequent_true_pointwise(m: GraphModel, phi: Formula, psi: Formula) -> bool:
    """Direct reading of sequent truth: every ``z ⊩ φ`` and ``z' ≻ ψ`` satisfy ``z E^c z'``."""
    a, b = interpret(m, phi), interpret(m, psi)
    assert isinstance(a, Concept) and isinstance(b, Concept)
    return all((z, z2) not in m.frame.e for z in a.extent for z2 in b.intent)


# ---------------------------------------------------------------------------
# Frame validity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Validity:
    """Outcome of a brute-force validity check; ``countervaluation`` is set iff invalid."""

    valid: bool
    countervaluation: Optional[Mapping[str, object]] = None
    valuations_checked: int = 0

    def __bool__(self) -> bool:
        return self.valid


def _product_rows(counts: list[int]) -> np.ndarray:
    """All index tuples over ``range(c)`` for each count, as an array of shape (∏c, len(counts))."""
    if not counts:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*[np.arange(c) for c in counts], indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def frame_valid(
    f: Union[GraphFrame, KripkeFrame],
    phi: Formula,
    psi: Formula,
    cap: int = DEFAULT_VALUATION_CAP,
    lattice: Optional[ConceptLattice] = None,
) -> Validity:
    """Check ``φ ⊢ ψ`` under every admissible valuation of ``f``.

    Graph frames range each variable over all concepts of the frame's lattice;
    Kripke frames over all subsets.  Valuations are enumerated in lattice (or
    bitmask) order and the first failing one is returned.

    Raises
    ------
    ValidityCapExceeded
        If the number of valuations exceeds ``cap``.
    """
    if not isinstance(f, (GraphFrame, KripkeFrame)):
        raise TypeError(f"frame_valid needs a graph or Kripke frame, not {type(f).__name__}")
    names = sorted(variables(phi) | variables(psi))
    dom = f.domain
    if isinstance(f, GraphFrame):
        lat = lattice if lattice is not None else concept_lattice(f)
        exts, ints = lat.extents, lat.intents
    else:
        exts = FiniteDomain.all_subsets(dom)
        ints = None
    total = len(exts) ** len(names)
    if total > cap:
        raise ValidityCapExceeded(f"{total} valuations exceed the cap of {cap}")
    idx = _product_rows([len(exts)] * len(names))
    k = len(idx)
    if isinstance(f, GraphFrame):
        ev = GraphEvaluator(f)
        env = {n: (exts[idx[:, c]], ints[idx[:, c]]) for c, n in enumerate(names)}  # type: ignore[index]
        lhs, rhs = ev.eval(phi, env, k)[0], ev.eval(psi, env, k)[0]
    else:
        evk = KripkeEvaluator(f)
        env = {n: exts[idx[:, c]] for c, n in enumerate(names)}
        lhs, rhs = evk.eval(phi, env, k), evk.eval(psi, env, k)
    ok = np.all(~lhs | rhs, axis=1)
    if ok.all():
        return Validity(True, None, k)
    row = int(np.argmin(ok))
    cv: dict[str, object] = {}
    for c, n in enumerate(names):
        e = exts[idx[row, c]]
        if isinstance(f, GraphFrame):
            cv[n] = Concept(frozenset(dom.names(e)), frozenset(dom.names(ints[idx[row, c]])))  # type: ignore[index]
        else:
            cv[n] = frozenset(dom.names(e))
    return Validity(False, cv, k)
