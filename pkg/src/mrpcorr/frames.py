"""Kripke, graph-based and polarity-based frames, their concept lattices, and generators.

A graph-based frame ``(Z, E, R_◇, R_□)`` carries a reflexive ``E`` and two
relations satisfying the E-compatibility conditions (``R_□`` in the box
orientation, ``R_◇`` in the diamond orientation).  Its formal context is the
polarity ``(Z_A, Z_X, E^c)``; concepts are pairs ``(B, Y)`` with
``Y = E^[1][B]`` and ``B = E^[0][Y]``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Literal, Optional, Union

import numpy as np

from .relcalc import (
    DomainError,
    FiniteDomain,
    FiniteRelation,
    bond_closure,
    is_e_compatible,
    polar,
)

__all__ = [
    "KripkeFrame", "GraphFrame", "PolarityFrame", "Frame", "Concept", "ConceptLattice",
    "ValidationReport", "FrameError", "validate_frame", "shift", "unshift", "lift",
    "concept_lattice", "generate_frames", "generate_kripke_frames", "random_reflexive",
    "random_compatible", "frame_to_json", "frame_from_json", "dumps_frame", "loads_frame",
    "pawlak_frame",
]


class FrameError(ValueError):
    """Raised for malformed frames or frames outside an operation's domain."""


@dataclass(frozen=True)
class KripkeFrame:
    """A bimodal Kripke frame; a generalized approximation space when ``r_box == r_dia``."""

    domain: FiniteDomain
    r_box: FiniteRelation
    r_dia: FiniteRelation

    @classmethod
    def unimodal(cls, r: FiniteRelation) -> "KripkeFrame":
        return cls(r.source, r, r)

    @property
    def r_bdia(self) -> FiniteRelation:
        return self.r_box.converse()

    @property
    def r_bbox(self) -> FiniteRelation:
        return self.r_dia.converse()

    @property
    def delta(self) -> FiniteRelation:
        return FiniteRelation.identity(self.domain)

    @property
    def is_unimodal(self) -> bool:
        return self.r_box == self.r_dia


@dataclass(frozen=True)
class GraphFrame:
    """A graph-based frame ``(Z, E, R_◇, R_□)``."""

    domain: FiniteDomain
    e: FiniteRelation
    r_box: FiniteRelation
    r_dia: FiniteRelation

    @property
    def d(self) -> FiniteRelation:
        return self.e.converse()

    @property
    def r_bdia(self) -> FiniteRelation:
        return self.r_box.converse()

    @property
    def r_bbox(self) -> FiniteRelation:
        return self.r_dia.converse()

    @property
    def incidence(self) -> np.ndarray:
        """``I = E^c`` as a matrix ``[a, x]``."""
        return ~self.e.matrix


@dataclass(frozen=True)
class PolarityFrame:
    """A polarity-based frame ``(A, X, I, R_□ ⊆ A×X, R_◇ ⊆ X×A)``."""

    a: FiniteDomain
    x: FiniteDomain
    i: FiniteRelation
    r_box: FiniteRelation
    r_dia: FiniteRelation

    @property
    def j(self) -> FiniteRelation:
        return self.i.converse()

    @property
    def r_bdia(self) -> FiniteRelation:
        return self.r_box.converse()

    @property
    def r_bbox(self) -> FiniteRelation:
        return self.r_dia.converse()

    @property
    def incidence(self) -> np.ndarray:
        return self.i.matrix


Frame = Union[KripkeFrame, GraphFrame, PolarityFrame]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def _polarity_compatible(p: PolarityFrame) -> list[str]:
    """Stability of the singleton polars of ``R_□`` and ``R_◇`` under the Galois closures of ``I``."""
    im = p.i.matrix
    close_a = lambda fam: polar(im, polar(im.T, fam))  # B ↦ B''  (B ⊆ A)
    close_x = lambda fam: polar(im.T, polar(im, fam))  # Y ↦ Y''  (Y ⊆ X)
    probs = []
    checks = (
        ("R_□^(0)[x]", p.a, p.x, p.r_box.matrix.T, close_a),
        ("R_□^(1)[a]", p.x, p.a, p.r_box.matrix, close_x),
        ("R_◇^(0)[a]", p.x, p.a, p.r_dia.matrix.T, close_x),
        ("R_◇^(1)[x]", p.a, p.x, p.r_dia.matrix, close_a),
    )
    for name, elems, idx_dom, fam, close in checks:
        bad = np.any(close(fam) & ~fam, axis=1)
        if bad.any():
            k = int(np.argmax(bad))
            probs.append(f"{name} is not Galois-stable at {idx_dom.labels[k]}")
    return probs


def validate_frame(f: Frame) -> ValidationReport:
    """Check the structural invariants of a frame, with element-level witnesses."""
    probs: list[str] = []
    if isinstance(f, KripkeFrame):
        for name, r in (("R_box", f.r_box), ("R_dia", f.r_dia)):
            if r.source != f.domain or r.target != f.domain:
                probs.append(f"{name} is not an endorelation on the domain")
    elif isinstance(f, GraphFrame):
        for name, r in (("E", f.e), ("R_box", f.r_box), ("R_dia", f.r_dia)):
            if r.source != f.domain or r.target != f.domain:
                probs.append(f"{name} is not an endorelation on the domain")
        if probs:
            return ValidationReport(False, tuple(probs))
        if not f.e.is_reflexive():
            k = int(np.argmin(np.diag(f.e.matrix)))
            return ValidationReport(False, (f"E is not reflexive at {f.domain.labels[k]}",))
        for name, r, orient in (("R_box", f.r_box, "box"), ("R_dia", f.r_dia, "dia")):
            rep = is_e_compatible(r, f.e, orient)  # type: ignore[arg-type]
            if not rep:
                probs.append(f"{name} is not E-compatible: {rep.describe()}")
    elif isinstance(f, PolarityFrame):
        shapes = (("I", f.i, f.a, f.x), ("R_box", f.r_box, f.a, f.x), ("R_dia", f.r_dia, f.x, f.a))
        for name, r, s, t in shapes:
            if r.source != s or r.target != t:
                probs.append(f"{name} has the wrong sort")
        if not probs:
            probs.extend(_polarity_compatible(f))
    else:
        raise TypeError(f"not a frame: {f!r}")
    return ValidationReport(not probs, tuple(probs))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def shift(x: KripkeFrame) -> GraphFrame:
    """The graph-based frame ``(W, Δ, R_◇, R_□)`` of a Kripke frame."""
    return GraphFrame(x.domain, FiniteRelation.identity(x.domain), x.r_box, x.r_dia)


def unshift(f: GraphFrame) -> KripkeFrame:
    """Inverse of :func:`shift` on graph frames with ``E = Δ`` and ``R_□ = R_◇``."""
    if f.e != FiniteRelation.identity(f.domain):
        raise FrameError("unshift needs E to be the identity relation")
    if f.r_box != f.r_dia:
        raise FrameError("unshift needs R_box = R_dia")
    return KripkeFrame.unimodal(f.r_box)


def _copy(dom: FiniteDomain, tag: str) -> FiniteDomain:
    return FiniteDomain(dom.labels, tag)


def lift(f: GraphFrame) -> PolarityFrame:
    """The polarity-based frame ``(Z_A, Z_X, I_{E^c}, I_{R_□^c}, J_{R_◇^c})``.

    Both sorts keep the element labels of ``Z``.
    """
    za, zx = _copy(f.domain, "A"), _copy(f.domain, "X")
    return PolarityFrame(
        za,
        zx,
        FiniteRelation(za, zx, ~f.e.matrix),
        FiniteRelation(za, zx, ~f.r_box.matrix),
        FiniteRelation(zx, za, ~f.r_dia.matrix),
    )


def pawlak_frame(e: FiniteRelation) -> GraphFrame:
    """The canonical frame ``(Z, E, D, E)`` on a reflexive graph."""
    return GraphFrame(e.source, e, e, e.converse())


# ---------------------------------------------------------------------------
# Concept lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Concept:
    """A formal concept, as frozensets of element labels."""

    extent: frozenset[str]
    intent: frozenset[str]


def _label_set(labels: tuple[str, ...], vec: np.ndarray, sep: str) -> str:
    names = [lab for lab, keep in zip(labels, vec) if keep]
    return sep.join(names) if names else "∅"


@dataclass(frozen=True, eq=False)
class ConceptLattice:
    """All concepts of a polarity, ordered by extent inclusion.

    Parameters
    ----------
    a, x : FiniteDomain
        Object and feature domains.
    incidence : numpy.ndarray
        The ``|A| × |X|`` incidence matrix ``I``.
    extents, intents : numpy.ndarray
        One concept per row, sorted by extent size then bitmask, so row 0 is the
        bottom and the last row the top.
    """

    a: FiniteDomain
    x: FiniteDomain
    incidence: np.ndarray
    extents: np.ndarray
    intents: np.ndarray
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        for k, row in enumerate(self.extents):
            self._index[row.tobytes()] = k

    def __len__(self) -> int:
        return len(self.extents)

    # Galois maps -------------------------------------------------------
    def intent_of(self, ext: np.ndarray) -> np.ndarray:
        """``B ↦ I^(1)[B]`` (row-wise for families)."""
        return polar(self.incidence.T, ext)

    def extent_of(self, intent: np.ndarray) -> np.ndarray:
        """``Y ↦ I^(0)[Y]``."""
        return polar(self.incidence, intent)

    def index_of_extent(self, ext: np.ndarray) -> int:
        try:
            return self._index[np.asarray(ext, dtype=bool).tobytes()]
        except KeyError:
            raise FrameError("not the extent of a concept") from None

    # lattice structure -------------------------------------------------
    @property
    def top(self) -> int:
        return len(self) - 1

    @property
    def bottom(self) -> int:
        return 0

    def leq(self, i: int, j: int) -> bool:
        return bool(np.all(~self.extents[i] | self.extents[j]))

    def order_matrix(self) -> np.ndarray:
        ex = self.extents.astype(np.int32)
        return (ex @ (~self.extents).T.astype(np.int32)) == 0

    def meet(self, i: int, j: int) -> int:
        return self.index_of_extent(self.extents[i] & self.extents[j])

    def join(self, i: int, j: int) -> int:
        return self.index_of_extent(self.extent_of(self.intents[i] & self.intents[j]))

    def meet_table(self) -> np.ndarray:
        n = len(self)
        return np.array([[self.meet(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)

    def join_table(self) -> np.ndarray:
        n = len(self)
        return np.array([[self.join(i, j) for j in range(n)] for i in range(n)], dtype=np.int64)

    def covers(self) -> list[tuple[int, int]]:
        le = self.order_matrix()
        lt = le & ~np.eye(len(self), dtype=bool)
        out = []
        for i, j in zip(*np.nonzero(lt)):
            between = lt[i] & lt[:, j]
            if not between.any():
                out.append((int(i), int(j)))
        return out

    def concepts(self) -> list[Concept]:
        return [
            Concept(frozenset(self.a.names(e)), frozenset(self.x.names(y)))
            for e, y in zip(self.extents, self.intents)
        ]

    def object_concepts(self) -> list[int]:
        """Indices of ``(a'', a')`` for each object ``a``."""
        eye = np.eye(len(self.a), dtype=bool)
        return [self.index_of_extent(self.extent_of(self.intent_of(eye[k]))) for k in range(len(self.a))]

    def attribute_concepts(self) -> list[int]:
        """Indices of ``(x', x'')`` for each feature ``x``."""
        eye = np.eye(len(self.x), dtype=bool)
        return [self.index_of_extent(self.extent_of(eye[k])) for k in range(len(self.x))]

    def label(self, k: int) -> str:
        sep = "" if all(len(s) == 1 for s in self.a.labels + self.x.labels) else ","
        return f"({_label_set(self.a.labels, self.extents[k], sep)}|{_label_set(self.x.labels, self.intents[k], sep)})"

    def to_dot(self, name: str = "lattice") -> str:
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for k in range(len(self)):
            lines.append(f'  c{k} [label="{self.label(k)}"];')
        for i, j in self.covers():
            lines.append(f"  c{i} -> c{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _lattice_from_incidence(a: FiniteDomain, x: FiniteDomain, inc: np.ndarray) -> ConceptLattice:
    inc = np.asarray(inc, dtype=bool)
    gens = polar(inc, np.eye(len(x), dtype=bool))  # attribute extents I^(0)[{x}]
    seen = {np.ones(len(a), dtype=bool).tobytes()}
    frontier = [np.ones(len(a), dtype=bool)]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                m = e & g
                key = m.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(m)
        frontier = nxt
    exts = np.array([np.frombuffer(k, dtype=bool) for k in seen], dtype=bool).reshape(-1, len(a))
    weights = 1 << np.arange(len(a), dtype=np.int64)
    order = np.lexsort((exts.astype(np.int64) @ weights, exts.sum(axis=1)))
    exts = exts[order]
    ints = polar(inc.T, exts)
    return ConceptLattice(a, x, inc, exts, ints)


def concept_lattice(g: Union[GraphFrame, PolarityFrame, tuple]) -> ConceptLattice:
    """Concept lattice of a graph-based frame (context ``(Z, Z, E^c)``) or a polarity."""
    if isinstance(g, GraphFrame):
        return _lattice_from_incidence(g.domain, g.domain, ~g.e.matrix)
    if isinstance(g, PolarityFrame):
        return _lattice_from_incidence(g.a, g.x, g.i.matrix)
    if isinstance(g, FiniteRelation):  # a bare reflexive graph
        return _lattice_from_incidence(g.source, g.target, ~g.matrix)
    raise TypeError(f"cannot build a concept lattice from {type(g).__name__}")


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

MAX_GENERATED_SIZE = 8


def random_reflexive(dom: FiniteDomain, rng: np.random.Generator, density: Optional[float] = None) -> FiniteRelation:
    n = len(dom)
    p = rng.uniform(0.1, 0.7) if density is None else density
    m = rng.random((n, n)) < p
    np.fill_diagonal(m, True)
    return FiniteRelation(dom, dom, m)


def random_compatible(
    e: FiniteRelation, orientation: Literal["box", "dia"], rng: np.random.Generator
) -> FiniteRelation:
    """A random E-compatible relation, drawn by one of three strategies.

    Closing a random complement pattern (most draws), keeping a canonical
    relation (``E`` for boxes, ``E⁻¹`` for diamonds), or rejection-sampling a
    uniformly random relation.
    """
    dom = e.source
    n = len(dom)
    u = rng.random()
    if u < 0.15:
        return e if orientation == "box" else e.converse()
    if u < 0.35:
        for _ in range(50):
            r = FiniteRelation(dom, dom, rng.random((n, n)) < rng.uniform(0.2, 0.9))
            if is_e_compatible(r, e, orientation):
                return r
    seed = rng.random((n, n)) < rng.uniform(0.0, 0.5)
    return FiniteRelation(dom, dom, ~bond_closure(seed, e.matrix, orientation))


def _all_relations(dom: FiniteDomain, reflexive: bool = False) -> Iterator[FiniteRelation]:
    n = len(dom)
    cells = [(i, j) for i in range(n) for j in range(n) if not (reflexive and i == j)]
    for bits in itertools.product((False, True), repeat=len(cells)):
        m = np.eye(n, dtype=bool) if reflexive else np.zeros((n, n), dtype=bool)
        for (i, j), b in zip(cells, bits):
            m[i, j] = b
        yield FiniteRelation(dom, dom, m)


def generate_frames(
    size: int,
    mode: Literal["exhaustive", "random"] = "random",
    count: int = 200,
    seed: int = 0,
    labels: Optional[tuple[str, ...]] = None,
) -> Iterator[GraphFrame]:
    """Stream graph-based frames of a given size.

    ``exhaustive`` enumerates every valid frame when ``size <= 2``; for larger
    sizes it walks all reflexive ``E`` and draws ``count`` relation pairs per
    graph.  ``random`` draws ``count`` frames with random ``E``; the canonical
    frame ``(Z, E, D, E)`` is emitted for every graph drawn.
    """
    if size < 1 or size > MAX_GENERATED_SIZE:
        raise FrameError(f"frame size must be between 1 and {MAX_GENERATED_SIZE}")
    dom = FiniteDomain(labels) if labels else FiniteDomain.range(size)
    rng = np.random.default_rng(seed)
    if mode == "exhaustive":
        for e in _all_relations(dom, reflexive=True):
            if size <= 2:
                boxes = [r for r in _all_relations(dom) if is_e_compatible(r, e, "box")]
                dias = [r for r in _all_relations(dom) if is_e_compatible(r, e, "dia")]
                for rb in boxes:
                    for rd in dias:
                        yield GraphFrame(dom, e, rb, rd)
            else:
                yield pawlak_frame(e)
                for _ in range(count):
                    yield GraphFrame(dom, e, random_compatible(e, "box", rng), random_compatible(e, "dia", rng))
        return
    if mode != "random":
        raise ValueError(f"unknown mode {mode!r}")
    for k in range(count):
        e = random_reflexive(dom, rng)
        if k % 10 == 0:
            yield pawlak_frame(e)
            continue
        yield GraphFrame(dom, e, random_compatible(e, "box", rng), random_compatible(e, "dia", rng))


def _iso_representatives(n: int, unimodal: bool) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    cells = n * n
    k = cells if unimodal else 2 * cells
    if k > 22:
        raise FrameError("isomorphism-reduced enumeration is limited to 22 relation bits")
    codes = np.arange(1 << k, dtype=np.int64)
    bits = ((codes[:, None] >> np.arange(k)) & 1).astype(bool)
    mats = bits.reshape(len(codes), 1 if unimodal else 2, n, n)
    weights = np.int64(1) << np.arange(k, dtype=np.int64)
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        pm = mats[:, :, perm][:, :, :, perm]
        best = np.minimum(best, pm.reshape(len(codes), k) @ weights)
    for c in np.flatnonzero(best == codes):
        m = mats[c]
        yield (m[0].copy(), m[0].copy()) if unimodal else (m[0].copy(), m[1].copy())


def generate_kripke_frames(
    size: int,
    mode: Literal["exhaustive", "random"] = "random",
    count: int = 200,
    seed: int = 0,
    unimodal: bool = False,
    up_to_iso: bool = False,
) -> Iterator[KripkeFrame]:
    """Stream Kripke frames; exhaustive mode enumerates all (uni- or bimodal) frames of the size.

    With ``up_to_iso`` the exhaustive stream keeps one representative per
    isomorphism class (the permutation image with the smallest bit code).
    Every notion checked here is invariant under relabelling points, so the
    reduced stream is still exhaustive up to isomorphism.
    """
    if size < 1 or size > MAX_GENERATED_SIZE:
        raise FrameError(f"frame size must be between 1 and {MAX_GENERATED_SIZE}")
    dom = FiniteDomain.range(size)
    if mode == "exhaustive" and up_to_iso:
        for rb, rd in _iso_representatives(size, unimodal):
            yield KripkeFrame(dom, FiniteRelation(dom, dom, rb), FiniteRelation(dom, dom, rd))
        return
    if mode == "exhaustive":
        rels = list(_all_relations(dom))
        if unimodal:
            for r in rels:
                yield KripkeFrame.unimodal(r)
        else:
            for rb in rels:
                for rd in rels:
                    yield KripkeFrame(dom, rb, rd)
        return
    rng = np.random.default_rng(seed)
    for _ in range(count):
        p = rng.uniform(0.1, 0.8)
        rb = FiniteRelation(dom, dom, rng.random((size, size)) < p)
        if unimodal or rng.random() < 0.3:
            yield KripkeFrame.unimodal(rb)
        else:
            rd = FiniteRelation(dom, dom, rng.random((size, size)) < rng.uniform(0.1, 0.8))
            yield KripkeFrame(dom, rb, rd)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def _pairs(r: FiniteRelation) -> list[list[str]]:
    return [list(p) for p in r.pairs()]


def frame_to_json(f: Frame) -> dict:
    if isinstance(f, KripkeFrame):
        return {"type": "kripke", "domain": list(f.domain.labels), "R_box": _pairs(f.r_box), "R_dia": _pairs(f.r_dia)}
    if isinstance(f, GraphFrame):
        return {
            "type": "graph",
            "domain": list(f.domain.labels),
            "E": _pairs(f.e),
            "R_box": _pairs(f.r_box),
            "R_dia": _pairs(f.r_dia),
        }
    if isinstance(f, PolarityFrame):
        return {
            "type": "polarity",
            "A": list(f.a.labels),
            "X": list(f.x.labels),
            "I": _pairs(f.i),
            "R_box": _pairs(f.r_box),
            "R_dia": _pairs(f.r_dia),
        }
    raise TypeError(f"not a frame: {f!r}")


def frame_from_json(doc: dict) -> Frame:
    """Build a frame from its JSON document; missing ``R_dia`` defaults to ``R_box`` (Kripke) or ``D`` (graph)."""
    try:
        kind = doc["type"]
        if kind == "kripke":
            dom = FiniteDomain.of(doc["domain"])
            rb = FiniteRelation.from_pairs(dom, doc["R_box"])
            rd = FiniteRelation.from_pairs(dom, doc["R_dia"]) if "R_dia" in doc else rb
            return KripkeFrame(dom, rb, rd)
        if kind == "graph":
            dom = FiniteDomain.of(doc["domain"])
            e = FiniteRelation.from_pairs(dom, doc["E"])
            rb = FiniteRelation.from_pairs(dom, doc["R_box"]) if "R_box" in doc else e
            rd = FiniteRelation.from_pairs(dom, doc["R_dia"]) if "R_dia" in doc else e.converse()
            return GraphFrame(dom, e, rb, rd)
        if kind == "polarity":
            a, x = FiniteDomain.of(doc["A"], "A"), FiniteDomain.of(doc["X"], "X")
            i = FiniteRelation.from_pairs(a, doc["I"], x)
            rb = FiniteRelation.from_pairs(a, doc["R_box"], x)
            rd = FiniteRelation.from_pairs(x, doc["R_dia"], a)
            return PolarityFrame(a, x, i, rb, rd)
    except KeyError as exc:
        raise FrameError(f"frame document is missing field {exc}") from None
    except DomainError as exc:
        raise FrameError(str(exc)) from None
    raise FrameError(f"unknown frame type {doc.get('type')!r}")


def dumps_frame(f: Frame, **extra: object) -> str:
    doc = frame_to_json(f)
    doc.update(extra)
    return json.dumps(doc, ensure_ascii=False, indent=2)


def loads_frame(text: str) -> Frame:
    return frame_from_json(json.loads(text))
