"""Approximation spaces: lower/upper approximations, class flags, Pawlak checks.

Kripke-side flags (serial, reflexive, symmetric, transitive, Euclidean) and
graph-side flags (serial, E-reflexive, E-symmetric, E-transitive, Pawlak) are
each decided by relational inclusions evaluated with :func:`ineq_holds`, so a
failing flag always comes with a witness pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

import numpy as np

from .correspond import ineq_holds, parse_rel_inequality
from .frames import GraphFrame, KripkeFrame, concept_lattice
from .relcalc import box_op, dia_op
from .semantics import GraphEvaluator
from .syntax import parse_formula

__all__ = [
    "approximations", "classify_space", "SpaceClassReport", "pawlak_check", "PawlakItem",
    "NotPawlak", "KRIPKE_CONDITIONS", "GRAPH_CONDITIONS",
]

# flag -> inclusions (all must hold)
KRIPKE_CONDITIONS: dict[str, tuple[str, ...]] = {
    "serial": ("Delta <= Rbox o Rbbox",),
    "reflexive": ("Delta <= Rbox",),
    "symmetric": ("Rbbox <= Rbox",),
    "transitive": ("Rbox o Rbox <= Rbox",),
    "euclidean": ("Rbbox o Rbox <= Rbox",),
}

GRAPH_CONDITIONS: dict[str, tuple[str, ...]] = {
    "serial": ("E <= Rbox ;b Rbbox", "D <= Rdia ;d Rbdia"),
    "e_reflexive": ("E <= Rbox", "D <= Rdia"),
    "e_symmetric": ("Rbbox <= Rbox", "Rbdia <= Rdia"),
    "e_transitive_box": ("Rbox ;b Rbox <= Rbox",),
    "e_transitive_dia": ("Rdia ;d Rdia <= Rdia",),
}


def approximations(x: KripkeFrame, z) -> tuple[frozenset[str], frozenset[str]]:
    """Lower ``[R]Z = {s | R[s] ⊆ Z}`` and upper ``⟨R⟩Z = R⁻¹[Z]`` approximations."""
    if not x.is_unimodal:
        raise ValueError("approximations need a generalized approximation space (R_box = R_dia)")
    dom = x.domain
    return frozenset(dom.names(box_op(x.r_box, z))), frozenset(dom.names(dia_op(x.r_box, z)))


@dataclass(frozen=True)
class SpaceClassReport:
    """Flags with a witness pair for every failed inclusion."""

    kind: str
    flags: Mapping[str, bool]
    witnesses: Mapping[str, Optional[tuple[str, str, str]]] = field(default_factory=dict)

    def __getitem__(self, key: str) -> bool:
        return self.flags[key]

    def to_json(self) -> str:
        doc = {
            "kind": self.kind,
            "flags": dict(self.flags),
            "witnesses": {k: (None if w is None else {"inclusion": w[0], "pair": [w[1], w[2]]}) for k, w in self.witnesses.items()},
        }
        return json.dumps(doc, ensure_ascii=False, indent=2)


def _check_all(f, texts: tuple[str, ...], lang: str) -> tuple[bool, Optional[tuple[str, str, str]]]:
    for text in texts:
        ok, pair = ineq_holds(parse_rel_inequality(text, lang), f)  # type: ignore[arg-type]
        if not ok:
            assert pair is not None
            return False, (text, pair[0], pair[1])
    return True, None


def classify_space(f: Union[KripkeFrame, GraphFrame]) -> SpaceClassReport:
    """Class flags of a Kripke or graph-based frame.

    Kripke flags read the □-side relations (with ``R_■ = R_◇⁻¹``), which are
    the classical conditions on ``R`` when ``R_□ = R_◇ = R``.  On graph
    frames ``e_transitive`` is the conjunction of the separately reported
    ``e_transitive_box`` and ``e_transitive_dia``, and ``pawlak`` requires
    E-reflexivity, E-symmetry and E-transitivity.
    """
    flags: dict[str, bool] = {}
    wit: dict[str, Optional[tuple[str, str, str]]] = {}
    if isinstance(f, KripkeFrame):
        for name, texts in KRIPKE_CONDITIONS.items():
            flags[name], wit[name] = _check_all(f, texts, "KRel")
        return SpaceClassReport("kripke", flags, wit)
    if not isinstance(f, GraphFrame):
        raise TypeError(f"cannot classify {type(f).__name__}")
    for name, texts in GRAPH_CONDITIONS.items():
        flags[name], wit[name] = _check_all(f, texts, "GRel")
    flags["e_transitive"] = flags["e_transitive_box"] and flags["e_transitive_dia"]
    wit["e_transitive"] = wit["e_transitive_box"] or wit["e_transitive_dia"]
    flags["pawlak"] = flags["e_reflexive"] and flags["e_symmetric"] and flags["e_transitive"]
    wit["pawlak"] = wit["e_reflexive"] or wit["e_symmetric"] or wit["e_transitive"]
    return SpaceClassReport("graph", flags, wit)


# ---------------------------------------------------------------------------
# Algebraic checks on the complex algebra
# ---------------------------------------------------------------------------

class NotPawlak(ValueError):
    def __init__(self, report: SpaceClassReport):
        self.report = report
        super().__init__("frame is not a Pawlak space: " + ", ".join(k for k, v in report.flags.items() if not v))


@dataclass(frozen=True)
class PawlakItem:
    number: int
    statement: str
    ok: bool
    witness: Optional[tuple[str, ...]] = None


# (statement, kind, formulas): "eq" compares two formulas, "le" checks an order,
# "imp" checks hypothesis-order ⇒ conclusion-order.
_ITEMS = (
    ("dia (a or b) = dia a or dia b", "eq", ("dia (a or b)", "dia a or dia b")),
    ("box (a and b) = box a and box b", "eq", ("box (a and b)", "box a and box b")),
    ("a <= box b implies dia a <= b", "imp", ("a", "box b", "dia a", "b")),
    ("dia a <= b implies a <= box b", "imp", ("dia a", "b", "a", "box b")),
    ("box a <= a", "le", ("box a", "a")),
    ("a <= dia a", "le", ("a", "dia a")),
    ("a <= box dia a", "le", ("a", "box dia a")),
    ("dia box a <= a", "le", ("dia box a", "a")),
    ("dia dia a <= dia a", "le", ("dia dia a", "dia a")),
    ("box a <= box box a", "le", ("box a", "box box a")),
)


def pawlak_check(f: GraphFrame, force: bool = False) -> list[PawlakItem]:
    """Verify the ten algebraic properties over all (pairs of) concepts of ``f``.

    Refuses frames that are not Pawlak spaces unless ``force`` is set, in
    which case every item is still evaluated and reported.
    """
    report = classify_space(f)
    if not report["pawlak"] and not force:
        raise NotPawlak(report)
    lat = concept_lattice(f)
    n = len(lat)
    ia, ib = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    ia, ib = ia.ravel(), ib.ravel()
    env = {"a": (lat.extents[ia], lat.intents[ia]), "b": (lat.extents[ib], lat.intents[ib])}
    ev = GraphEvaluator(f)
    k = len(ia)

    def ext(text: str) -> np.ndarray:
        return ev.eval(parse_formula(text), env, k)[0]

    def le(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.all(~x | y, axis=1)

    items = []
    for num, (statement, kind, forms) in enumerate(_ITEMS, start=1):
        exts = [ext(t) for t in forms]
        if kind == "eq":
            ok_rows = np.all(exts[0] == exts[1], axis=1)
        elif kind == "le":
            ok_rows = le(exts[0], exts[1])
        else:
            ok_rows = ~le(exts[0], exts[1]) | le(exts[2], exts[3])
        if ok_rows.all():
            items.append(PawlakItem(num, statement, True))
        else:
            r = int(np.argmin(ok_rows))
            items.append(PawlakItem(num, statement, False, (lat.label(int(ia[r])), lat.label(int(ib[r])))))
    return items
