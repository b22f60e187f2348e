"""Verification drivers: instance checks of correspondence, shifting and lifting on frame populations.

Each driver returns a :class:`VerificationReport` whose disagreements carry
the frame (in the JSON frame format) and the countervaluation or counterpair
needed to replay the failure with ``frame validate`` / ``frame check``.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Literal, Optional, Sequence

import numpy as np

from .correspond import (
    LANGS, RelInequality, correspondent, eval_term, ineq_holds, normalize, parse_rel_inequality,
    translate_tau,
)
from .frames import (
    Concept, GraphFrame, KripkeFrame, dumps_frame, frame_to_json,
    generate_frames, generate_kripke_frames, lift, shift,
)
from .semantics import frame_valid
from .syntax import MrpClassification, NotSahlqvist, classify_mrp, parse_inequality

__all__ = [
    "VerificationReport", "verify_correspondence", "verify_shifting", "verify_lifting",
    "catalogue", "CatalogueDiff", "load_data", "graph_population", "kripke_population",
    "CATALOGUE_MRPS", "jsonable_valuation",
]


def load_data(name: str) -> dict:
    """Load a JSON fixture shipped in the package's ``data`` directory."""
    with resources.files("mrpcorr").joinpath("data", *name.split("/")).open("r", encoding="utf-8") as fh:
        return json.load(fh)


def _catalogue_mrps() -> tuple[str, ...]:
    return tuple(e["mrp"] for e in load_data("catalogue.json")["entries"])


CATALOGUE_MRPS = _catalogue_mrps()


@dataclass(frozen=True)
class VerificationReport:
    mrp: str
    semantics: str
    frames_tested: dict
    agreements: int
    disagreements: tuple[dict, ...] = ()
    seed: int = 0
    seconds: float = field(default=0.0, compare=False)
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self, include_timing: bool = False) -> str:
        doc = {
            "mrp": self.mrp,
            "semantics": self.semantics,
            "seed": self.seed,
            "frames_tested": self.frames_tested,
            "agreements": self.agreements,
            "disagreements": list(self.disagreements),
            "notes": list(self.notes),
            "pass": self.ok,
        }
        if include_timing:
            doc["seconds"] = round(self.seconds, 3)
        return json.dumps(doc, ensure_ascii=False, indent=2, sort_keys=True)

    def summary(self) -> str:
        total = sum(self.frames_tested.values())
        verdict = "PASS" if self.ok else "FAIL"
        return (
            f"{verdict} {self.semantics} {self.mrp}: {total} frames, "
            f"{self.agreements} agreements, {len(self.disagreements)} disagreements"
        )


def _frame_hash(f) -> str:
    return hashlib.sha256(dumps_frame(f).encode("utf-8")).hexdigest()[:16]


def _classify(mrp: str) -> tuple[MrpClassification, tuple]:
    s, t = parse_inequality(mrp)
    c = classify_mrp(s, t)
    if isinstance(c, NotSahlqvist):
        raise ValueError(f"{mrp!r} is not a Sahlqvist mrp")
    return c, (s, t)


# ---------------------------------------------------------------------------
# Populations
# ---------------------------------------------------------------------------

def graph_population(
    max_size: int = 4, samples: int = 200, seed: int = 0, exhaustive_upto: int = 2
) -> list[tuple[str, GraphFrame]]:
    """Exhaustive frames up to ``exhaustive_upto`` and ``samples`` random frames per larger size."""
    out: list[tuple[str, GraphFrame]] = []
    for n in range(1, max_size + 1):
        if n <= exhaustive_upto:
            out += [(f"n={n} exhaustive", f) for f in generate_frames(n, "exhaustive")]
        else:
            out += [(f"n={n} random", f) for f in generate_frames(n, "random", samples, seed=seed + n)]
    return out


def kripke_population(
    max_size: int = 3, samples: int = 200, seed: int = 0, labelled_upto: int = 2, iso_upto: int = 3
) -> list[tuple[str, KripkeFrame]]:
    """Bimodal Kripke frames up to ``max_size`` points.

    Sizes up to ``labelled_upto`` enumerate every labelled frame, sizes up to
    ``iso_upto`` one frame per isomorphism class, and larger sizes draw
    ``samples`` random frames.
    """
    out: list[tuple[str, KripkeFrame]] = []
    for n in range(1, max_size + 1):
        if n <= labelled_upto:
            out += [(f"n={n} exhaustive", f) for f in generate_kripke_frames(n, "exhaustive")]
        elif n <= iso_upto:
            out += [(f"n={n} exhaustive up to isomorphism", f)
                    for f in generate_kripke_frames(n, "exhaustive", up_to_iso=True)]
        else:
            out += [(f"n={n} random", f) for f in generate_kripke_frames(n, "random", samples, seed=seed + n)]
    return out


def _count(pop: Sequence[tuple[str, object]]) -> dict:
    counts: dict[str, int] = {}
    for stratum, _ in pop:
        counts[stratum] = counts.get(stratum, 0) + 1
    return dict(sorted(counts.items()))


def jsonable_valuation(cv) -> Optional[dict]:
    if cv is None:
        return None
    out = {}
    for k, v in cv.items():
        if isinstance(v, Concept):
            out[k] = sorted(v.extent)
        else:
            out[k] = sorted(v)
    return out


def _correspondence_worker(args) -> list[dict]:
    mrp, lang, frames = args
    c, (s, t) = _classify(mrp)
    ineqs = correspondent(c, lang)
    bad = []
    for f in frames:
        kind = "graph" if isinstance(f, GraphFrame) else "kripke"
        v = frame_valid(f, s, t)
        for ineq in ineqs:
            h, pair = ineq_holds(ineq, f)
            if h != v.valid:
                bad.append(
                    {
                        "frame_hash": _frame_hash(f),
                        "frame": frame_to_json(f),
                        "kind": kind,
                        "inequality": ineq.text(),
                        "label": ineq.label,
                        "frame_valid": v.valid,
                        "countervaluation": jsonable_valuation(v.countervaluation),
                        "counterpair": list(pair) if pair else None,
                    }
                )
    return bad


def _run(worker, mrp: str, lang: str, frames: list, jobs: int) -> list[dict]:
    if jobs <= 1 or len(frames) < 2:
        return worker((mrp, lang, frames))
    chunks = [frames[k::jobs] for k in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(worker, [(mrp, lang, ch) for ch in chunks]))
    return [d for p in parts for d in p]


def _finish(mrp, semantics, pop, bad, n_checks, seed, t0, notes=()) -> VerificationReport:
    bad = sorted(bad, key=lambda d: (d["frame_hash"], d.get("label", ""), d.get("inequality", "")))
    return VerificationReport(
        mrp=mrp,
        semantics=semantics,
        frames_tested=_count(pop),
        agreements=n_checks - len(bad),
        disagreements=tuple(bad),
        seed=seed,
        seconds=time.perf_counter() - t0,
        notes=tuple(notes),
    )


def verify_correspondence(
    mrp: str,
    semantics: Literal["graph", "kripke"] = "graph",
    size: Optional[int] = None,
    samples: int = 200,
    seed: int = 0,
    jobs: int = 1,
) -> VerificationReport:
    """Check ``frame_valid ⟺ ineq_holds`` for every correspondent of the mrp.

    Graph semantics: all valid frames with at most two points and ``samples``
    random frames for each larger size up to ``size``.  Kripke semantics: all
    bimodal frames up to three points (labelled up to two points, up to
    isomorphism at three) and ``samples`` random frames for each larger size.
    ``size`` defaults to 4 for graph and 3 for Kripke semantics.
    """
    t0 = time.perf_counter()
    c, _ = _classify(mrp)
    if semantics == "graph":
        pop = graph_population(size or 4, samples, seed)
        lang = "GRel"
    elif semantics == "kripke":
        pop = kripke_population(size or 3, samples, seed)
        lang = "KRel"
    else:
        raise ValueError(f"unknown semantics {semantics!r}")
    frames = [f for _, f in pop]
    bad = _run(_correspondence_worker, mrp, lang, frames, jobs)
    n_checks = len(frames) * len(correspondent(c, lang))  # type: ignore[arg-type]
    return _finish(mrp, semantics, pop, bad, n_checks, seed, t0)


def verify_shifting(
    mrp: str, size: int = 4, samples: int = 500, seed: int = 0
) -> VerificationReport:
    """Syntactic τ-identity plus semantic agreement of KRel on ``X`` and GRel on ``shift(X)``."""
    t0 = time.perf_counter()
    c, _ = _classify(mrp)
    g_ineqs, k_ineqs = correspondent(c, "GRel"), correspondent(c, "KRel")
    bad: list[dict] = []
    notes = []
    for g, k in zip(g_ineqs, k_ineqs):
        tau = translate_tau(g)
        assert isinstance(tau, RelInequality)
        tn = RelInequality(normalize(tau.lhs), normalize(tau.rhs), "KRel", g.label)
        if not tn.same_as(k):
            bad.append({"frame_hash": "", "label": g.label, "inequality": g.text(),
                        "syntactic": {"tau": tn.text(), "KRel": k.text()}})
        else:
            notes.append(f"({g.label}) tau({g.text()}) = {k.text()}")
    rng = np.random.default_rng(seed)
    pop: list[tuple[str, KripkeFrame]] = []
    for i in range(samples):
        n = int(rng.integers(1, size + 1))
        pop += [(f"n={n} random", f) for f in generate_kripke_frames(n, "random", 1, seed=seed * 100_003 + i)]
    for _, x in pop:
        gx = shift(x)
        for g, k in zip(g_ineqs, k_ineqs):
            hk, _ = ineq_holds(k, x)
            hg, pair = ineq_holds(g, gx)
            same_terms = all(
                eval_term(gt, gx).matrix.tolist() == eval_term(kt, x).matrix.tolist()
                for gt, kt in ((g.lhs, k.lhs), (g.rhs, k.rhs))
            )
            if hk != hg or not same_terms:
                bad.append({"frame_hash": _frame_hash(x), "frame": frame_to_json(x), "label": g.label,
                            "inequality": g.text(), "KRel_holds": hk, "GRel_holds": hg,
                            "terms_agree": same_terms})
    return _finish(mrp, "shifting", pop, bad, len(pop) * len(g_ineqs) + len(g_ineqs), seed, t0, notes)


def verify_lifting(
    mrp: str, size: int = 3, samples: int = 200, seed: int = 0
) -> VerificationReport:
    """Complement-lift equalities between PRel on ``lift(f)`` and GRel on ``f``.

    For every correspondent ``ξ₁ ⊆ ξ₂`` in GRel and its PRel counterpart
    ``π₁ ⊆ π₂``: ``π₁`` on the lifted frame is the complement of ``ξ₂`` on
    ``f`` and ``π₂`` the complement of ``ξ₁``; the two inclusions then hold
    together.
    """
    t0 = time.perf_counter()
    c, _ = _classify(mrp)
    g_ineqs, p_ineqs = correspondent(c, "GRel"), correspondent(c, "PRel")
    pop = graph_population(size, samples, seed)
    rng = np.random.default_rng(seed)
    if len(pop) > samples:
        keep = sorted(rng.choice(len(pop), size=samples, replace=False).tolist())
        pop = [pop[k] for k in keep]
    bad: list[dict] = []
    for _, f in pop:
        pf = lift(f)
        for g, p in zip(g_ineqs, p_ineqs):
            eq1 = np.array_equal(eval_term(p.lhs, pf).matrix, ~eval_term(g.rhs, f).matrix)
            eq2 = np.array_equal(eval_term(p.rhs, pf).matrix, ~eval_term(g.lhs, f).matrix)
            hp, _ = ineq_holds(p, pf)
            hg, _ = ineq_holds(g, f)
            if not (eq1 and eq2 and hp == hg):
                bad.append({"frame_hash": _frame_hash(f), "frame": frame_to_json(f), "label": g.label,
                            "GRel": g.text(), "PRel": p.text(), "lhs_lift": eq1, "rhs_lift": eq2,
                            "GRel_holds": hg, "PRel_holds": hp})
    notes = [f"({g.label}) {p.text()}  lifts  {g.text()}" for g, p in zip(g_ineqs, p_ineqs)]
    return _finish(mrp, "lifting", pop, bad, len(pop) * len(g_ineqs), seed, t0, notes)


# ---------------------------------------------------------------------------
# The catalogue table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogueDiff:
    property: str
    mrp: str
    row: str
    lang: str
    expected: str
    got: str


def catalogue() -> tuple[list[dict], list[CatalogueDiff]]:
    """Regenerate every catalogue row and diff it against the shipped golden copy."""
    rows: list[dict] = []
    diffs: list[CatalogueDiff] = []
    for entry in load_data("catalogue.json")["entries"]:
        c, _ = _classify(entry["mrp"])
        generated = {lang: {i.label: i for i in correspondent(c, lang)} for lang in LANGS}
        row = {"property": entry["property"], "mrp": entry["mrp"]}
        for label in ("a", "b"):
            for lang in LANGS:
                want = parse_rel_inequality(entry[label][lang], lang)
                got = generated[lang].get(label)
                row[f"{label}:{lang}"] = got.text() if got else "-"
                if got is None or not got.same_as(want):
                    diffs.append(CatalogueDiff(entry["property"], entry["mrp"], label, lang, want.text(),
                                            got.text() if got else "-"))
        rows.append(row)
    return rows, diffs
