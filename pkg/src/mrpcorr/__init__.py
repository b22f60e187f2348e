"""Modal reduction principles and their relational correspondents.

Classify an mrp, compute its correspondent over Kripke, graph-based and
polarity-based frames, and check the correspondence by brute force on
finite frames::

    >>> from mrpcorr import parse_inequality, classify_mrp, correspondent
    >>> c = classify_mrp(*parse_inequality("dia p <= box dia box p"))
    >>> [i.text() for i in correspondent(c, "GRel")]
    ['Rbdia ;d Rdia <= Rdia *g Rbox *g D']
"""

from .relcalc import (
    CompatibilityReport, DomainError, FiniteDomain, FiniteRelation, bond_closure, box_op, compose,
    dia_op, galois_neg, galois_pos, is_e_compatible, polar, semi, semi_i,
)
from .syntax import (
    Analytic, ModalString, NotSahlqvist, ParseError, TypeA, TypeB, classify_mrp, parse_formula,
    parse_inequality, to_text, to_unicode,
)
from .frames import (
    Concept, ConceptLattice, FrameError, GraphFrame, KripkeFrame, PolarityFrame, concept_lattice,
    dumps_frame, generate_frames, generate_kripke_frames, lift, loads_frame, pawlak_frame, shift,
    unshift, validate_frame,
)
from .semantics import GraphModel, KripkeModel, Validity, frame_valid, interpret, sequent_true
from .correspond import (
    LANGS, RelInequality, alba_output, correspondent, eval_term, ineq_holds, lift_inequality, normalize,
    parse_rel_inequality, parse_term, translate_tau,
)
from .roughsets import approximations, classify_space, pawlak_check
from .verify import VerificationReport, catalogue, verify_correspondence, verify_lifting, verify_shifting

__version__ = "0.1.0"

__all__ = [
    "CompatibilityReport", "DomainError", "FiniteDomain", "FiniteRelation", "bond_closure", "box_op",
    "compose", "dia_op", "galois_neg", "galois_pos", "is_e_compatible", "polar", "semi", "semi_i",
    "Analytic", "ModalString", "NotSahlqvist", "ParseError", "TypeA", "TypeB", "classify_mrp",
    "parse_formula", "parse_inequality", "to_text", "to_unicode",
    "Concept", "ConceptLattice", "FrameError", "GraphFrame", "KripkeFrame", "PolarityFrame",
    "concept_lattice", "dumps_frame", "generate_frames", "generate_kripke_frames", "lift", "loads_frame",
    "pawlak_frame", "shift", "unshift", "validate_frame",
    "GraphModel", "KripkeModel", "Validity", "frame_valid", "interpret", "sequent_true",
    "LANGS", "RelInequality", "alba_output", "correspondent", "eval_term", "ineq_holds",
    "lift_inequality", "normalize", "parse_rel_inequality", "parse_term", "translate_tau",
    "approximations", "classify_space", "pawlak_check",
    "VerificationReport", "catalogue", "verify_correspondence", "verify_lifting", "verify_shifting",
]
