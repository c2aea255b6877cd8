"""Finite, executable versions of recoded-membership constructions for NF/NFU.

Modules: ``formula`` (syntax), ``stratification``, ``hfset`` (hereditarily
finite sets), ``structure`` (finite models and brute-force checks),
``boffa`` (witness recipes), ``search`` and ``cli``.
"""

from .formula import AxiomId, RelSym, builtin_axioms, parse_formula, print_formula, recode_translate
from .hfset import HFSet, ack_decode, ack_encode, parse_hf, v_stage
from .stratification import StratFailure, Typing, check_typing, stratify
from .structure import MembershipStructure, check_axiom, check_extensionality, eval_formula, load_structure

__all__ = [
    "AxiomId",
    "HFSet",
    "MembershipStructure",
    "RelSym",
    "StratFailure",
    "Typing",
    "ack_decode",
    "ack_encode",
    "builtin_axioms",
    "check_axiom",
    "check_extensionality",
    "check_typing",
    "eval_formula",
    "load_structure",
    "parse_formula",
    "parse_hf",
    "print_formula",
    "recode_translate",
    "stratify",
    "v_stage",
]
