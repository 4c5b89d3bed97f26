"""Affine Coxeter groups as crystallographic groups: classification, finite quotients,
genus comparisons, Ehrenfeucht-Fraisse games and universal Coxeter words."""

__version__ = "0.1.0"

from .classify import ClassifiedType, classify_diagram, parse_type_name
from .coxeter import CoxeterGraph, parse_coxeter_graph, racg_checks
from .crystal import CrystalGroup, build_affine_group, make_quotient, psi_certificate
from .ef import ef_value, expand_tuple, least_distinguishing_rounds, strategy_transfer_check
from .lattice import IntegerLattice, WModuleLattice, invariant_sublattices, primitive_normal_list
from .logic import evaluate, parse_formula, solution_set
from .quotients import (fingerprint, iso_bruteforce, module_genus_compare,
                        spacegroup_genus_compare)
from .weyl import PointGroup, point_group_for
from .words import ReducedWord, involution_witness, word_mul

__all__ = [
    "ClassifiedType", "classify_diagram", "parse_type_name", "CoxeterGraph",
    "parse_coxeter_graph", "racg_checks", "CrystalGroup", "build_affine_group",
    "make_quotient", "psi_certificate", "ef_value", "expand_tuple",
    "least_distinguishing_rounds", "strategy_transfer_check", "IntegerLattice",
    "WModuleLattice", "invariant_sublattices", "primitive_normal_list", "evaluate",
    "parse_formula", "solution_set", "fingerprint", "iso_bruteforce",
    "module_genus_compare", "spacegroup_genus_compare", "PointGroup", "point_group_for",
    "ReducedWord", "involution_witness", "word_mul",
]
