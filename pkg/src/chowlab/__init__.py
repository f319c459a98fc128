"""Exact Chow forms, degrees of contact, Chow-semistability tests and height-bound evaluators."""

from __future__ import annotations

from importlib import resources

from .bounds import (JSequence, SurfaceProjectionData, e_linear_independence, k3_contact_bound,
                     last_coordinates_avoid, s_j_bound)
from .chow import (BracketExpansion, ChowForm, ChowPolytope, bracket_expansion, chow_form,
                   chow_form_elimination, chow_form_from_parametrization, chow_polytope, cycle_chow_form,
                   degree_of_contact)
from .heights import (BoundReport, SubbundleDegrees, k3_height_bound, main_theorem_chain, mixed_bound,
                      normalized_height_term, notmeet_bound, semistable_height_bound, shifted_weights,
                      theorem_one_bound)
from .parse import ParseError, load_variety, parse_polynomial, parse_variety_text
from .poly import GREVLEX, LEX, Poly, Ring
from .semistability import (SEMISTABLE_DIAGONAL, UNSTABLE, StabilityVerdict, check_weight,
                            k3_semistability_arithmetic, semistability_test, test_under_bases)
from .variety import Cycle, ProjectiveVariety, degree_of_contact_asymptotic, level_weight
from .weights import WeightFunction, dual_weight, induced_weight, integer_approximation, quotient_weight

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BracketExpansion",
    "ChowForm",
    "ChowPolytope",
    "Cycle",
    "GREVLEX",
    "JSequence",
    "LEX",
    "ParseError",
    "Poly",
    "ProjectiveVariety",
    "Ring",
    "SEMISTABLE_DIAGONAL",
    "StabilityVerdict",
    "SubbundleDegrees",
    "SurfaceProjectionData",
    "UNSTABLE",
    "WeightFunction",
    "__version__",
    "bracket_expansion",
    "check_weight",
    "chow_form",
    "chow_form_elimination",
    "chow_form_from_parametrization",
    "chow_polytope",
    "corpus_names",
    "cycle_chow_form",
    "degree_of_contact",
    "degree_of_contact_asymptotic",
    "dual_weight",
    "e_linear_independence",
    "induced_weight",
    "integer_approximation",
    "k3_contact_bound",
    "k3_height_bound",
    "k3_semistability_arithmetic",
    "last_coordinates_avoid",
    "level_weight",
    "load_corpus",
    "load_variety",
    "main_theorem_chain",
    "mixed_bound",
    "normalized_height_term",
    "notmeet_bound",
    "parse_polynomial",
    "parse_variety_text",
    "quotient_weight",
    "s_j_bound",
    "semistability_test",
    "semistable_height_bound",
    "shifted_weights",
    "test_under_bases",
    "theorem_one_bound",
]


def corpus_names() -> list:
    return sorted(p.name[:-4] for p in resources.files("chowlab.corpus").iterdir() if p.name.endswith(".var"))


def load_corpus(name: str):
    """Load a shipped example (``conic``, ``twisted_cubic``, ``double_line`` ...)."""
    text = resources.files("chowlab.corpus").joinpath(f"{name}.var").read_text(encoding="utf-8")
    return parse_variety_text(text, source=f"{name}.var")
