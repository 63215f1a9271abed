"""Property-suite verification layer."""

from .report import PropertyReport
from .suites import (default_divisor, suite_bracket_axioms,
                     suite_leaf_invariants, suite_integrability,
                     suite_darboux_equivalence, discriminant_genus_oracle)

SUITES = {
    "bracket_axioms": suite_bracket_axioms,
    "leaf_invariants": suite_leaf_invariants,
    "integrability": suite_integrability,
    "darboux_equivalence": suite_darboux_equivalence,
}

__all__ = ["PropertyReport", "default_divisor", "suite_bracket_axioms",
           "suite_leaf_invariants", "suite_integrability",
           "suite_darboux_equivalence", "discriminant_genus_oracle",
           "SUITES"]
