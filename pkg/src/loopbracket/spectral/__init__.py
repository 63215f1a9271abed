"""Spectral side of the lab: invariant curve coefficients, separated
divisor charts, and the Darboux form they are expected to satisfy."""

from .curve import (genus, scalar_space, SpectralCurve, spectral_curve,
                    HamiltonianSet, hamiltonians)
from .divisor import (normalization_section, DivisorChart, divisor_points,
                      continue_chart)
from .darboux import (DARBOUX_SIGN, pairing_weight, darboux_bracket,
                      tangent_frame, chain_rule_bracket,
                      reduction_correction)
from .linearize import (LinearizingCoords, linearizing_coords,
                        leaf_hamiltonian_directions)

__all__ = [
    "genus", "scalar_space", "SpectralCurve", "spectral_curve",
    "HamiltonianSet", "hamiltonians",
    "normalization_section", "DivisorChart", "divisor_points",
    "continue_chart",
    "DARBOUX_SIGN", "pairing_weight", "darboux_bracket",
    "tangent_frame", "chain_rule_bracket", "reduction_correction",
    "LinearizingCoords", "linearizing_coords",
    "leaf_hamiltonian_directions",
]
