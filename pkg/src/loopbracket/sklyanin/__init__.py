"""Bracket engine: functionals, derivatives, the quadratic bracket,
dressing/Hamiltonian vector fields and flow integration."""

from .functionals import (CoordinateFunctional, LeafPoint,
                          random_functional, sample_leaf)
from .bracket import (left_derivative, right_derivative, bracket,
                      bracket_r_form, bracket_scale, hamiltonian_vector,
                      hamiltonian_value, functional_vector, dressing_vector)
from .flows import (FlowTrajectory, integrate_flow, pole_location,
                    det_root_positions, drift_report)

__all__ = [
    "CoordinateFunctional", "LeafPoint", "random_functional", "sample_leaf",
    "left_derivative", "right_derivative", "bracket", "bracket_r_form",
    "bracket_scale", "hamiltonian_vector", "hamiltonian_value",
    "functional_vector", "dressing_vector",
    "FlowTrajectory", "integrate_flow", "pole_location",
    "det_root_positions", "drift_report",
]
