"""Base-curve cases, splittings, pairings and section bases."""

from .cases import (CaseGeometry, PoleDivisor,
                    RATIONAL, TRIGONOMETRIC, ELLIPTIC)
from .sections import (SectionBasis, SectionElement, section_basis,
                       automorphy_residual, sector_function,
                       heisenberg_word)

__all__ = [
    "CaseGeometry", "PoleDivisor", "RATIONAL", "TRIGONOMETRIC", "ELLIPTIC",
    "SectionBasis", "SectionElement", "section_basis",
    "automorphy_residual", "sector_function", "heisenberg_word",
]
