"""loopbracket: a numerical laboratory for the quadratic Poisson bracket
on finite-dimensional leaves of loop groups over rational, trigonometric
and elliptic base curves."""

__version__ = "0.1.0"
