"""Jacobi theta functions with rational characteristics.

theta[a,b](z | tau) = sum_n exp( pi i tau (n+a)^2 + 2 pi i (n+a)(z+b) )

All lattice data enters through the normalized period ratio
tau = omega2/omega1 with Im(tau) > 0 and the normalized variable
u = z/omega1; the callers keep that normalization.
"""

import numpy as np
from dataclasses import dataclass
from fractions import Fraction

from ..errors import BadLattice

TAIL_TARGET = 1e-14


@dataclass(frozen=True)
class ThetaParams:
    """Lattice periods, characteristics and a validated truncation."""
    omega1: complex
    omega2: complex
    a: Fraction = Fraction(1, 2)
    b: Fraction = Fraction(1, 2)
    truncation: int = 0  # 0: pick automatically

    @property
    def tau(self):
        tau = self.omega2 / self.omega1
        if tau.imag <= 0:
            raise BadLattice("Im(omega2/omega1) = %g <= 0" % tau.imag)
        return tau

    def bound(self, z_imag_max=2.0):
        """Truncation index with tail below TAIL_TARGET of the leading
        term, from the geometric bound |q|^(n^2 - 2 c n) on the terms."""
        tau = self.tau
        # |term_n| <= |q|^{(n+a)^2} e^{2 pi |n+a| |Im z|},  q = e^{i pi tau}
        t = np.pi * tau.imag
        n = 4
        while n < 4000:
            tail = -t * (n - 1) ** 2 + 2 * np.pi * (n + 1) * z_imag_max
            if tail < np.log(TAIL_TARGET):
                break
            n += 2
        if self.truncation:
            if self.truncation < n:
                raise BadLattice(
                    "truncation %d too small for tail target (need %d)"
                    % (self.truncation, n))
            return self.truncation
        return n


def theta_eval(z, params, derivative=0):
    """theta[a,b](u | tau) at u = z/omega1; vectorized in z.

    derivative=k returns d^k/du^k of the series.
    """
    tau = params.tau
    u = np.asarray(z, dtype=complex) / params.omega1
    scalar_in = (u.ndim == 0)
    u = np.atleast_1d(u)
    bound = params.bound(z_imag_max=max(2.0, float(np.max(np.abs(u.imag)))))
    n = np.arange(-bound, bound + 1).reshape((-1,) + (1,) * u.ndim)
    na = n + float(params.a)
    phase = np.exp(1j * np.pi * tau * na ** 2
                   + 2j * np.pi * na * (u[None] + float(params.b)))
    if derivative:
        phase = phase * (2j * np.pi * na) ** derivative
    out = phase.sum(axis=0)
    return out[()] if scalar_in else out


def theta1(z, tau, derivative=0):
    """The odd Jacobi theta function theta_1 (vanishes at lattice points).

    theta1(u|tau) = -theta[1/2,1/2](u|tau) in the convention above.
    """
    p = ThetaParams(1.0, tau)
    return -theta_eval(z, p, derivative=derivative)
