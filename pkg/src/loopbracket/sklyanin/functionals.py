"""Coordinate functionals and leaf points.

A coordinate functional is psi_X(g) = <X, g> for a Cauchy-kernel test
loop X = A / ((z - w) * weight(z)); dividing by the pairing weight makes
psi_X(g) = tr(A g(w)) exact whenever g is holomorphic between the
contour and the probe, so matrix entries of g at probe points are in the
tested function class on the nose.
"""

import numpy as np

from ..numkernel import RationalMatrix
from ..geometry.cases import RATIONAL
from ..errors import ProbeOnPole, SamplerFailure


class CoordinateFunctional:

    def __init__(self, A, w, label=""):
        self.A = np.asarray(A, dtype=complex)
        self.w = complex(w)
        self.label = label or ("entry probe at %s" % w)

    def kernel(self, geometry):
        """Test-loop samples on the splitting contour."""
        z = geometry.contour.nodes
        return self.A / ((z - self.w) * geometry.weight(z))[:, None, None]

    def kernel_exact(self, geometry):
        """RationalMatrix form of the kernel (rational case only):
        A z^2/(z - w) = A (z + w) + A w^2/(z - w)."""
        if geometry.case != RATIONAL:
            raise NotImplementedError
        N = self.A.shape[0]
        poly = np.zeros((2, N, N), dtype=complex)
        poly[0] = self.w * self.A
        poly[1] = self.A
        return RationalMatrix(N, poly=poly,
                              poles={self.w: self.w ** 2 * self.A[None]})

    def singular_spec(self):
        """(point, order) singular data of the kernel inside the disk."""
        return ((self.w, 1),)

    def value(self, point):
        """psi_X at a leaf point."""
        return point.geometry.pairing(self.kernel(point.geometry),
                                      point.samples)

    def value_of_samples(self, geometry, samples):
        return geometry.pairing(self.kernel(geometry), samples)


def random_functional(geometry, rng, scale=1.0):
    """Random entry-probe functional with the probe inside the contour,
    away from the puncture and from the contour itself."""
    N = geometry.N
    A = scale * (rng.standard_normal((N, N))
                 + 1j * rng.standard_normal((N, N)))
    r = geometry.contour.radius
    w = (0.25 + 0.4 * rng.random()) * r * np.exp(2j * np.pi * rng.random())
    return CoordinateFunctional(A, w)


class LeafPoint:
    """A point g of the leaf: coefficients in a section basis."""

    def __init__(self, basis, coef):
        self.basis = basis
        self.geometry = basis.geometry
        self.coef = np.asarray(coef, dtype=complex)
        self._samples = None

    @property
    def samples(self):
        """g sampled on the splitting contour."""
        if self._samples is None:
            self._samples = self.basis.evaluate(
                self.coef, self.geometry.contour.nodes)
        return self._samples

    def evaluate(self, z):
        return self.basis.evaluate(self.coef, z)

    def exact(self):
        """Exact representation (rational/trigonometric bases only)."""
        total = None
        for c, e in zip(self.coef, self.basis.elements):
            term = c * e.exact
            total = term if total is None else total + term
        return total

    def contour_norm(self):
        return float(np.max(np.abs(self.samples)))

    def det_samples(self):
        return np.linalg.det(self.samples)

    def check_invertible(self, guard=1e-3):
        d = np.abs(self.det_samples())
        scale = self.contour_norm() ** self.geometry.N
        if np.min(d) < guard * max(scale, 1e-30):
            raise SamplerFailure(
                "det g comes within %.1e of zero on the contour" % np.min(d))

    def probe_guard(self, functional, guard=1e-3):
        for a, _ in (self.basis.divisor or []):
            if abs(functional.w - a) < guard:
                raise ProbeOnPole("probe %s on divisor point %s"
                                  % (functional.w, a))

    def replace(self, coef):
        return LeafPoint(self.basis, coef)


def sample_leaf(basis, rng, tries=40, det_guard=1e-3):
    """Random leaf point with i.i.d. complex Gaussian coefficients,
    rejected while det g nearly vanishes on the contour."""
    for _ in range(tries):
        coef = (rng.standard_normal(basis.dim)
                + 1j * rng.standard_normal(basis.dim))
        p = LeafPoint(basis, coef)
        try:
            p.check_invertible(det_guard)
        except SamplerFailure:
            continue
        return p
    raise SamplerFailure("no invertible leaf point in %d tries" % tries)
