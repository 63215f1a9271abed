"""Base-curve cases, pole divisors, pairing and splitting.

One contour engine serves all three cases.  The splitting disk sits at
the origin of the working coordinate:

  rational       coordinate z, unit-circle contour, puncture z = 0;
                 pairing one-form dz / (2 pi i z^2)
  trigonometric  cover coordinate zeta (z = zeta^N), unit-circle
                 contour, node over zeta = 0; pairing dzeta/(2 pi i zeta)
  elliptic       flat coordinate u normalized by the first period,
                 small circle around the lattice point u = 0;
                 pairing du / (2 pi i)

The rational weight 1/z^2 (rather than a plain dz) is what makes both
halves of the origin-based splitting isotropic, hence the bracket
antisymmetric; it is the origin-chart avatar of the invariant form of
the puncture-at-infinity picture.  In each case the weight is chosen so
that the monomial duality pairs the two halves of the splitting with
each other and not with themselves.
"""

import numpy as np

from ..numkernel import Contour, contour_quad, RationalMatrix, split_on_disk
from ..errors import SplitFailure, WrongCase, ConfigInvalid

RATIONAL = "rational"
TRIGONOMETRIC = "trigonometric"
ELLIPTIC = "elliptic"


class PoleDivisor:
    """Points with multiplicities bounding the poles of leaf elements.

    Rational/trigonometric points live in the working coordinate;
    elliptic points are lattice-reduced to the fundamental domain.
    """

    def __init__(self, points, geometry=None):
        self.points = [(complex(a), int(m)) for a, m in points]
        at_node = geometry is not None and geometry.case == TRIGONOMETRIC
        if geometry is not None and geometry.case == ELLIPTIC:
            self.points = [(geometry.reduce(a), m) for a, m in self.points]
        pts = [a for a, _ in self.points]
        for i in range(len(pts)):
            # trigonometric divisors live over the node itself, which is
            # also where the splitting contour is centred; everywhere
            # else the divisor must avoid the puncture
            if abs(pts[i]) < 1e-9 and not at_node:
                raise ConfigInvalid("divisor point at the splitting puncture",
                                    field="divisor")
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) < 1e-9:
                    raise ConfigInvalid("divisor points coincide",
                                        field="divisor")

    @property
    def degree(self):
        return sum(m for _, m in self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return "PoleDivisor(%r)" % (self.points,)


class CaseGeometry:
    """Which base curve, rank, splitting and pairing are in force."""

    def __init__(self, case, N, omega1=None, omega2=None,
                 node_count=512, contour_radius=None):
        if case not in (RATIONAL, TRIGONOMETRIC, ELLIPTIC):
            raise ConfigInvalid("unknown case %r" % case, field="case")
        self.case = case
        self.N = int(N)
        self.q = np.exp(2j * np.pi / self.N)
        self.tau = None
        self.omega1 = None
        if case == ELLIPTIC:
            if omega1 is None or omega2 is None:
                raise ConfigInvalid("elliptic case needs both periods",
                                    field="periods")
            tau = complex(omega2) / complex(omega1)
            if tau.imag <= 0:
                raise ConfigInvalid(
                    "Im(omega2/omega1) = %g must be positive" % tau.imag,
                    field="periods")
            self.omega1 = complex(omega1)
            self.tau = tau
            radius = 0.15 if contour_radius is None else float(contour_radius)
        else:
            radius = 1.0 if contour_radius is None else float(contour_radius)
        self.contour = Contour(0.0, radius, node_count)
        # Heisenberg pair
        j = np.arange(self.N)
        self.I1 = np.diag(self.q ** j).astype(complex)
        # down-shift so that I1 I2 = q I2 I1
        self.I2 = np.zeros((self.N, self.N), dtype=complex)
        self.I2[j, (j - 1) % self.N] = 1.0
        self._split_cache = {}

    # -- bookkeeping ---------------------------------------------------

    def reduce(self, u):
        """Lattice-reduce to the fundamental domain (elliptic only)."""
        if self.case != ELLIPTIC:
            return complex(u)
        u = complex(u)
        n = round(u.imag / self.tau.imag)
        u = u - n * self.tau
        u = u - round(u.real - self.tau.real * (u.imag / self.tau.imag))
        # one more pass for corner cases
        m = np.floor(u.imag / self.tau.imag + 1e-12)
        u = u - m * self.tau
        u = u - np.floor(u.real - u.imag * self.tau.real / self.tau.imag + 1e-12)
        return complex(u)

    def heisenberg_ok(self):
        """I1 I2 = q I2 I1 and the determinant match, exactly."""
        lhs = self.I1 @ self.I2
        rhs = self.q * self.I2 @ self.I1
        det_match = np.isclose(np.linalg.det(self.I1), np.linalg.det(self.I2))
        return bool(np.allclose(lhs, rhs, atol=1e-14) and det_match)

    def weight(self, z):
        """Density of the pairing one-form against dz/(2 pi i)."""
        if self.case == RATIONAL:
            return 1.0 / z ** 2
        if self.case == TRIGONOMETRIC:
            return 1.0 / z
        return np.ones_like(z)

    # -- pairing -------------------------------------------------------

    def pairing(self, F, G, check=False):
        """< F, G > = (1/2 pi i) * closed integral of tr(FG) * weight.

        F, G: sample arrays (n, N, N) on self.contour.nodes, or
        RationalMatrix (sampled here).
        """
        F = self.samples(F)
        G = self.samples(G)
        integ = np.einsum("kij,kji->k", F, G) * self.weight(self.contour.nodes)
        return contour_quad(integ, self.contour, check=check)

    def samples(self, X):
        """Coerce a loop element to samples on the contour nodes."""
        if isinstance(X, np.ndarray):
            return X
        return X.eval(self.contour.nodes)

    # -- splitting -----------------------------------------------------

    def fourier_parts(self, F):
        """(negative, nonnegative) Fourier parts, samplewise, plus the
        raw coefficient array; the angular FFT on the circular contour
        is the Laurent expansion on the annulus."""
        C = np.fft.fft(F, axis=0) / F.shape[0]
        ks = np.fft.fftfreq(F.shape[0], d=1.0 / F.shape[0]).astype(int)
        return C, ks

    def split(self, X, singular_spec=None):
        """P+ / P- splitting of a loop element.

        Rational: RationalMatrix inputs are split exactly (principal
        parts inside the disk plus the puncture value); samples are
        split by Laurent-power threshold (powers <= 0 vs >= 1).

        Trigonometric: threshold in the zeta-Laurent expansion with the
        degree-zero (Cartan) coefficient shared half-and-half, so that
        R = P+ - P- kills it and stays skew.

        Elliptic: the plus part is the global traceless section with
        the same singular parts inside the disk as X, built on the
        section basis attached to singular_spec, a tuple of
        (point, max_order) pairs naming where X may be singular inside
        the contour; the scalar (trace) direction is shared
        half-and-half like the trigonometric Cartan.  Returns
        (plus, minus) in the same representation as the input.
        """
        if isinstance(X, RationalMatrix):
            if self.case != RATIONAL:
                raise WrongCase("exact rational split in case %r" % self.case)
            return split_on_disk(X, self.contour.center, self.contour.radius)
        F = self.samples(X)
        if self.case == RATIONAL:
            C, ks = self.fourier_parts(F)
            plusC = C.copy()
            plusC[ks > 0] = 0
            plus = np.fft.ifft(plusC * F.shape[0], axis=0)
            return plus, F - plus
        if self.case == TRIGONOMETRIC:
            C, ks = self.fourier_parts(F)
            # project onto the twisted algebra first: zeta-power p only
            # carries entries of matrix grading p mod N.  The discarded
            # component pairs to zero against every graded section, so
            # bracket values are untouched, but keeping it would push
            # Hamiltonian fields off the graded leaf.
            from ..numkernel import GradedLaurentMatrix
            for p in range(self.N):
                C[ks % self.N == p] *= \
                    GradedLaurentMatrix.grading_mask(self.N, p)
            plusC = C.copy()
            plusC[ks > 0] = 0
            plusC[ks == 0] *= 0.5
            plus = np.fft.ifft(plusC * F.shape[0], axis=0)
            minus = np.fft.ifft((C - plusC) * F.shape[0], axis=0)
            return plus, minus
        return self._split_elliptic(F, singular_spec)

    def r_apply(self, X, singular_spec=None):
        plus, minus = self.split(X, singular_spec=singular_spec)
        return plus - minus

    def _split_elliptic(self, F, singular_spec):
        from .sections import elliptic_split_basis
        if singular_spec is None:
            singular_spec = ((0.0, 2),)
        key = tuple((complex(np.round(p, 12)), int(m))
                    for p, m in singular_spec)
        if key not in self._split_cache:
            self._split_cache[key] = elliptic_split_basis(self, key)
        sector_data = self._split_cache[key]
        n = F.shape[0]
        ks = np.fft.fftfreq(n, d=1.0 / n).astype(int)
        plus = np.zeros_like(F)
        # Heisenberg sector decomposition: f_ab = tr(F T_ab^H) / N
        for (a, b), (T, design, basis_samples) in sector_data.items():
            f = np.einsum("kij,ji->k", F, T.conj().T) / self.N
            if a == 0 and b == 0:
                # scalar / central direction: match what an elliptic
                # function can carry (residue-free pole parts); the
                # remainder is the splitting obstruction, shared
                # half-and-half so R vanishes on it
                if design is None:
                    plus += 0.5 * f[:, None, None] * T
                    continue
                Cf = np.fft.fft(f) / n
                Cf[ks >= 0] = 0
                neg = np.fft.ifft(Cf * n)
                coef, _, _, _ = np.linalg.lstsq(design, neg, rcond=None)
                matched = basis_samples @ coef
                plus += (matched + 0.5 * (f - matched))[:, None, None] * T
                continue
            Cf = np.fft.fft(f) / n
            Cf[ks >= 0] = 0
            neg = np.fft.ifft(Cf * n)
            coef, _, _, _ = np.linalg.lstsq(design, neg, rcond=None)
            resid = np.max(np.abs(design @ coef - neg))
            scale = max(1.0, float(np.max(np.abs(f))))
            if resid > 1e-9 * scale:
                raise SplitFailure(
                    "elliptic singular-part match left residual %.3e "
                    "in sector (%d,%d)" % (resid, a, b))
            plus += (basis_samples @ coef)[:, None, None] * T
        return plus, F - plus
