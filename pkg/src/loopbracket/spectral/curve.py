"""Spectral curves det(g(z) - lambda I) = 0 and the Hamiltonians read
off their coefficients.

The characteristic coefficients c_k(z) are elementary symmetric
functions of the eigenvalues of g(z); they are computed from trace
samples by the Newton-identity recursion and then fitted exactly in the
scalar function space the case allows (partial fractions, graded
polynomials, or theta quotients).  The fit coordinates are the
Hamiltonians.
"""

import numpy as np

from ..geometry import RATIONAL, TRIGONOMETRIC, ELLIPTIC
from ..geometry.sections import scalar_elliptic_basis
from ..errors import FitFailure, DegenerateInput


def genus(geo, N, d):
    """Number of separation-of-variables points for an N-sheeted curve
    over a degree-d pole divisor.

    Elliptic base: N(N-1)d/2 + 1 (adjunction on the compact surface).
    Rational and nodal bases: the ruled-surface adjunction count drops
    the base-curve contribution, N(N-1)d/2.
    """
    if N < 1 or d < 0:
        raise DegenerateInput("need N >= 1 and d >= 0")
    core = N * (N - 1) * d // 2
    if geo.case == ELLIPTIC:
        return core + 1
    return core


def scalar_space(geo, divisor, k):
    """Basis (list of callables) of the scalar functions that can carry
    a degree-k characteristic coefficient: poles bounded by k*D, with
    the case's regularity at the marked points."""
    if k == 0:
        return [lambda z: np.ones_like(np.asarray(z, dtype=complex))]
    if geo.case == RATIONAL:
        fns = [lambda z: np.ones_like(np.asarray(z, dtype=complex))]
        for a, m in divisor.points:
            for j in range(1, k * m + 1):
                fns.append(lambda z, a=a, j=j:
                           (np.asarray(z, dtype=complex) - a) ** (-j))
        return fns
    if geo.case == TRIGONOMETRIC:
        # graded scalar: a polynomial in z = zeta^N
        d = divisor.degree
        return [lambda z, j=j: np.asarray(z, dtype=complex) ** (geo.N * j)
                for j in range(k * d + 1)]
    places = [(p, k * m) for p, m in divisor.points]
    return scalar_elliptic_basis(geo, places)


def _fit_nodes(geo, divisor, rng_seed=12):
    """Generic sample cloud for the coefficient fits (kept off the
    divisor poles so both g and the scalar bases are finite)."""
    rng = np.random.default_rng(rng_seed)
    if geo.case == ELLIPTIC:
        tau = geo.tau
        zs = rng.random(192) + tau * rng.random(192)
    else:
        zs = np.exp(2j * np.pi * rng.random(192)) * \
            (0.85 + 0.3 * rng.random(192))
    keep = np.ones(zs.shape, dtype=bool)
    for a, _ in divisor.points:
        if geo.case == ELLIPTIC:
            keep &= lattice_distance(zs - a, geo.tau) > 5e-2
        else:
            keep &= np.abs(zs - a) > 5e-2
    return zs[keep]


def lattice_distance(w, tau):
    """Distance from w to the nearest point of Z + Z tau."""
    w = np.asarray(w, dtype=complex)
    y = w.imag / tau.imag
    x = w.real - y * tau.real
    return np.abs((x - np.round(x)) + (y - np.round(y)) * tau)


class SpectralCurve:
    """Characteristic coefficients of a leaf point.

    F(z, lambda) = sum_k (-lambda)^(N-k) c_k(z), c_0 = 1.
    """

    def __init__(self, geo, divisor, bases, coefs):
        self.geo = geo
        self.divisor = divisor
        self.bases = bases      # bases[k] = list of callables, k=1..N
        self.coefs = coefs      # coefs[k] = coefficient vector
        self.N = geo.N

    def coefficient(self, k, z):
        """c_k(z)."""
        z = np.asarray(z, dtype=complex)
        if k == 0:
            return np.ones_like(z)
        flat = np.atleast_1d(z).ravel()
        vals = np.stack([np.broadcast_to(np.asarray(f(flat)), flat.shape)
                         for f in self.bases[k]], axis=-1)
        return (vals @ self.coefs[k]).reshape(z.shape)

    def F(self, z, lam):
        """det(g(z) - lambda I) as a function of the curve data."""
        z = np.asarray(z, dtype=complex)
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros(np.broadcast(z, lam).shape, dtype=complex)
        for k in range(self.N + 1):
            out = out + (-lam) ** (self.N - k) * self.coefficient(k, z)
        return out

    def dF_dlam(self, z, lam):
        z = np.asarray(z, dtype=complex)
        lam = np.asarray(lam, dtype=complex)
        out = np.zeros(np.broadcast(z, lam).shape, dtype=complex)
        for k in range(self.N):
            p = self.N - k
            out = out - p * (-lam) ** (p - 1) * self.coefficient(k, z)
        return out

    def lam_continue(self, z, lam0, steps=30, tol=1e-12):
        """Newton-track the sheet lambda(z) from the seed lam0."""
        lam = complex(lam0)
        for _ in range(steps):
            f = complex(self.F(z, lam))
            df = complex(self.dF_dlam(z, lam))
            if abs(df) < 1e-14 * max(1.0, abs(f)):
                from ..errors import PathThroughBranchPoint
                raise PathThroughBranchPoint(
                    "dF/dlambda ~ 0 while tracking the sheet at z=%s" % z)
            step = f / df
            lam = lam - step
            if abs(step) < tol * max(1.0, abs(lam)):
                break
        return lam


def spectral_curve(point, tol=1e-8):
    """Fit the characteristic coefficients of a leaf point.

    Traces t_j(z) = tr g(z)^j feed the Newton-identity recursion
    k e_k = sum_{i<=k} (-1)^(i-1) e_{k-i} t_i, and each e_k is fitted in
    scalar_space(geo, D, k).  A residual above tol raises FitFailure
    (the sampled g is off the modelled leaf).
    """
    geo = point.geometry
    N = geo.N
    divisor = point.basis.divisor
    zs = _fit_nodes(geo, divisor)
    gz = point.evaluate(zs)
    traces = []
    power = gz.copy()
    for _ in range(N):
        traces.append(np.einsum("kii->k", power))
        power = power @ gz
    es = [np.ones_like(zs)]
    for k in range(1, N + 1):
        acc = np.zeros_like(zs)
        for i in range(1, k + 1):
            acc = acc + (-1.0) ** (i - 1) * es[k - i] * traces[i - 1]
        es.append(acc / k)

    bases = {}
    coefs = {}
    for k in range(1, N + 1):
        fns = scalar_space(geo, divisor, k)
        design = np.stack([f(zs) for f in fns], axis=1)
        coef, _, _, _ = np.linalg.lstsq(design, es[k], rcond=None)
        resid = np.max(np.abs(design @ coef - es[k]))
        scale = max(1.0, float(np.max(np.abs(es[k]))))
        if resid > tol * scale:
            raise FitFailure(
                "coefficient c_%d leaves fit residual %.3e" % (k, resid))
        bases[k] = fns
        coefs[k] = coef
    return SpectralCurve(geo, divisor, bases, coefs)


class HamiltonianSet:
    """The fit coordinates of all c_k, flattened with (k, index)
    labels; these are the commuting Hamiltonians of the leaf."""

    def __init__(self, curve):
        self.curve = curve
        self.values = np.concatenate(
            [curve.coefs[k] for k in range(1, curve.N + 1)])
        self.labels = [(k, i) for k in range(1, curve.N + 1)
                       for i in range(len(curve.coefs[k]))]

    def __len__(self):
        return len(self.values)

    def basis_function(self, idx):
        """The scalar basis element multiplying H_idx inside its c_k."""
        k, i = self.labels[idx]
        return k, self.curve.bases[k][i]

    def resynthesis_residual(self, zs=None):
        """Max error of rebuilding every c_k from (values, labels)."""
        curve = self.curve
        if zs is None:
            zs = _fit_nodes(curve.geo, curve.divisor, rng_seed=77)
        worst = 0.0
        pos = 0
        for k in range(1, curve.N + 1):
            nk = len(curve.coefs[k])
            vals = np.stack([f(zs) for f in curve.bases[k]], axis=1) @ \
                self.values[pos:pos + nk]
            worst = max(worst, float(np.max(np.abs(
                vals - curve.coefficient(k, zs)))))
            pos += nk
        return worst


def hamiltonians(curve, geo=None):
    return HamiltonianSet(curve)
