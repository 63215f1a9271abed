"""Bases of sections with prescribed poles and automorphy.

Rational: matrices of partial fractions.  Trigonometric: elementary
graded Laurent matrices on the zeta-cover.  Elliptic: theta-quotient
scalar functions tensored with Heisenberg words T_ab = I1^a I2^b.

An elliptic sector function for (a, b) != (0, 0) with a single pole p
of order m is

    f(u) = exp(-2 pi i (b/N) u) * prod_i theta1(u - s_i) / theta1(u - p)^m

with the zeros s_i constrained by sum s_i = m p + a/N + (b/N) tau, which
is exactly the condition for the quasi-periodicity multipliers
f(u+1) = q^{-b} f(u), f(u+tau) = q^{a} f(u) demanded by conjugation
equivariance M(u + period) = I_i M(u) I_i^{-1}.  The scalar sector
(a, b) = (0, 0) consists of genuinely elliptic functions and is built
from 1 and derivatives/differences of the logarithmic derivative of
theta1 (which kills the residue obstruction).
"""

import numpy as np

from ..numkernel import RationalMatrix, GradedLaurentMatrix, theta1
from ..errors import DimensionMismatch, WrongCase
from .cases import RATIONAL, TRIGONOMETRIC, ELLIPTIC

# deterministic spread used to keep prescribed zeros pairwise distinct
ZERO_SPREAD = 0.2497


class SectionElement:
    """One basis element: a scalar function times a constant matrix,
    or a full matrix-valued function; always evaluable."""

    def __init__(self, fn, label=""):
        self._fn = fn
        self.label = label

    def eval(self, z):
        return self._fn(np.asarray(z, dtype=complex))


class SectionBasis:
    """A numerically validated basis of matrix sections."""

    def __init__(self, geometry, divisor, elements, expected_dim):
        self.geometry = geometry
        self.divisor = divisor
        self.elements = elements
        self.dim = len(elements)
        if self.dim != expected_dim:
            raise DimensionMismatch(
                "constructed %d elements, expected %d from the "
                "Riemann-Roch count" % (self.dim, expected_dim))
        self._sample_cache = {}

    def sample(self, zs):
        """Design matrix (len(zs)*N*N, dim) of the elements at zs."""
        key = (zs[0], zs[-1], len(zs))
        if key not in self._sample_cache:
            cols = [e.eval(zs).reshape(len(zs) * self.geometry.N ** 2)
                    for e in self.elements]
            self._sample_cache[key] = np.stack(cols, axis=1)
        return self._sample_cache[key]

    def rank_check(self, zs=None):
        """Smallest/largest singular value ratio of the sample matrix."""
        if zs is None:
            zs = self.geometry.contour.nodes
        A = self.sample(zs)
        sv = np.linalg.svd(A, compute_uv=False)
        ratio = sv[-1] / sv[0]
        if ratio < 1e-8:
            raise DimensionMismatch(
                "basis numerically dependent: sv ratio %.3e" % ratio)
        return float(ratio)

    def evaluate(self, coef, zs):
        """Matrix samples of sum_k coef[k] * element_k at zs."""
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        A = self.sample(zs)
        return (A @ coef).reshape(len(zs), self.geometry.N, self.geometry.N)

    def fit(self, samples, zs=None, rcond=None):
        """Least-squares expansion of matrix samples in this basis;
        returns (coefficients, max abs residual)."""
        if zs is None:
            zs = self.geometry.contour.nodes
        A = self.sample(zs)
        rhs = samples.reshape(len(zs) * self.geometry.N ** 2)
        coef, _, _, _ = np.linalg.lstsq(A, rhs, rcond=rcond)
        resid = np.max(np.abs(A @ coef - rhs))
        return coef, float(resid)


def heisenberg_word(geometry, a, b):
    return np.linalg.matrix_power(geometry.I1, a % geometry.N) @ \
        np.linalg.matrix_power(geometry.I2, b % geometry.N)


def sector_function(geometry, a, b, point, order):
    """Elliptic scalar function in sector (a, b) != (0, 0) with a pole
    of exact order `order` at `point` and no other poles."""
    N, tau = geometry.N, geometry.tau
    shift = (a % N) / N + ((b % N) / N) * tau
    zeros = []
    for i in range(order):
        s = point + shift / order + (i - (order - 1) / 2.0) * ZERO_SPREAD
        zeros.append(s)
    # enforce the exact sum constraint against rounding in the spread
    correction = (order * point + shift - np.sum(zeros)) / order
    zeros = [s + correction for s in zeros]

    def fn(u):
        u = np.asarray(u, dtype=complex)
        out = np.exp(-2j * np.pi * ((b % N) / N) * u)
        for s in zeros:
            out = out * theta1(u - s, tau)
        return out / theta1(u - point, tau) ** order
    return fn


def log_theta_derivative(tau):
    def fn(u):
        return theta1(u, tau, derivative=1) / theta1(u, tau)
    return fn


def scalar_elliptic_basis(geometry, places):
    """Basis of elliptic functions with poles of order <= m at each
    (point, m) in `places`: 1, pairwise differences of theta1'/theta1
    (simple poles, residues +1/-1), and higher derivatives (pure
    higher-order poles, no residue)."""
    tau = geometry.tau
    lder = log_theta_derivative(tau)
    fns = [lambda u: np.ones_like(np.asarray(u, dtype=complex))]
    pts = [p for p, _ in places]
    for i in range(1, len(pts)):
        p0, pi = pts[0], pts[i]
        fns.append(lambda u, p0=p0, pi=pi: lder(u - pi) - lder(u - p0))
    for p, m in places:
        for k in range(2, m + 1):
            fns.append(lambda u, p=p, k=k:
                       _pole_power(np.asarray(u, dtype=complex) - p, tau, k))
    return fns


def _pole_power(v, tau, k):
    """(d/dv)^{k-1} of theta1'/theta1 (v), an elliptic function with a
    single pole of order k, computed from theta derivatives."""
    # derivatives of log theta1: use the quotient rule iteratively on
    # small k (k <= 4 in practice)
    t0 = theta1(v, tau)
    t1 = theta1(v, tau, derivative=1)
    if k == 2:
        t2 = theta1(v, tau, derivative=2)
        return t2 / t0 - (t1 / t0) ** 2
    if k == 3:
        t2 = theta1(v, tau, derivative=2)
        t3 = theta1(v, tau, derivative=3)
        g = t1 / t0
        return t3 / t0 - 3 * (t2 / t0) * g + 2 * g ** 3
    raise NotImplementedError("pole order > 3 in the scalar sector")


def section_basis(geometry, divisor):
    """Basis of matrix sections with poles bounded by the divisor."""
    N = geometry.N
    if geometry.case == RATIONAL:
        elements = []
        scalars = [("1", RationalMatrix.identity(1))]
        for p, m in divisor:
            for j in range(1, m + 1):
                parts = np.zeros((j, 1, 1), dtype=complex)
                parts[j - 1] = 1.0
                scalars.append(("(z-%s)^-%d" % (p, j),
                                RationalMatrix(1, poles={p: parts})))
        for jj in range(N):
            for kk in range(N):
                E = np.zeros((N, N), dtype=complex)
                E[jj, kk] = 1.0
                for lbl, s in scalars:
                    rm = _scalar_to_matrix(s, E)
                    elements.append(SectionElement(
                        rm.eval, label="E[%d,%d]*%s" % (jj, kk, lbl)))
                    elements[-1].exact = rm
        basis = SectionBasis(geometry, divisor, elements,
                             N * N * (divisor.degree + 1))
    elif geometry.case == TRIGONOMETRIC:
        # poles over the infinity branch of the node only: zeta-powers
        # 0 .. N*d.  Keeping the zero branch regular is what lets the
        # dressing fields close on the leaf (the det-root poles of
        # Ad_g xi cancel against adj(g) g = det(g) I).
        d = divisor.degree
        elements = []
        for p in range(0, N * d + 1):
            mask = GradedLaurentMatrix.grading_mask(N, p)
            for jj, kk in zip(*np.nonzero(mask)):
                E = np.zeros((N, N), dtype=complex)
                E[jj, kk] = 1.0
                g = GradedLaurentMatrix(N, {p: E})
                elements.append(SectionElement(
                    g.eval, label="E[%d,%d]*zeta^%d" % (jj, kk, p)))
                elements[-1].exact = g
        basis = SectionBasis(geometry, divisor, elements,
                             N * N * d + N)
    elif geometry.case == ELLIPTIC:
        elements = []
        for a in range(N):
            for b in range(N):
                if a == 0 and b == 0:
                    continue
                T = heisenberg_word(geometry, a, b)
                for p, m in divisor:
                    for j in range(1, m + 1):
                        f = sector_function(geometry, a, b, p, j)
                        elements.append(SectionElement(
                            _tensor(f, T),
                            label="T[%d,%d]*pole(%s)^%d" % (a, b, p, j)))
        eye = np.eye(N, dtype=complex)
        for f in scalar_elliptic_basis(geometry, list(divisor)):
            elements.append(SectionElement(_tensor(f, eye), label="scalar"))
        basis = SectionBasis(geometry, divisor, elements,
                             N * N * divisor.degree)
    else:
        raise WrongCase(geometry.case)
    basis.rank_check()
    return basis


def _tensor(f, T):
    def fn(u):
        vals = f(np.asarray(u, dtype=complex))
        return vals[..., None, None] * T
    return fn


def _scalar_to_matrix(s, E):
    """RationalMatrix: scalar rational function times constant matrix."""
    N = E.shape[0]
    poly = s.poly[:, 0, 0][:, None, None] * E
    poles = {a: p[:, 0, 0][:, None, None] * E for a, p in s.poles.items()}
    return RationalMatrix(N, poly=poly, poles=poles)


def elliptic_split_basis(geometry, singular_spec):
    """Per-sector matching data for the elliptic splitting.

    For every Heisenberg sector, build the global sector functions with
    poles allowed at the given inside points/orders, sample them on the
    contour and precompute their negative Fourier parts (the singular
    data the matching solves against)."""
    N = geometry.N
    nodes = geometry.contour.nodes
    n = len(nodes)
    ks = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    out = {}
    for a in range(N):
        for b in range(N):
            T = heisenberg_word(geometry, a, b)
            cols = []
            if a == 0 and b == 0:
                # scalar sector: elliptic functions have residue-free
                # matchable parts only -- pure pole powers >= 2 and, with
                # several points, balanced simple-pole differences
                tau = geometry.tau
                lder = log_theta_derivative(tau)
                pts = [p for p, _ in singular_spec]
                for i in range(1, len(pts)):
                    cols.append(lder(nodes - pts[i]) - lder(nodes - pts[0]))
                for p, m in singular_spec:
                    for j in range(2, m + 1):
                        cols.append(_pole_power(nodes - p, tau, j))
                if not cols:
                    out[(a, b)] = (T, None, None)
                    continue
                basis_samples = np.stack(cols, axis=1)
                C = np.fft.fft(basis_samples, axis=0) / n
                C[ks >= 0] = 0
                design = np.fft.ifft(C * n, axis=0)
                out[(a, b)] = (T, design, basis_samples)
                continue
            for p, m in singular_spec:
                for j in range(1, m + 1):
                    f = sector_function(geometry, a, b, p, j)
                    cols.append(f(nodes))
            basis_samples = np.stack(cols, axis=1)
            C = np.fft.fft(basis_samples, axis=0) / n
            C[ks >= 0] = 0
            design = np.fft.ifft(C * n, axis=0)
            out[(a, b)] = (T, design, basis_samples)
    return out


def automorphy_residual(element, geometry, samples=24, rng_seed=5):
    """Worst relative violation of the conjugation quasi-periodicity
    over the applicable periods, at generic sample points."""
    if geometry.case == RATIONAL:
        raise WrongCase("automorphy is trivial in the rational case")
    rng = np.random.default_rng(rng_seed)
    I1inv = np.linalg.inv(geometry.I1)
    if geometry.case == TRIGONOMETRIC:
        zs = np.exp(1j * rng.uniform(0, 2 * np.pi, samples)) * \
            rng.uniform(0.7, 1.3, samples)
        M = element.eval(zs)
        Mq = element.eval(geometry.q * zs)
        resid = Mq - np.einsum("ij,kjl,lm->kim", geometry.I1, M, I1inv)
        return float(np.max(np.abs(resid)) / max(1e-300, np.max(np.abs(M))))
    tau = geometry.tau
    zs = rng.uniform(0.2, 0.8, samples) + tau * rng.uniform(0.2, 0.8, samples)
    M = element.eval(zs)
    worst = 0.0
    for period, I in ((1.0, geometry.I1), (tau, geometry.I2)):
        Mp = element.eval(zs + period)
        conj = np.einsum("ij,kjl,lm->kim", I, M, np.linalg.inv(I))
        worst = max(worst, float(np.max(np.abs(Mp - conj))
                                 / max(1e-300, np.max(np.abs(M)))))
    return worst
