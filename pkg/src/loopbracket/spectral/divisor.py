"""Separation-of-variables divisor charts.

A normalization section S(z) of the underlying rank-N bundle singles
out, over each base point z, the line spanned by S.  The divisor of the
eigenline bundle in this frame is the set of points (z_mu, lambda_mu)
where a left eigenvector of g(z_mu) is orthogonal to S(z_mu) --
equivalently where adj(g - lambda I) S = 0.  Those z_mu are the zeros
of the Krylov determinant

    K(z) = det [ S(z), g(z) S(z), ..., g(z)^(N-1) S(z) ],

which is the computational handle used here.

In the elliptic case the pairing runs the other way: the chart data is
a covector W(z) paired against right eigenvectors, and the handle is
the row Krylov determinant det[W; W g; ...; W g^(N-1)].  This is the
orientation for which the determinant is quasi-periodic under both
lattice translations, so its zero count in a fundamental cell is
well defined and equals the genus.  Computationally both orientations
are the same algorithm applied to g or to its transpose.
"""

import numpy as np

from ..numkernel import Contour, theta1
from ..numkernel.roots import poly_roots
from ..geometry import RATIONAL, TRIGONOMETRIC, ELLIPTIC
from ..errors import NonGenericDivisor, DegenerateInput
from .. import mutations
from .curve import genus, lattice_distance

COINCIDENT_TOL = 1e-6


def normalization_section(geo):
    """The frame vector S(z), returned as a callable z -> (..., N).

    Rational: the constant vector (0, ..., 0, 1).  Trigonometric:
    (1, zeta, ..., zeta^{N-1}), the graded analogue.  Elliptic: the
    chart covector, built from the theta section of the degree-one
    Heisenberg bundle

        T_j(u) = e^{2 pi i j u / N} e^{pi i j (j-1) tau / N} k^j
                 theta1(u + j tau | N tau),   k = e^{(pi i tau + pi i)/N},

    as W(z) = reverse(T(-z)).  W transforms with the multipliers
    inverse to those of the eigenvector side, so the pairing
    W(z) . r(z) with right eigenvectors r descends to the quotient
    torus, and the row Krylov determinant picks up exactly genus
    zeros per fundamental cell.
    """
    N = geo.N
    if geo.case == RATIONAL:
        def S(z):
            z = np.asarray(z, dtype=complex)
            out = np.zeros(z.shape + (N,), dtype=complex)
            out[..., N - 1] = 1.0
            return out
        return S
    if geo.case == TRIGONOMETRIC:
        def S(z):
            z = np.asarray(z, dtype=complex)
            return np.stack([z ** j for j in range(N)], axis=-1)
        return S
    tau = geo.tau
    kfac = np.exp((1j * np.pi * tau + 1j * np.pi) / N)

    def S(z):
        z = np.asarray(z, dtype=complex)
        u = -z
        cols = []
        for j in range(N):
            pref = np.exp(2j * np.pi * j * u / N) * \
                np.exp(1j * np.pi * j * (j - 1) * tau / N) * kfac ** j
            cols.append(pref * theta1(u + j * tau, N * tau))
        return np.stack(cols[::-1], axis=-1)
    return S


class DivisorChart:
    """The separation-of-variables points of one leaf point."""

    def __init__(self, points, expected, flags=None):
        self.points = list(points)          # list of (z_mu, lambda_mu)
        self.genus = expected
        self.flags = list(flags or [])

    @property
    def generic(self):
        return (not self.flags) and len(self.points) == self.genus

    def z(self, i):
        return self.points[i][0]

    def lam(self, i):
        return self.points[i][1]

    def __len__(self):
        return len(self.points)


def _krylov_values(point, S, zs):
    g = point.evaluate(zs)
    if point.geometry.case == ELLIPTIC:
        g = np.swapaxes(g, -1, -2)     # row Krylov: pair on the left
    v = S(zs)
    cols = [v]
    for _ in range(point.geometry.N - 1):
        v = np.einsum("kij,kj->ki", g, v)
        cols.append(v)
    return np.linalg.det(np.stack(cols, axis=-1))


def _krylov_zeros(point, S):
    """Zeros of the Krylov determinant in the affine chart, by case."""
    geo = point.geometry
    N = geo.N
    d = point.basis.divisor.degree
    K = lambda zs: _krylov_values(point, S, np.asarray(zs, dtype=complex))
    if geo.case == RATIONAL:
        # clear the divisor poles: K * prod (z-a)^{(N-1) m} is a
        # polynomial (S constant, g^j has poles <= j*D)
        pts = point.basis.divisor.points
        R = 2.0 * max([1.0] + [abs(a) for a, _ in pts]) + 1.0
        C = Contour(0.0, R, 512)
        vals = K(C.nodes)
        deg = 0
        for a, m in pts:
            vals = vals * (C.nodes - a) ** ((N - 1) * m)
            deg += (N - 1) * m
        co = np.fft.fft(vals) / C.nodes.size
        tail = np.abs(co[deg + 1:-deg - 1]) if deg + 1 < co.size // 2 else []
        poly = co[:deg + 1] / R ** np.arange(deg + 1)
        return poly_roots(poly)
    if geo.case == TRIGONOMETRIC:
        # K is a polynomial in zeta: window [0, N d] per column of g
        # K carries a structural zeta^(N(N-1)/2) factor from the
        # grading of S; zeros away from the node come in q-orbits that
        # all map to one base point z = zeta^N.  Strip the factor and
        # keep one orbit representative.
        vals = K(geo.contour.nodes)
        n = vals.size
        co = np.fft.fft(vals) / n
        struct = N * (N - 1) // 2
        deg = struct * (N * d + 1)
        poly = co[struct:deg + 1]
        zeros = poly_roots(poly)
        q = geo.q
        reps = []
        for z in zeros:
            if any(min(abs(z * q ** j - o) for j in range(N)) < 1e-7
                   for o in reps):
                continue
            reps.append(complex(z))
        return np.asarray(reps, dtype=complex)
    # elliptic: the row Krylov determinant is quasi-periodic, so a
    # grid scan of one (offset) fundamental cell followed by Newton
    # polish on the true determinant finds all zeros; each candidate
    # is validated by the eigenvector-overlap test.
    from scipy.ndimage import minimum_filter
    tau = geo.tau
    off = 0.013 + 0.007j
    h = 1e-6

    def _validated(z):
        gm = point.evaluate(np.asarray([z]))[0]
        _, rvecs = np.linalg.eig(gm)
        sv = S(np.asarray([z]))[0]
        olap = np.abs(sv @ rvecs) / (
            np.linalg.norm(rvecs, axis=0) * np.linalg.norm(sv) + 1e-300)
        return float(np.min(olap)) < 1e-6

    for ng in (64, 128):
        xs = np.linspace(0.0, 1.0, ng, endpoint=False)
        X, Y = np.meshgrid(xs, xs)
        zs = off + X + tau * Y
        vals = np.abs(K(zs.ravel())).reshape(ng, ng)
        local = (vals == minimum_filter(vals, size=3, mode="wrap"))
        cand = zs[local & (vals < np.median(vals))]
        out = []
        for z in cand:
            z = complex(z)
            for _ in range(60):
                f = complex(K([z]))
                df = complex((K([z + h]) - K([z - h])) / (2 * h))
                if abs(df) < 1e-300:
                    break
                step = f / df
                if abs(step) > 0.2:
                    step = 0.2 * step / abs(step)
                z = z - step
                if abs(step) < 1e-13:
                    break
            if _validated(z):
                z = geo.reduce(z)
                if all(lattice_distance(z - o, tau) > 1e-6 for o in out):
                    out.append(z)
        expected = genus(geo, N, d)
        if len(out) >= expected:
            break
    return np.asarray(out, dtype=complex)


def divisor_points(point, section=None):
    """Compute the separation-of-variables chart of a leaf point.

    At each Krylov zero z_mu the eigenvalue branch is the one whose
    left eigenvector annihilates the frame vector; the pair is then
    checked against adj(g - lambda I) S = 0.
    """
    geo = point.geometry
    S = section or normalization_section(geo)
    expected = genus(geo, geo.N, point.basis.divisor.degree)
    zeros = _krylov_zeros(point, S)
    flags = []
    pts = []
    for z in zeros:
        gm = point.evaluate(np.asarray([z]))[0]
        if geo.case == ELLIPTIC:
            gm = gm.T                  # pair the covector on the left
        sv = S(np.asarray([z]))[0]
        lams, lvecs = np.linalg.eig(gm.T)
        if mutations.active("adjugate_transpose"):
            _, lvecs = np.linalg.eig(gm)        # right eigenvectors
        olap = np.abs(lvecs.T @ sv) / (np.abs(sv).max() + 1e-30)
        i = int(np.argmin(olap))
        lam = lams[i]
        from ..numkernel.roots import adjugate
        A = gm - lam * np.eye(geo.N)
        res = np.abs(adjugate(A) @ sv).max()
        scale = max(np.abs(A).max(), 1e-30) ** (geo.N - 1) * \
            max(np.abs(sv).max(), 1e-30)
        if res > 1e-7 * scale:
            flags.append("adjugate residual %.2e at z=%s" % (res, z))
        if abs(lam) < 1e-10:
            flags.append("lambda ~ 0 at z=%s" % z)
        pts.append((complex(z), complex(lam)))
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i][0] - pts[j][0]) < COINCIDENT_TOL:
                flags.append("coincident points %d,%d" % (i, j))
    if geo.case != TRIGONOMETRIC:    # trig poles sit over the node
        for a, _ in point.basis.divisor.points:
            for z, _l in pts:
                if abs(z - a) < COINCIDENT_TOL:
                    flags.append("divisor point on a pole of g")
    if len(pts) != expected:
        flags.append("found %d points, expected genus %d"
                     % (len(pts), expected))
    return DivisorChart(pts, expected, flags)


def continue_chart(point, chart, newton_steps=30):
    """Re-locate a chart after a small change of the leaf point, by
    Newton continuation from the previous (z_mu, lambda_mu)."""
    geo = point.geometry
    S = normalization_section(geo)
    K = lambda zs: _krylov_values(point, S, np.asarray(zs, dtype=complex))
    h = 1e-7
    new_pts = []
    for z0, lam0 in chart.points:
        z = complex(z0)
        for _ in range(newton_steps):
            f = complex(K([z]))
            df = complex((K([z + h]) - K([z - h])) / (2 * h))
            if abs(df) < 1e-300:
                raise NonGenericDivisor("Krylov derivative vanished")
            step = f / df
            if abs(step) > 0.1:
                step = 0.1 * step / abs(step)
            z = z - step
            if abs(step) < 1e-13:
                break
        gm = point.evaluate(np.asarray([z]))[0]
        lams = np.linalg.eigvals(gm)
        lam = lams[int(np.argmin(np.abs(lams - lam0)))]
        new_pts.append((z, complex(lam)))
    return DivisorChart(new_pts, chart.genus, chart.flags)
