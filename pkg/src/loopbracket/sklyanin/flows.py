"""Flow integration on the leaf and the drift diagnostics behind the
leaf-invariance checks (pole locations and determinant roots are frozen
along dressing flows)."""

import numpy as np

from ..numkernel import Contour, contour_quad
from ..numkernel.roots import poly_roots
from ..errors import StepRejected, DegenerateInput
from ..geometry import RATIONAL, TRIGONOMETRIC
from .functionals import LeafPoint


class FlowTrajectory:
    """Time grid, leaf snapshots and integrator statistics."""

    def __init__(self, times, points, descriptor, stats):
        self.times = np.asarray(times, dtype=float)
        self.points = points
        self.descriptor = descriptor
        self.stats = stats

    def __len__(self):
        return len(self.points)


def integrate_flow(p0, field, t_final, dt, descriptor="",
                   record_every=10, refit_tol=1e-8):
    """Classical 4th-order one-step integration in coefficient space.

    field: LeafPoint -> samples of g_dot on the contour.  The field
    value is re-expanded in the section basis every evaluation; a
    re-expansion residual above refit_tol (relative to the field size)
    means the field left the modelled leaf and raises StepRejected.
    """
    if dt > t_final / 10 + 1e-15:
        raise ValueError("dt must be at most t_final/10")
    basis = p0.basis
    stats = {"max_refit_residual": 0.0, "steps": 0, "field_evals": 0}

    def rhs(coef, t):
        point = LeafPoint(basis, coef)
        samples = field(point)
        coef_dot, resid = basis.fit(samples)
        scale = max(1.0, float(np.max(np.abs(samples))))
        stats["max_refit_residual"] = max(stats["max_refit_residual"],
                                          resid / scale)
        stats["field_evals"] += 1
        if resid > refit_tol * scale:
            raise StepRejected(
                "field re-expansion residual %.3e at t=%.6f" % (resid, t),
                time=t, residual=resid)
        return coef_dot

    n_steps = int(round(t_final / dt))
    times = [0.0]
    points = [p0]
    coef = p0.coef.copy()
    t = 0.0
    for i in range(n_steps):
        k1 = rhs(coef, t)
        k2 = rhs(coef + 0.5 * dt * k1, t + 0.5 * dt)
        k3 = rhs(coef + 0.5 * dt * k2, t + 0.5 * dt)
        k4 = rhs(coef + dt * k3, t + dt)
        coef = coef + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (i + 1) * dt
        stats["steps"] += 1
        if (i + 1) % record_every == 0 or i == n_steps - 1:
            times.append(t)
            points.append(LeafPoint(basis, coef))
    return FlowTrajectory(times, points, descriptor, stats)


# ------------------------------------------------------------------
# drift diagnostics


def pole_location(point, center, radius=0.08, max_order=3, nodes=128):
    """Moment-ratio estimate of the pole position inside a small circle.

    With Laurent moments mu_k = (1/2 pi i) oint z^k g dz around the
    circle, a pole at a contributes mu_{k+1} ~ a mu_k term by term, so
    sum_k mu_{k+1} mu_k^* / sum_k |mu_k|^2 estimates a robustly across
    pole orders.
    """
    C = Contour(center, radius, max(64, nodes))
    g = point.evaluate(C.nodes)
    mus = []
    for k in range(max_order + 1):
        integ = (C.nodes ** k)[:, None, None] * g
        mus.append(contour_quad(integ, C, check=False))
    num = 0.0 + 0.0j
    den = 0.0
    for k in range(max_order):
        num += np.sum(mus[k + 1] * np.conj(mus[k]))
        den += np.sum(np.abs(mus[k]) ** 2)
    if den < 1e-28:
        return complex(center)  # no pole detected; report the center
    return complex(num / den)


def det_root_seeds(point):
    """Initial det-root positions for a leaf point, by case.

    Rational: clear the divisor poles off det g, read the polynomial
    coefficients from an FFT on a circle enclosing the divisor, and
    factor.  Trigonometric: det g is a graded polynomial in zeta, read
    it from the unit-circle FFT.  Elliptic: coarse grid scan of
    |det g| over the fundamental domain followed by Newton polish.
    """
    geo = point.basis.geometry
    N = geo.N
    if geo.case == RATIONAL:
        pts = point.basis.divisor.points
        R = 2.0 * max([1.0] + [abs(a) for a, _ in pts]) + 1.0
        C = Contour(0.0, R, 256)
        dets = np.linalg.det(point.evaluate(C.nodes))
        clear = np.ones_like(C.nodes)
        deg = 0
        for a, m in pts:
            clear *= (C.nodes - a) ** (N * m)
            deg += N * m
        vals = dets * clear
        coeffs = np.fft.fft(vals) / C.nodes.size
        # fft bin k of samples on |z| = R holds p_k R^k
        poly = coeffs[:deg + 1] / R ** np.arange(deg + 1)
        return poly_roots(poly)
    if geo.case == TRIGONOMETRIC:
        vals = np.linalg.det(point.samples)
        n = vals.size
        coeffs = np.fft.fft(vals) / n
        deg = N * N * point.basis.divisor.degree
        poly = coeffs[:deg + 1].copy()
        tail = np.abs(np.delete(coeffs, np.arange(deg + 1)))
        if tail.size and tail.max() > 1e-8 * max(1.0, np.abs(poly).max()):
            raise DegenerateInput("det is not a graded polynomial of the "
                                  "expected degree")
        return poly_roots(poly)
    # elliptic: scan the fundamental domain
    tau = geo.tau
    ng = 48
    xs = np.linspace(0.02, 0.98, ng)
    ys = np.linspace(0.02, 0.98, ng)
    X, Y = np.meshgrid(xs, ys)
    zs = X + tau * Y
    dets = np.abs(np.linalg.det(point.evaluate(zs.ravel()))).reshape(ng, ng)
    from scipy.ndimage import minimum_filter
    local = (dets == minimum_filter(dets, size=5))
    cand = zs[local & (dets < np.median(dets) * 0.2)]
    roots = det_root_positions(point, initial_roots=cand)
    # dedupe
    out = []
    for r in roots:
        if all(abs(r - o) > 1e-5 for o in out):
            out.append(r)
    return np.asarray(out, dtype=complex)


def det_root_positions(point, initial_roots=None, newton_steps=12):
    """Roots of det g(z) near given initial positions, polished by
    Newton with a central finite-difference derivative."""
    roots = np.asarray(initial_roots, dtype=complex).copy()
    h = 1e-6

    def det_at(z):
        return np.linalg.det(point.evaluate(np.atleast_1d(z)))[0]

    for i in range(roots.size):
        z = roots[i]
        for _ in range(newton_steps):
            f = det_at(z)
            df = (det_at(z + h) - det_at(z - h)) / (2 * h)
            if abs(df) < 1e-300:
                break
            step = f / df
            if abs(step) > 0.5:
                step = 0.5 * step / abs(step)
            z = z - step
            if abs(step) < 1e-13:
                break
        roots[i] = z
    return roots


def drift_report(traj, pole_centers, det_roots0):
    """Max pole-location and det-root drift along a trajectory."""
    base_poles = [pole_location(traj.points[0], c) for c in pole_centers]
    pole_drift = 0.0
    det_drift = 0.0
    roots_prev = np.asarray(det_roots0, dtype=complex)
    for pt in traj.points[1:]:
        for c, p0 in zip(pole_centers, base_poles):
            p = pole_location(pt, c)
            pole_drift = max(pole_drift, abs(p - p0))
        roots = det_root_positions(pt, initial_roots=roots_prev)
        det_drift = max(det_drift,
                        float(np.max(np.abs(roots - det_roots0))))
        roots_prev = roots
    return {"pole_drift": float(pole_drift), "det_root_drift": float(det_drift)}
