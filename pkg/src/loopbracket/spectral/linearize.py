"""Action-angle test: the divisor chart linearizes Hamiltonian flows.

For a trajectory g(t) generated by a spectral Hamiltonian, the sums of
abelian integrals

    Q_i(t) = sum_mu  int_{z0}^{z_mu(t)}  (1/lambda) (d lambda / d H_i) dw

(dw = dz / W(z) is the canonical coordinate differential of the
pairing, the same W that appears in the Darboux form)

evolve linearly in t.  The integrand is obtained by implicit
differentiation of F(z, lambda, H) = 0:

    d lambda / d H_i = - (dF/dH_i) / (dF/dlambda),

and dF/dH_i = (-lambda)^(N-k) f_i(z) when H_i multiplies the scalar
basis element f_i inside the coefficient c_k.  The paths are polygonal,
integrated segment by segment with Gauss-Legendre nodes while the sheet
lambda(z) is Newton-tracked along the nodes; a segment that runs into a
branch point (dF/dlambda -> 0) is re-routed around it, and a path that
cannot be routed raises PathThroughBranchPoint with the offending
endpoints in the message.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

from ..errors import PathThroughBranchPoint, DegenerateInput
from .curve import spectral_curve, HamiltonianSet
from .darboux import pairing_weight, tangent_frame
from .divisor import divisor_points, continue_chart


def leaf_hamiltonian_directions(point, frame=None, step=1e-6, tol=1e-6):
    """Basis of the leaf-tangent directions in Hamiltonian space.

    Moving the leaf point sweeps only a genus-dimensional family of
    spectral curves; the remaining coefficient directions are Casimir
    (off-leaf) variations, and only the leaf-tangent variations carry
    the linearization property.  The image of the leaf tangent under
    d(H_i) is computed by finite differences and returned as a matrix
    T (n_H x g) whose columns form a basis canonical for the subspace
    itself (pivoted projection with a phase convention), so two leaf
    points on the same curve produce matching direction bases.
    """
    if frame is None:
        frame = tangent_frame(point)
    cols = []
    for c in frame.T:
        hp = HamiltonianSet(
            spectral_curve(point.replace(point.coef + step * c))).values
        hm = HamiltonianSet(
            spectral_curve(point.replace(point.coef - step * c))).values
        cols.append((hp - hm) / (2 * step))
    M = np.stack(cols, axis=1)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol * max(s[0], 1e-30)))
    P = U[:, :r] @ U[:, :r].conj().T
    # canonical basis: greedy Gram-Schmidt over the projections of the
    # unit vectors, in fixed index order, with a positive-entry phase
    basis = []
    for j in range(P.shape[0]):
        v = P[:, j].copy()
        for b in basis:
            v -= (b.conj() @ v) * b
        nv = np.linalg.norm(v)
        if nv > 0.3:
            v /= nv
            kmax = int(np.argmax(np.abs(v)))
            v *= np.abs(v[kmax]) / v[kmax]
            basis.append(v)
        if len(basis) == r:
            break
    return np.stack(basis, axis=1)


class LinearizingCoords:
    """Q_i(t) along a trajectory, with the linear fit Q ~ a + b t."""

    def __init__(self, times, Q, labels):
        self.times = np.asarray(times, dtype=float)
        self.Q = np.asarray(Q, dtype=complex)   # (n_times, n_H)
        self.labels = labels
        V = np.stack([np.ones_like(self.times), self.times], axis=1)
        sol, _, _, _ = np.linalg.lstsq(V, self.Q, rcond=None)
        self.intercepts = sol[0]
        self.slopes = sol[1]
        misfit = np.abs(V @ sol - self.Q)
        self.fit_residual = float(np.max(misfit)) / \
            max(1.0, float(np.max(np.abs(self.Q))))


def _route(za, zb, avoid, clearance=1e-3, step=0.35):
    """Polygonal vertices from za to zb keeping clear of given points.

    A straight segment that passes within `clearance` of an avoided
    point gets a detour vertex pushed perpendicular off that point by
    `step` (vertices themselves are perturbed off the avoided set).
    """
    verts = [complex(za), complex(zb)]
    for _ in range(8):
        bent = False
        out = [verts[0]]
        for p, q in zip(verts[:-1], verts[1:]):
            seg = q - p
            L = abs(seg)
            for a in avoid:
                if L < 1e-12:
                    continue
                s = np.clip(((a - p) / seg).real, 0.0, 1.0)
                foot = p + s * seg
                if abs(foot - a) < clearance and 0.0 < s < 1.0:
                    n = 1j * seg / L
                    side = n if ((a - p) / seg).imag < 0 else -n
                    out.append(a + side * step)
                    bent = True
                    break
            out.append(q)
        verts = out
        if not bent:
            return verts
    raise PathThroughBranchPoint(
        "could not route a path from %s to %s" % (za, zb))


def _segment_quad(curve, terms, za, zb, lam, order=16, max_len=0.12):
    """Integrate the Q integrands over [za, zb] on the sheet through
    (za, lam); returns (increments, lambda at zb)."""
    xs, ws = leggauss(order)
    n_sub = max(1, int(np.ceil(abs(zb - za) / max_len)))
    inc = np.zeros(len(terms), dtype=complex)
    for s in range(n_sub):
        pa = za + (zb - za) * s / n_sub
        pb = za + (zb - za) * (s + 1) / n_sub
        mid, half = 0.5 * (pa + pb), 0.5 * (pb - pa)
        vals = np.zeros((len(terms), order), dtype=complex)
        for n in range(order):
            z = mid + half * xs[n]
            lam = curve.lam_continue(z, lam)
            dF = complex(curve.dF_dlam(z, lam))
            W = complex(pairing_weight(curve.geo, z))
            for m, (k, f) in enumerate(terms):
                dFdH = (-lam) ** (curve.N - k) * complex(f(z))
                vals[m, n] = -(dFdH / dF) / (lam * W)
        inc += (vals @ ws) * half
        lam = curve.lam_continue(pb, lam)
    return inc, lam


def _path_quad(curve, terms, za, zb, lam, avoid, order=16, max_len=0.12):
    """Route around branch points discovered on the fly: a
    PathThroughBranchPoint during tracking adds the failing location to
    the avoided set and re-routes, a few times before giving up."""
    avoid = list(avoid)
    for attempt in range(6):
        verts = _route(za, zb, avoid)
        inc = np.zeros(len(terms), dtype=complex)
        cur = lam
        try:
            for p, q in zip(verts[:-1], verts[1:]):
                part, cur = _segment_quad(curve, terms, p, q, cur,
                                          order=order, max_len=max_len)
                inc += part
            return inc, cur
        except PathThroughBranchPoint as err:
            # the message carries "... at z=(...)"; fall back to
            # perturbing the whole route if it cannot be parsed
            txt = str(err)
            try:
                bad = complex(txt.split("z=")[1].rstrip(")").strip("() "))
            except (IndexError, ValueError):
                bad = 0.5 * (za + zb) + 1e-3 * (1 + 1j) * (attempt + 1)
            avoid.append(bad)
    raise PathThroughBranchPoint(
        "path %s -> %s blocked after re-routing near %s"
        % (za, zb, avoid[-3:]))


def linearizing_coords(traj, base_point=None, directions="leaf", order=16,
                       curve_tol=1e-7):
    """Q_i(t) for every snapshot of a Hamiltonian-flow trajectory.

    The spectral curve is read off the first snapshot and required to
    be constant along the trajectory (relative drift of the Hamiltonian
    values below curve_tol); the divisor chart of the first snapshot is
    Newton-continued from snapshot to snapshot, and each Q_i advances by
    the path integral between consecutive divisor positions, plus one
    initial leg from the base point z0.

    directions: "leaf" (default) evaluates Q along the leaf-tangent
    Hamiltonian directions of leaf_hamiltonian_directions — the
    independent Hamiltonians whose flows the chart linearizes; a matrix
    (n_H x m) evaluates the given direction combinations; None returns
    the raw per-coefficient integrals (Casimir directions included,
    which are not expected to linearize).
    """
    p0 = traj.points[0]
    curve = spectral_curve(p0)
    hams = HamiltonianSet(curve)
    scale = max(1.0, float(np.max(np.abs(hams.values))))
    end_vals = HamiltonianSet(spectral_curve(traj.points[-1])).values
    drift = float(np.max(np.abs(end_vals - hams.values)))
    if drift > curve_tol * scale:
        raise DegenerateInput(
            "spectral curve drifts by %.3e along the trajectory" % drift)

    if isinstance(directions, str) and directions == "leaf":
        T = leaf_hamiltonian_directions(p0)
    elif directions is None:
        T = None
    else:
        T = np.asarray(directions, dtype=complex)
    indices = list(range(len(hams)))
    terms = [hams.basis_function(i) for i in indices]

    geo = p0.geometry
    avoid = [a for a, _ in p0.basis.divisor.points]
    if base_point is None:
        base_point = geo.contour.center + \
            0.75 * geo.contour.radius * np.exp(0.37j)

    chart = divisor_points(p0)
    if not chart.generic:
        raise DegenerateInput(
            "initial divisor chart is non-generic: %s" % chart.flags)
    g = len(chart)
    Q = np.zeros((len(traj.points), len(indices)), dtype=complex)
    # initial legs z0 -> z_mu(0), tracked backwards from the known sheet
    q0 = np.zeros(len(indices), dtype=complex)
    for mu in range(g):
        back, _ = _path_quad(curve, terms, chart.z(mu), base_point,
                             chart.lam(mu), avoid, order=order)
        q0 -= back
    Q[0] = q0
    for j in range(1, len(traj.points)):
        nxt = continue_chart(traj.points[j], chart)
        inc = np.zeros(len(indices), dtype=complex)
        for mu in range(g):
            for ml in (0.12, 0.04, 0.012, 0.004):
                part, lam_end = _path_quad(curve, terms, chart.z(mu),
                                           nxt.z(mu), chart.lam(mu),
                                           avoid, order=order, max_len=ml)
                if abs(lam_end - nxt.lam(mu)) <= \
                        1e-6 * max(1.0, abs(nxt.lam(mu))):
                    break
            else:
                raise PathThroughBranchPoint(
                    "sheet tracked to %s but the chart holds %s at z=%s"
                    % (lam_end, nxt.lam(mu), nxt.z(mu)))
            inc += part
        Q[j] = Q[j - 1] + inc
        chart = nxt
    if T is not None:
        Q = Q @ T
        labels = ["leaf direction %d" % a for a in range(T.shape[1])]
    else:
        labels = [hams.labels[i] for i in indices]
    out = LinearizingCoords(traj.times, Q, labels)
    out.directions = T
    return out
