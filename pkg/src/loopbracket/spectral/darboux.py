"""Darboux form of the bracket in separation-of-variables coordinates.

In the coordinate w that trivializes the pairing 1-form (dw = dz/W(z))
the chart is canonical up to a reduction: {z_mu, z_nu} = 0,
{lambda_mu, z_nu} = sign * delta_munu * lambda_mu * W(z_mu), and the
full chart tensor differs from the canonical one by a rank-two
correction v a^T - a v^T.  Here v is the simultaneous scaling direction
of all the lambda_mu — the canonical field generated by the sum of the
w_mu — and a is its conjugate partner, the determinant direction of the
leaf.  For the rational case a = 0 and the chart is canonical on the
nose; for the trigonometric and elliptic cases the pair (v, a) realizes
the constraint pair "fix the product/sum of the z_mu and the
determinant" that separates the symplectic leaves from the full divisor
chart.  The direction a is calibrated numerically at each leaf point
from a handful of auxiliary probe brackets; the calibration residual is
a structural check, since a rank-two model with 2*genus parameters is
falsifiable against the O(genus^2) independent probe pairs.

The global sign is frozen once by the rational N=2 equivalence check.
"""

import numpy as np

from ..geometry import RATIONAL, TRIGONOMETRIC
from ..errors import NonGenericDivisor
from ..sklyanin.bracket import bracket, functional_vector
from ..sklyanin.functionals import LeafPoint, random_functional
from .. import mutations
from .divisor import divisor_points, continue_chart

DARBOUX_SIGN = -1.0


def pairing_weight(geo, z):
    """Reciprocal pairing density W: the pairing 1-form is dz/W(z).

    Rational W = z^2 (double divisor over the puncture), trigonometric
    W = zeta/N (the form dz/z of the nodal base pulled back through
    z = zeta^N), elliptic W = 1 (flat coordinate).
    """
    z = np.asarray(z, dtype=complex)
    if geo.case == RATIONAL:
        return z ** 2
    if geo.case == TRIGONOMETRIC:
        return z / geo.N
    return np.ones_like(z)


def darboux_bracket(chart, i, j, kind, geo=None):
    """Poisson bracket of chart coordinates under the canonical form."""
    if not chart.generic:
        raise NonGenericDivisor("chart flagged non-generic: %s" % chart.flags)
    if kind in ("zz", "ll"):
        return 0.0 + 0.0j
    if kind != "lz":
        raise ValueError("kind must be one of zz, ll, lz")
    if i != j:
        return 0.0 + 0.0j
    sign = DARBOUX_SIGN
    if mutations.active("darboux_sign_flip"):
        sign = -sign
    w = 1.0 if geo is None else complex(pairing_weight(geo, chart.z(i)))
    return sign * chart.lam(i) * w


def tangent_frame(point, n_probe=None, rng_seed=23):
    """Orthonormal coefficient-space frame spanning the symplectic
    directions, from the vector fields of random entry probes."""
    basis = point.basis
    rng = np.random.default_rng(rng_seed)
    n_probe = n_probe or (2 * basis.dim)
    cols = []
    for _ in range(n_probe):
        F = random_functional(point.geometry, rng)
        V = functional_vector(F, point)
        c, _ = basis.fit(V)
        cols.append(c)
    M = np.stack(cols, axis=1)
    U, s, _ = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(s > 1e-9 * s[0]))
    return U[:, :rank]


def _chart_jacobian(point, chart, frame, step):
    """d(chart)/d(frame direction) by Newton continuation, with the
    z rows converted to the canonical coordinate (dw = dz/W)."""
    basis = point.basis
    geo = point.geometry
    gn = len(chart)
    C = np.empty((frame.shape[1], 2 * gn), dtype=complex)
    for s in range(frame.shape[1]):
        chp = continue_chart(LeafPoint(basis, point.coef + step * frame[:, s]),
                             chart)
        chm = continue_chart(LeafPoint(basis, point.coef - step * frame[:, s]),
                             chart)
        for m in range(gn):
            C[s, m] = (chp.z(m) - chm.z(m)) / (2 * step)
            C[s, gn + m] = (chp.lam(m) - chm.lam(m)) / (2 * step)
    for m in range(gn):
        C[:, m] /= complex(pairing_weight(geo, chart.z(m)))
    return C


def _chart_covector(C, df):
    """Solve C x = df for the chart covector of a functional, keeping x
    in the row space of C so contractions restricted to the symplectic
    frame are well defined when the chart is rank-deficient."""
    y, *_ = np.linalg.lstsq(C @ C.T, df, rcond=None)
    return C.T @ y


def _scaling_vector(chart):
    """The simultaneous lambda-scaling direction v, written in the
    canonical (w, lambda) slots of the chart."""
    sign = DARBOUX_SIGN
    if mutations.active("darboux_sign_flip"):
        sign = -sign
    gn = len(chart)
    v = np.zeros(2 * gn, dtype=complex)
    for m in range(gn):
        v[gn + m] = sign * chart.lam(m)
    return v


def _canonical_contract(chart, geo, J1, J2):
    gn = len(chart)
    total = 0.0 + 0.0j
    for m in range(gn):
        lz = darboux_bracket(chart, m, m, "lz", geo=geo)
        lz /= complex(pairing_weight(geo, chart.z(m)))
        total += lz * (J1[gn + m] * J2[m] - J1[m] * J2[gn + m])
    return total


def reduction_correction(point, chart=None, frame=None, step=1e-6,
                         rng_seed=71, n_probe=None):
    """Calibrate the determinant direction a of the rank-two reduction
    term v a^T - a v^T at one leaf point.

    Returns (a, residual) where the residual is the relative least
    squares misfit of the model over the calibration probe pairs; a
    large residual falsifies the rank-two reduction picture.  For the
    rational case a vanishes to finite-difference accuracy.
    """
    geo = point.geometry
    chart = chart or divisor_points(point)
    if not chart.generic:
        raise NonGenericDivisor("chart flagged non-generic: %s" % chart.flags)
    frame = tangent_frame(point) if frame is None else frame
    gn = len(chart)
    if n_probe is None:
        n_probe = 4
        while n_probe * (n_probe - 1) < 8 * gn:
            n_probe += 1
    C = _chart_jacobian(point, chart, frame, step)
    v = _scaling_vector(chart)
    rng = np.random.default_rng(rng_seed)
    fs = [random_functional(geo, rng) for _ in range(n_probe)]
    Js = [_chart_covector(C, _frame_derivative(F, point, frame, step))
          for F in fs]
    rows, rhs = [], []
    for i in range(n_probe):
        for j in range(i + 1, n_probe):
            direct = bracket(fs[i], fs[j], point)
            can = _canonical_contract(chart, geo, Js[i], Js[j])
            rows.append((Js[i] @ v) * Js[j] - (Js[j] @ v) * Js[i])
            rhs.append(direct - can)
    rows = np.array(rows)
    rhs = np.array(rhs)
    a, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    misfit = np.linalg.norm(rows @ a - rhs)
    scale = max(np.linalg.norm(rhs), 1e-6 * (1.0 + point.contour_norm() ** 2))
    return a, float(misfit / scale)


def _frame_derivative(F, point, frame, step):
    geo = point.geometry
    basis = point.basis
    out = np.empty(frame.shape[1], dtype=complex)
    for s in range(frame.shape[1]):
        fp = F.value_of_samples(
            geo, LeafPoint(basis, point.coef + step * frame[:, s]).samples)
        fm = F.value_of_samples(
            geo, LeafPoint(basis, point.coef - step * frame[:, s]).samples)
        out[s] = (fp - fm) / (2 * step)
    return out


def chain_rule_bracket(F1, F2, point, chart=None, frame=None,
                       correction=None, step=1e-6):
    """{F1, F2} evaluated through the Darboux chart.

    Finite-difference Jacobians of the functional values and of the
    chart coordinates are taken along a symplectic tangent frame; the
    chart is Newton-continued to the perturbed points so the branches
    match.  The canonical contraction is corrected by the rank-two
    reduction term; pass correction=(a, residual) from
    reduction_correction to reuse a calibration, or correction=False to
    evaluate the raw canonical form.
    """
    geo = point.geometry
    chart = chart or divisor_points(point)
    if not chart.generic:
        raise NonGenericDivisor("chart flagged non-generic: %s" % chart.flags)
    frame = tangent_frame(point) if frame is None else frame
    if correction is None:
        correction = reduction_correction(point, chart, frame, step)
    C = _chart_jacobian(point, chart, frame, step)
    J1 = _chart_covector(C, _frame_derivative(F1, point, frame, step))
    J2 = _chart_covector(C, _frame_derivative(F2, point, frame, step))
    total = _canonical_contract(chart, geo, J1, J2)
    if correction is not False:
        a = correction[0]
        v = _scaling_vector(chart)
        total += (J1 @ v) * (a @ J2) - (J1 @ a) * (v @ J2)
    return total
