"""Polynomial root finding and matrix adjugates."""

import numpy as np

from ..errors import DegenerateInput

# roots closer than this are clustered and reported with multiplicity
CLUSTER_DISTANCE = 1e-7


def poly_roots(coeffs, cluster=True, residual_tol=1e-9):
    """All roots (with multiplicity) of a complex polynomial.

    coeffs are ascending: p(z) = coeffs[0] + coeffs[1] z + ...
    Leading coefficients below 1e-13 of the largest are trimmed before
    the companion-matrix eigenvalue computation.  Each root is polished
    by a few Newton steps and must satisfy |p(root)| <= residual_tol
    times the coefficient scale.

    Roots closer than CLUSTER_DISTANCE are merged to their centroid and
    repeated with multiplicity, since downstream divisor extraction
    treats near-coincident points as a non-generic signal.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0 or not np.any(np.abs(c) > 0):
        raise DegenerateInput("all polynomial coefficients vanish")
    scale = np.max(np.abs(c))
    # trim negligible leading coefficients
    keep = np.nonzero(np.abs(c) > 1e-13 * scale)[0]
    c = c[: keep[-1] + 1]
    if c.size == 1:
        return np.array([], dtype=complex)
    roots = np.roots(c[::-1])
    # Newton polish
    dc = c[1:] * np.arange(1, c.size)
    for _ in range(3):
        p = np.polyval(c[::-1], roots)
        dp = np.polyval(dc[::-1], roots)
        safe = np.abs(dp) > 1e-300
        step = np.zeros_like(roots)
        step[safe] = p[safe] / dp[safe]
        # don't let Newton jump wildly near multiple roots
        step[np.abs(step) > 1.0] = 0.0
        roots = roots - step
    res = np.abs(np.polyval(c[::-1], roots))
    res_scale = scale * np.maximum(1.0, np.abs(roots)) ** (c.size - 1)
    bad = res > residual_tol * res_scale
    if np.any(bad):
        raise DegenerateInput(
            "root residual %.3e exceeds tolerance" % float(np.max(res / res_scale)))
    if cluster and roots.size > 1:
        roots = _cluster(roots)
    return np.sort_complex(roots)


def _cluster(roots):
    """Merge roots closer than CLUSTER_DISTANCE, keeping multiplicity."""
    used = np.zeros(roots.size, dtype=bool)
    out = []
    for i in range(roots.size):
        if used[i]:
            continue
        group = [i]
        for j in range(i + 1, roots.size):
            if not used[j] and abs(roots[i] - roots[j]) < CLUSTER_DISTANCE:
                group.append(j)
                used[j] = True
        centroid = np.mean(roots[group])
        out.extend([centroid] * len(group))
    return np.array(out, dtype=complex)


def adjugate(M):
    """Adjugate (transposed cofactor matrix): M @ adj(M) = det(M) I.

    Computed through the Faddeev-LeVerrier recursion, which is
    polynomial in the entries and therefore well defined for singular M
    (unlike det(M) inv(M)).
    """
    M = np.asarray(M, dtype=complex)
    n = M.shape[-1]
    if M.shape[-2] != n:
        raise ValueError("adjugate requires a square matrix")
    eye = np.eye(n, dtype=complex)
    if M.ndim > 2:
        eye = np.broadcast_to(eye, M.shape).copy()
    # Faddeev-LeVerrier: M_1 = M, c_k = -tr(M M_{k-1})/k ...,
    # adj(M) = (-1)^{n-1} (M^{n-1} + c_1 M^{n-2} + ... + c_{n-1} I)
    B = eye.copy()
    c = 1.0 + 0.0j
    poly = eye.copy()  # accumulates M^{n-1} + c_1 M^{n-2} + ...
    for k in range(1, n):
        B = M @ B
        c = -np.trace(B, axis1=-2, axis2=-1) / k
        if M.ndim > 2:
            B = B + c[..., None, None] * np.broadcast_to(np.eye(n), M.shape)
        else:
            B = B + c * np.eye(n)
        poly = B
    return (-1.0) ** (n - 1) * poly
