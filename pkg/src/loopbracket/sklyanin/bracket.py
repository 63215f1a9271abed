"""The bracket engine: derivatives, the quadratic bracket in its
plus-projection form, the R-operator cross-check form, Hamiltonian and
dressing vector fields.

Conventions fixed here (and locked by the antisymmetry and Darboux
checks): the bracket of psi and phi is

    {psi, phi}(g) = < P+(D psi) - Ad_g P+(D' psi), D phi >

with left/right derivatives D psi = g X, D' psi = X g.  The
Ad_g-conjugated term never needs g^{-1}: inside the pairing,
< Ad_g P+(X g), g Y > = closed integral of tr(g P+(X g) Y) * weight.
"""

import numpy as np

from .functionals import CoordinateFunctional
from ..errors import WrongSubalgebra
from .. import mutations


def left_derivative(F, point):
    """D psi_X = g X (samples on the contour)."""
    return point.samples @ F.kernel(point.geometry)


def right_derivative(F, point):
    """D' psi_X = X g."""
    return F.kernel(point.geometry) @ point.samples


def _pair_weighted(geometry, samples_product):
    from ..numkernel import contour_quad
    w = geometry.weight(geometry.contour.nodes)
    integ = np.einsum("kii->k", samples_product) * w
    return contour_quad(integ, geometry.contour, check=False)


def bracket(F1, F2, point, cross_check=False):
    """{psi_{X1}, psi_{X2}} at the leaf point.

    cross_check=True also evaluates the complementary-projection form
    < -P-(D psi) + Ad_g P-(D' psi), D phi > and returns
    (value, discrepancy).
    """
    geo = point.geometry
    g = point.samples
    X1 = F1.kernel(geo)
    X2 = F2.kernel(geo)
    spec1 = F1.singular_spec()
    D1 = g @ X1
    D1p = X1 @ g
    P1, M1 = geo.split(D1, singular_spec=spec1)
    P1p, M1p = geo.split(D1p, singular_spec=spec1)
    if mutations.active("drop_projection"):
        P1 = mutations.drop_constant_term(geo, P1)
    # t1 = < P+(D1), D2 >,  t2 = < Ad_g P+(D'1), D2 > = oint tr(g P1p X2) w
    t1 = _pair_weighted(geo, P1 @ (g @ X2))
    t2 = _pair_weighted(geo, g @ P1p @ X2)
    value = t1 - t2
    if not cross_check:
        return value
    # complementary form: -< P-(D1), D2 > + < Ad_g P-(D'1), D2 >
    s1 = _pair_weighted(geo, M1 @ (g @ X2))
    s2 = _pair_weighted(geo, g @ M1p @ X2)
    return value, abs((-s1 + s2) - value)


def bracket_r_form(F1, F2, point):
    """Independent evaluation through the R operator:
    (1/2) < R(D1), D2 > - (1/2) < R(D'1), D'2 >."""
    geo = point.geometry
    g = point.samples
    X1, X2 = F1.kernel(geo), F2.kernel(geo)
    D1, D2 = g @ X1, g @ X2
    D1p, D2p = X1 @ g, X2 @ g
    R1 = geo.r_apply(D1, singular_spec=F1.singular_spec())
    R1p = geo.r_apply(D1p, singular_spec=F1.singular_spec())
    return 0.5 * _pair_weighted(geo, R1 @ D2) \
        - 0.5 * _pair_weighted(geo, R1p @ D2p)


def bracket_scale(F1, F2, point, value=None):
    """Tolerance scale (1 + |{F1,F2}| + ||g||^2): the bracket is
    quadratic in g."""
    v = 0.0 if value is None else abs(value)
    return 1.0 + v + point.contour_norm() ** 2


def hamiltonian_vector(point, k, phi, phi_spec=((0.0, 1),)):
    """Lax field of H_{k,phi}(g) = oint phi(z) tr(g^k) dz/(2 pi i):

        g_dot = [P+(M), g],   M = k phi(z) g^k / weight(z)

    (M is the left=right derivative of H, so the general Hamiltonian
    field collapses to a commutator).  phi: callable scalar weight with
    singularities inside the disk described by phi_spec.
    """
    geo = point.geometry
    g = point.samples
    z = geo.contour.nodes
    gk = g.copy()
    for _ in range(k - 1):
        gk = gk @ g
    M = (k * phi(z) / geo.weight(z))[:, None, None] * gk
    spec = tuple(phi_spec)
    PM, _ = geo.split(M, singular_spec=spec)
    return PM @ g - g @ PM


def hamiltonian_value(point, k, phi):
    from ..numkernel import contour_quad
    g = point.samples
    z = point.geometry.contour.nodes
    gk = g.copy()
    for _ in range(k - 1):
        gk = gk @ g
    integ = np.einsum("kii->k", gk) * phi(z)
    return contour_quad(integ, point.geometry.contour, check=False)


def functional_vector(F, point):
    """Hamiltonian vector field of a coordinate functional:
    V = (P+(D psi) - Ad_g P+(D' psi)) g = P+(D psi) g - g P+(D' psi)."""
    geo = point.geometry
    g = point.samples
    X = F.kernel(geo)
    spec = F.singular_spec()
    P, _ = geo.split(g @ X, singular_spec=spec)
    Pp, _ = geo.split(X @ g, singular_spec=spec)
    return P @ g - g @ Pp


def dressing_vector(point, xi, sign, xi_spec=((0.0, 2),), check_tol=1e-10):
    """Infinitesimal dressing field.

        plus:   g_dot = (Ad_g xi_+)_-  g
        minus:  g_dot = (Ad_g xi_-)_+  g

    xi: samples on the contour, required to lie in the indicated
    subalgebra up to check_tol (relative).  xi_spec bounds the inside
    singularities of Ad_g xi for the elliptic matching.
    """
    geo = point.geometry
    g = point.samples
    plus, minus = geo.split(xi, singular_spec=xi_spec)
    norm = max(np.max(np.abs(xi)), 1e-30)
    if sign == "plus":
        if np.max(np.abs(minus)) > check_tol * norm:
            raise WrongSubalgebra(
                "xi has a minus component of relative size %.2e"
                % (np.max(np.abs(minus)) / norm))
    elif sign == "minus":
        if np.max(np.abs(plus)) > check_tol * norm:
            raise WrongSubalgebra(
                "xi has a plus component of relative size %.2e"
                % (np.max(np.abs(plus)) / norm))
    else:
        raise ValueError("sign must be 'plus' or 'minus'")
    ginv = np.linalg.inv(g)
    ad = g @ xi @ ginv
    if mutations.active("unprojected_dressing"):
        return ad @ g
    p, m = geo.split(ad, singular_spec=xi_spec)
    return (m if sign == "plus" else p) @ g
