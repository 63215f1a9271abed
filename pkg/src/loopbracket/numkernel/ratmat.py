"""Matrix-valued rational functions in pole / principal-part form.

A RationalMatrix is

    M(z) = sum_k P_k z^k  +  sum_i sum_{j=1}^{m_i} C_{i,j} / (z - a_i)^j

with matrix coefficients.  Keeping the poles explicit (instead of dense
samples or a common-denominator numerator) makes residue extraction and
the plus/minus splitting exact: they just select terms.  Products are
re-expanded in the same form through Taylor shifts and closed-form
partial fractions, so the class is closed under the ring operations.
"""

import numpy as np
from math import comb

from ..errors import PoleEvaluation, SizeMismatch

# evaluation closer to a pole than guard * (unit scale) is refused
POLE_GUARD = 1e-6


def _as_coeffs(arr, N):
    a = np.asarray(arr, dtype=complex)
    if a.ndim == 2:
        a = a[None]
    if a.shape[1:] != (N, N):
        raise SizeMismatch("coefficient block shape %s != (%d, %d)" %
                           (a.shape[1:], N, N))
    return a


def _trim_poly(p):
    """Drop exactly-zero leading (highest-power) coefficient blocks."""
    deg = p.shape[0] - 1
    while deg > 0 and not np.any(p[deg]):
        deg -= 1
    return p[: deg + 1]


def _taylor_shift(p, a):
    """Coefficients of p in powers of (z - a); p ascending in z."""
    n = p.shape[0]
    q = np.zeros_like(p)
    for k in range(n):
        for j in range(k, n):
            q[k] += comb(j, k) * a ** (j - k) * p[j]
    return q


class RationalMatrix:

    def __init__(self, N, poly=None, poles=None):
        self.N = int(N)
        if poly is None:
            poly = np.zeros((1, N, N), dtype=complex)
        self.poly = _trim_poly(_as_coeffs(poly, self.N))
        self.poles = {}
        if poles:
            for a, parts in poles.items():
                parts = _as_coeffs(parts, self.N)
                # drop exactly-zero highest orders
                m = parts.shape[0]
                while m > 0 and not np.any(parts[m - 1]):
                    m -= 1
                if m:
                    self.poles[complex(a)] = parts[:m].copy()

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, mat):
        mat = np.asarray(mat, dtype=complex)
        return cls(mat.shape[0], poly=mat[None])

    @classmethod
    def identity(cls, N):
        return cls.constant(np.eye(N))

    @classmethod
    def monomial(cls, N, power, mat=None):
        """mat * z**power (power may be negative: pole at 0)."""
        if mat is None:
            mat = np.eye(N)
        mat = np.asarray(mat, dtype=complex)
        if power >= 0:
            poly = np.zeros((power + 1, N, N), dtype=complex)
            poly[power] = mat
            return cls(N, poly=poly)
        parts = np.zeros((-power, N, N), dtype=complex)
        parts[-power - 1] = mat
        return cls(N, poles={0.0: parts})

    @classmethod
    def cauchy(cls, mat, w):
        """mat / (z - w): the basic Cauchy kernel."""
        mat = np.asarray(mat, dtype=complex)
        return cls(mat.shape[0], poles={complex(w): mat[None]})

    # -- basic queries ------------------------------------------------

    @property
    def pole_points(self):
        return sorted(self.poles.keys(), key=lambda a: (a.real, a.imag))

    def pole_order(self, a):
        for b, parts in self.poles.items():
            if abs(b - a) < 1e-12:
                return parts.shape[0]
        return 0

    def residue(self, a):
        """First-order principal coefficient at a (zero matrix if none)."""
        for b, parts in self.poles.items():
            if abs(b - a) < 1e-12:
                return parts[0].copy()
        return np.zeros((self.N, self.N), dtype=complex)

    def eval(self, z, guard=POLE_GUARD):
        """Evaluate at z (scalar or array)."""
        z = np.asarray(z, dtype=complex)
        scalar_in = (z.ndim == 0)
        z = np.atleast_1d(z)
        for a in self.poles:
            if np.any(np.abs(z - a) < guard):
                raise PoleEvaluation("evaluation within %g of pole %s"
                                     % (guard, a))
        out = np.zeros(z.shape + (self.N, self.N), dtype=complex)
        # Horner on the polynomial part
        for k in range(self.poly.shape[0] - 1, -1, -1):
            out = out * z[..., None, None] + self.poly[k]
        for a, parts in self.poles.items():
            inv = 1.0 / (z - a)
            acc = np.zeros_like(out)
            for j in range(parts.shape[0] - 1, -1, -1):
                acc = (acc + parts[j]) * inv[..., None, None]
            out = out + acc
        return out[0] if scalar_in else out

    def trace(self):
        tr_poly = np.trace(self.poly, axis1=1, axis2=2).reshape(-1, 1, 1)
        tr_poles = {a: np.trace(p, axis1=1, axis2=2).reshape(-1, 1, 1)
                    for a, p in self.poles.items()}
        return RationalMatrix(1, poly=tr_poly, poles=tr_poles)

    def derivative(self):
        n = self.poly.shape[0]
        if n > 1:
            dp = self.poly[1:] * np.arange(1, n).reshape(-1, 1, 1)
        else:
            dp = np.zeros((1, self.N, self.N), dtype=complex)
        dpoles = {}
        for a, parts in self.poles.items():
            m = parts.shape[0]
            d = np.zeros((m + 1, self.N, self.N), dtype=complex)
            for j in range(1, m + 1):
                d[j] = -j * parts[j - 1]
            dpoles[a] = d
        return RationalMatrix(self.N, poly=dp, poles=dpoles)

    def transpose(self):
        return RationalMatrix(
            self.N, poly=np.swapaxes(self.poly, 1, 2),
            poles={a: np.swapaxes(p, 1, 2) for a, p in self.poles.items()})

    def norm(self):
        """Crude magnitude: max coefficient modulus."""
        m = float(np.max(np.abs(self.poly))) if self.poly.size else 0.0
        for p in self.poles.values():
            m = max(m, float(np.max(np.abs(p))))
        return m

    # -- linear structure ---------------------------------------------

    def __add__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if other.N != self.N:
            raise SizeMismatch("rank %d vs %d" % (self.N, other.N))
        n = max(self.poly.shape[0], other.poly.shape[0])
        poly = np.zeros((n, self.N, self.N), dtype=complex)
        poly[: self.poly.shape[0]] += self.poly
        poly[: other.poly.shape[0]] += other.poly
        poles = {a: p.copy() for a, p in self.poles.items()}
        for a, p in other.poles.items():
            key = self._match_pole(poles, a)
            if key is None:
                poles[a] = p.copy()
            else:
                m = max(poles[key].shape[0], p.shape[0])
                merged = np.zeros((m, self.N, self.N), dtype=complex)
                merged[: poles[key].shape[0]] += poles[key]
                merged[: p.shape[0]] += p
                poles[key] = merged
        return RationalMatrix(self.N, poly=poly, poles=poles)

    @staticmethod
    def _match_pole(poles, a):
        for b in poles:
            if abs(b - a) < 1e-12:
                return b
        return None

    def __neg__(self):
        return RationalMatrix(
            self.N, poly=-self.poly,
            poles={a: -p for a, p in self.poles.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return RationalMatrix(
            self.N, poly=c * self.poly,
            poles={a: c * p for a, p in self.poles.items()})

    def __rmul__(self, c):
        if np.isscalar(c):
            return self.scale(c)
        return NotImplemented

    # -- exact product ------------------------------------------------

    def __matmul__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if other.N != self.N and self.N != 1 and other.N != 1:
            raise SizeMismatch("rank %d vs %d" % (self.N, other.N))
        if self.N == 1 and other.N != 1:
            return _scalar_times(self, other)
        if other.N == 1 and self.N != 1:
            return _scalar_times(other, self, right=True)
        out = RationalMatrix(self.N)
        out = out + _poly_times_poly(self, other)
        for a, parts in other.poles.items():
            out = out + _poly_times_principal(self.poly, a, parts, left=True)
        for a, parts in self.poles.items():
            out = out + _poly_times_principal(other.poly, a, parts, left=False)
        for a, pa in self.poles.items():
            for b, pb in other.poles.items():
                out = out + _principal_times_principal(a, pa, b, pb)
        return out


def _scalar_times(scalar, mat, right=False):
    """Product of a 1x1 RationalMatrix with an NxN one."""
    N = mat.N
    embed = RationalMatrix(
        N,
        poly=scalar.poly * np.eye(N),
        poles={a: p * np.eye(N) for a, p in scalar.poles.items()})
    return (mat @ embed) if right else (embed @ mat)


def _poly_times_poly(A, B):
    na, nb = A.poly.shape[0], B.poly.shape[0]
    N = A.N
    poly = np.zeros((na + nb - 1, N, N), dtype=complex)
    for i in range(na):
        for j in range(nb):
            poly[i + j] += A.poly[i] @ B.poly[j]
    return RationalMatrix(N, poly=poly)


def _poly_times_principal(poly, a, parts, left):
    """poly(z) @ principal-part-at-a (left=True) or the reverse order."""
    N = poly.shape[1]
    M = parts.shape[0]
    q = _taylor_shift(poly, a)  # coefficients in powers of (z - a)
    new_parts = np.zeros((M, N, N), dtype=complex)
    # polynomial remainder, in powers of (z - a)
    rem = np.zeros((max(q.shape[0], 1), N, N), dtype=complex)
    for m in range(1, M + 1):
        C = parts[m - 1]
        for k in range(q.shape[0]):
            term = (q[k] @ C) if left else (C @ q[k])
            if k < m:
                new_parts[m - k - 1] += term
            else:
                rem[k - m] += term
    out = RationalMatrix(N, poles={a: new_parts})
    rem = _trim_poly(rem)
    if np.any(rem):
        out = out + RationalMatrix(N, poly=_taylor_shift(rem, -a))
    return out


def _principal_times_principal(a, pa, b, pb):
    N = pa.shape[1]
    if abs(a - b) < 1e-12:
        # orders add at a common pole
        total = np.zeros((pa.shape[0] + pb.shape[0], N, N), dtype=complex)
        for m in range(1, pa.shape[0] + 1):
            for n in range(1, pb.shape[0] + 1):
                total[m + n - 1] += pa[m - 1] @ pb[n - 1]
        return RationalMatrix(N, poles={a: total})
    parts_a = np.zeros((pa.shape[0], N, N), dtype=complex)
    parts_b = np.zeros((pb.shape[0], N, N), dtype=complex)
    for m in range(1, pa.shape[0] + 1):
        for n in range(1, pb.shape[0] + 1):
            CD = pa[m - 1] @ pb[n - 1]
            # 1/((z-a)^m (z-b)^n) = sum_k alpha_k/(z-a)^k
            #                     + sum_l beta_l/(z-b)^l
            for k in range(1, m + 1):
                alpha = ((-1.0) ** (m - k) * comb(n + m - k - 1, m - k)
                         * (a - b) ** (k - m - n))
                parts_a[k - 1] += alpha * CD
            for l in range(1, n + 1):
                beta = ((-1.0) ** (n - l) * comb(m + n - l - 1, n - l)
                        * (b - a) ** (l - m - n))
                parts_b[l - 1] += beta * CD
    return RationalMatrix(N, poles={a: parts_a}) + \
        RationalMatrix(N, poles={b: parts_b})


def split_on_disk(M, center=0.0, radius=1.0):
    """Exact plus/minus splitting of a RationalMatrix on |z-center|<radius.

    plus: principal parts at poles inside the disk, plus the value at the
    puncture (= center) of what is left; minus: the remainder, which is
    holomorphic on the disk and vanishes at the puncture.
    """
    inside = {a: p.copy() for a, p in M.poles.items()
              if abs(a - center) < radius}
    outside = {a: p.copy() for a, p in M.poles.items()
               if abs(a - center) >= radius}
    holo = RationalMatrix(M.N, poly=M.poly, poles=outside)
    const = holo.eval(np.array([complex(center)]), guard=0.0)[0]
    plus = RationalMatrix(M.N, poly=const[None], poles=inside)
    minus = M - plus
    return plus, minus
