"""Deliberate-bug injection for mutation testing.

Each verification suite must be able to tell the correct implementation
from these four injected defects; a mutation that no suite notices would
mean the checks have a blind spot.

    drop_projection       the plus projection loses its constant
                          (puncture-value) term inside the bracket
    unprojected_dressing  the dressing field skips the complementary
                          projection and uses raw Ad_g xi
    darboux_sign_flip     the canonical {lambda, z} bracket flips sign
    adjugate_transpose    the adjugate is replaced by the untransposed
                          cofactor matrix in divisor extraction
"""

import numpy as np
from contextlib import contextmanager

KNOWN = ("drop_projection", "unprojected_dressing",
         "darboux_sign_flip", "adjugate_transpose")

_active = set()


def active(name):
    return name in _active


@contextmanager
def inject(name):
    if name not in KNOWN:
        raise ValueError("unknown mutation %r" % name)
    _active.add(name)
    try:
        yield
    finally:
        _active.discard(name)


def drop_constant_term(geometry, plus_samples):
    """Remove the angular-mean (constant Laurent) term from a plus part."""
    C = np.fft.fft(plus_samples, axis=0) / plus_samples.shape[0]
    ks = np.fft.fftfreq(plus_samples.shape[0],
                        d=1.0 / plus_samples.shape[0]).astype(int)
    C[ks == 0] = 0
    return np.fft.ifft(C * plus_samples.shape[0], axis=0)
