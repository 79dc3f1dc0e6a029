"""
The mu-transform family: L[mu] f = M(mu)^(x m) f, applied one axis at a time.
"""
import logging
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .binfun import RawVector, default_tolerance, proportional
from .exceptions import SingularTransform

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

# omega from literals, not trig, so that omega**3 == 1 to an ulp
OMEGA = complex(-0.5, math.sqrt(3.0) / 2)
OMEGA2 = OMEGA.conjugate()

SPECIAL_VALUES = {
    '1': complex(1),
    '-1': complex(-1),
    'w': OMEGA,
    'w2': OMEGA2,
}

# eigenvector of every M(mu) for eigenvalue 1; F(C_1) up to scale
FIXED_VECTOR = np.array([1, SQRT2 - 1], dtype=complex)


def special_name(mu, tol=None):
    """Name of mu among {1, -1, w, w2}, or None."""
    tol = default_tolerance(tol)
    for name, value in SPECIAL_VALUES.items():
        if abs(complex(mu) - value) <= tol:
            return name
    return None


@dataclass(frozen=True, eq=False)
class MuMatrix:
    mu: complex
    entries: np.ndarray

    @property
    def det(self):
        return complex(np.linalg.det(self.entries))

    def __repr__(self):
        return f"MuMatrix(mu={self.mu}, entries={self.entries.tolist()})"


def m_matrix(mu):
    mu = complex(mu)
    if mu == 1:
        entries = np.eye(2, dtype=complex)
    else:
        entries = np.array([
            [SQRT2 + 1 + (SQRT2 - 1) * mu, 1 - mu],
            [1 - mu, SQRT2 - 1 + (SQRT2 + 1) * mu],
        ], dtype=complex) / (2 * SQRT2)
    entries.flags.writeable = False
    return MuMatrix(mu, entries)


def _apply_axes(values, m, entries):
    out = np.array(values, dtype=complex)
    # axis 0 (the most significant bit) first
    for i in range(m):
        blocks = out.reshape(1 << i, 2, 1 << (m - 1 - i))
        out = np.einsum('ab,ibj->iaj', entries, blocks).reshape(-1)
    return out


def transform(vector, mu):
    """L[mu] applied to a RawVector or BinaryFunction; the result is a RawVector."""
    mu = complex(mu)
    if mu == 1:
        return RawVector(vector.m, vector.values, vector.labels)
    values = _apply_axes(vector.values, vector.m, m_matrix(mu).entries)
    logger.debug("transformed m=%d vector with mu=%s", vector.m, mu)
    return RawVector(vector.m, values, vector.labels)


def dense_transform(vector, mu):
    """Explicit 2^m x 2^m Kronecker-power multiply. Only sensible for small m."""
    entries = m_matrix(mu).entries
    dense = reduce(np.kron, [entries] * vector.m, np.ones((1, 1), dtype=complex))
    return RawVector(vector.m, dense @ vector.values, vector.labels)


def inverse_transform(vector, mu):
    mu = complex(mu)
    if mu == 0:
        raise SingularTransform("M(0) is singular; L[0] has no inverse")
    return transform(vector, 1 / mu)


def transform_power(vector, mu, times):
    for _ in range(times):
        vector = transform(vector, mu)
    return vector


def self_trial(f, tol=None):
    """L[w] f ~ f."""
    return proportional(transform(f, OMEGA), f, tol)
