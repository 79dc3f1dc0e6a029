"""
Minors of binary functions and the degeneracy test.

f|[mu] e_i is f_{G:i<-0} + lambda(mu) f_{G:i<-1}, scaled so the empty-set
entry is 1. mu = 1 is deletion and mu = -1 is contraction.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from .binfun import BinaryFunction, RawVector, default_tolerance, proportional
from .exceptions import DimensionMismatch, IndexOutOfRange, NormalizationError, PoleError
from .transform import SQRT2, transform

logger = logging.getLogger(__name__)

POLE = 3 + 2 * SQRT2


def lambda_mu(mu):
    mu = complex(mu)
    denominator = SQRT2 + 1 - (SQRT2 - 1) * mu
    if abs(denominator) <= settings.TRIALAB_POLE_TOLERANCE or abs(mu - POLE) <= settings.TRIALAB_POLE_TOLERANCE:
        raise PoleError(f"lambda is undefined at mu={mu}")
    return (1 + mu) / denominator


@dataclass(frozen=True)
class MinorSpec:
    i: int
    mu: complex

    def __post_init__(self):
        object.__setattr__(self, 'mu', complex(self.mu))
        if self.i < 0:
            raise IndexOutOfRange(f"element index must be non-negative, got {self.i}")
        if abs(self.mu - POLE) <= settings.TRIALAB_POLE_TOLERANCE:
            raise PoleError(f"mu={self.mu} is the minor pole 3+2*sqrt(2)")

    @property
    def lam(self):
        return lambda_mu(self.mu)

    def validate(self, m):
        if not 0 <= self.i < m:
            raise IndexOutOfRange(f"element {self.i} outside ground set of size {m}")
        return self


def raw_minor(vector, spec):
    """Unnormalized minor; defined for any RawVector."""
    spec.validate(vector.m)
    low, high = vector.slices(spec.i)
    labels = vector.labels[:spec.i] + vector.labels[spec.i + 1:]
    return RawVector(vector.m - 1, low + spec.lam * high, labels)


def take_minor(vector, spec, tol=None):
    raw = raw_minor(vector, spec)
    scale = raw.values[0]
    if abs(scale) < default_tolerance(tol):
        raise NormalizationError(
            f"minor on element {spec.i} with mu={spec.mu} has empty-set entry {scale}"
        )
    values = raw.values / scale
    values[0] = 1
    return BinaryFunction(raw.m, values, raw.labels)


def deletion(f, i, tol=None):
    return take_minor(f, MinorSpec(i, 1), tol)


def contraction(f, i, tol=None):
    return take_minor(f, MinorSpec(i, -1), tol)


def _shifted(spec, removed):
    return MinorSpec(spec.i - (1 if spec.i > removed else 0), spec.mu)


def minors_commute_check(f, first, second, tol=None):
    if first.i == second.i:
        raise IndexOutOfRange(f"both minors act on element {first.i}")
    one_way = take_minor(take_minor(f, first, tol), _shifted(second, first.i), tol)
    other_way = take_minor(take_minor(f, second, tol), _shifted(first, second.i), tol)
    return proportional(one_way, other_way, tol)


def transform_minor_check(f, mu, nu, i, tol=None):
    """(L[mu] f)|[nu] e_i ~ L[mu](f|[mu nu] e_i), compared projectively."""
    lhs = raw_minor(transform(f, mu), MinorSpec(i, nu))
    rhs = transform(raw_minor(f, MinorSpec(i, complex(mu) * complex(nu))), mu)
    return proportional(lhs, rhs, tol)


def is_degenerate(f, i, rtol=None):
    """
    Condition (b): f_{G:i<-1} f_{0:i<-0} = f_{G:i<-0} f_{0:i<-1} for all G.
    {0,1}-valued input is compared exactly.
    """
    if not 0 <= i < f.m:
        raise IndexOutOfRange(f"element {i} outside ground set of size {f.m}")
    low, high = f.slices(i)
    lhs = high * low[0]
    rhs = low * high[0]
    if f.is_exact_indicator():
        return bool(np.array_equal(lhs, rhs))
    rtol = settings.TRIALAB_DEGENERACY_RTOL if rtol is None else rtol
    scale = max(1.0, f.max_abs()) ** 2
    return bool(np.max(np.abs(lhs - rhs)) <= rtol * scale)


def degenerate_elements(f, rtol=None):
    return [i for i in range(f.m) if is_degenerate(f, i, rtol)]


def degenerate_reduction_sides(f, u, i, mu1, mu2, tol=None):
    """
    Both sides of: f|[mu1] e_i = f|[mu2] e_i = u  iff  f_{G:i<-b} = f_{0:i<-b} u_G.
    """
    if complex(mu1) == complex(mu2):
        raise ValueError("the two minor parameters must differ")
    if u.m != f.m - 1:
        raise DimensionMismatch(f"u has dimension {u.m}, expected {f.m - 1}")
    tol = default_tolerance(tol)

    first = take_minor(f, MinorSpec(i, mu1), tol)
    second = take_minor(f, MinorSpec(i, mu2), tol)
    minors_agree = proportional(first, u, tol) and proportional(second, u, tol)

    low, high = f.slices(i)
    scale = max(1.0, f.max_abs()) * max(1.0, u.max_abs())
    factorizes = all(
        float(np.max(np.abs(half - half[0] * u.values))) <= tol * scale
        for half in (low, high)
    )
    return minors_agree, factorizes


def degenerate_reduction_check(f, u, i, mu1, mu2, tol=None):
    minors_agree, factorizes = degenerate_reduction_sides(f, u, i, mu1, mu2, tol)
    if minors_agree != factorizes:
        logger.warning("degenerate reduction sides disagree on element %d: %s vs %s",
                       i, minors_agree, factorizes)
    return minors_agree == factorizes
