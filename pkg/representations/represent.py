"""
Strict binary representations of minor-closed classes of alternating dimaps.

A candidate (F, eps, nu) gives every member G a binary function F(G) whose
elements are the edges of G through the bijection eps_G. It is a strict
representation when

    (d)  F(G^w) ~ L[w] F(G)
    (e)  F(G |mu e) ~ F(G) |[nu mu] eps_G(e)    for mu in {1, w, w2}

with |nu| = 1. The only classes that have one are the empty class and the
classes U_k of disjoint ultraloops, with F(kC_1) = (1, sqrt2 - 1)^(x k).
"""
import cmath
import logging
import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from django.conf import settings

from binary_functions.binfun import (
    BinaryFunction,
    bits_of,
    default_tolerance,
    insert_bit,
    make,
    normalize,
    permute_elements,
    proportional,
    proportionality_residual,
    subset_index,
    tensor_power,
)
from binary_functions.minor import MinorSpec, lambda_mu, take_minor
from binary_functions.transform import FIXED_VECTOR, OMEGA, OMEGA2, m_matrix, self_trial, transform
from dimaps.altmap import canonical_form, isomorphic, isomorphisms, k_copies, trial, ultraloop
from dimaps.catalog import enumerate_dimaps
from dimaps.choices import ReductionKind
from dimaps.exceptions import CapExceeded
from dimaps.reduce import reduce

from .exceptions import NotMinorClosed

logger = logging.getLogger(__name__)

CONDITIONS = {
    'a': 'every member has an image of matching dimension',
    'b': 'edge-to-element maps are bijections',
    'c': 'phase has modulus 1',
    'd': 'triality equivariance',
    'e': 'minor equivariance',
}
MAX_WITNESSES = 5
MAX_CLASS_SIZE = 5


def ultraloop_image():
    """F(C_1) = (1, sqrt2 - 1)."""
    return make(1, FIXED_VECTOR)


# ---------------------------------------------------------------------------
# Candidates and the condition checker
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RepresentationCandidate:
    members: tuple
    images: tuple
    element_maps: tuple
    nu: complex = 1

    def __post_init__(self):
        object.__setattr__(self, 'members', tuple(self.members))
        object.__setattr__(self, 'images', tuple(self.images))
        object.__setattr__(self, 'element_maps', tuple(dict(eps) for eps in self.element_maps))
        object.__setattr__(self, 'nu', complex(self.nu))

    def __len__(self):
        return len(self.members)

    @cached_property
    def _by_form(self):
        return {canonical_form(G): i for i, G in enumerate(self.members)}

    def locate(self, dimap):
        """(member index, every label isomorphism dimap -> member) or None."""
        index = self._by_form.get(canonical_form(dimap))
        if index is None:
            return None
        return index, list(isomorphisms(dimap, self.members[index]))

    def aligned_images(self, found, labels):
        """aligned_image under each isomorphism; they differ when F(member) ignores an automorphism."""
        index, mappings = found
        return [self.aligned_image(index, mapping, labels) for mapping in mappings]

    def with_nu(self, nu):
        return replace(self, nu=nu)

    def aligned_image(self, index, mapping, labels):
        """
        F(member) with its elements reordered so that position p holds the
        element of labels[p], transported through `mapping`.
        """
        eps = self.element_maps[index]
        return permute_elements(self.images[index], [eps[mapping[label]] for label in labels])


@dataclass
class ConditionResult:
    key: str
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def description(self):
        return CONDITIONS[self.key]

    @property
    def passed(self):
        return not self.failures

    def fail(self, witness):
        self.failures.append(witness)


@dataclass
class CheckReport:
    conditions: dict

    @property
    def passed(self):
        return all(c.passed for c in self.conditions.values())

    def summary(self):
        return ' '.join(f'({key}){"PASS" if c.passed else "FAIL"}' for key, c in self.conditions.items())

    def witnesses(self):
        return [f"({key}) {w}" for key, c in self.conditions.items() for w in c.failures[:MAX_WITNESSES]]


def _ordered_labels(eps):
    return [label for label, _ in sorted(eps.items(), key=lambda item: item[1])]


def check_representation(candidate, tol=None):
    tol = default_tolerance(tol)
    report = CheckReport({key: ConditionResult(key) for key in CONDITIONS})
    totality, bijections, phase, triality, minors = report.conditions.values()

    for index, G in enumerate(candidate.members):
        totality.checked += 1
        image = candidate.images[index] if index < len(candidate.images) else None
        if not isinstance(image, BinaryFunction):
            totality.fail(f'member {index} ({G!r}) has no binary function')
        elif image.m != len(G):
            totality.fail(f'member {index} has {len(G)} edges but F has dimension {image.m}')

        bijections.checked += 1
        eps = candidate.element_maps[index] if index < len(candidate.element_maps) else {}
        if set(eps) != set(G.labels) or sorted(eps.values()) != list(range(len(G))):
            bijections.fail(f'member {index}: {eps} is not a bijection onto 0..{len(G) - 1}')

    phase.checked += 1
    if abs(abs(candidate.nu) - 1) > tol:
        phase.fail(f'|nu| = {abs(candidate.nu)}')

    if not (totality.passed and bijections.passed):
        for condition in (triality, minors):
            condition.fail('not checked: the candidate is malformed')
        return report

    for index, G in enumerate(candidate.members):
        image, eps = candidate.images[index], candidate.element_maps[index]
        labels = _ordered_labels(eps)

        triality.checked += 1
        found = candidate.locate(trial(G)[0])
        if found is None:
            triality.fail(f'trial of member {index} ({G!r}) is not in the class')
        else:
            actual = transform(image, OMEGA)
            for expected in candidate.aligned_images(found, labels):
                if not proportional(actual, expected, tol):
                    triality.fail(f'member {index}: L[w]F(G) vs F(G^w) residual '
                                  f'{proportionality_residual(actual, expected):.3g}')
                    break

        for label in G.labels:
            for kind in ReductionKind:
                minors.checked += 1
                found = candidate.locate(reduce(G, label, kind))
                if found is None:
                    raise NotMinorClosed(f'{kind.label}-reduction of {label!r} in member {index} '
                                         f'({G!r}) is not in the class')
                remaining = [x for x in labels if x != label]
                actual = take_minor(image, MinorSpec(eps[label], candidate.nu * kind.as_complex), tol)
                for expected in candidate.aligned_images(found, remaining):
                    if not proportional(actual, expected, tol):
                        minors.fail(f'member {index}, edge {label}, mu={kind.label}: residual '
                                    f'{proportionality_residual(actual, expected):.3g}')
                        break

    logger.debug("checked candidate with %d members: %s", len(candidate), report.summary())
    return report


def search_nu(candidate, samples=None, tol=None):
    """First nu = exp(2 pi i s / samples) that makes the candidate pass, or None."""
    samples = settings.TRIALAB_NU_SEARCH_SAMPLES if samples is None else samples
    for step in range(samples):
        nu = cmath.exp(2j * math.pi * step / samples)
        if check_representation(candidate.with_nu(nu), tol).passed:
            return nu
    return None


def canonical_Uk(k, nu=1):
    """U_k = {iC_1 : i <= k} with F(iC_1) = F(C_1)^(x i) and identity element maps."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    members = tuple(k_copies(ultraloop(), i) for i in range(k + 1))
    images = tuple(tensor_power(ultraloop_image(), i, labels=G.labels) for i, G in enumerate(members))
    element_maps = tuple({label: j for j, label in enumerate(G.labels)} for G in members)
    return RepresentationCandidate(members, images, element_maps, nu)


def empty_class():
    return RepresentationCandidate((), (), ())


# ---------------------------------------------------------------------------
# Claims
# ---------------------------------------------------------------------------

def trinity_eigenvalues():
    """Eigenvalues of M(w), the one nearest 1 first."""
    eigenvalues = np.linalg.eigvals(m_matrix(OMEGA).entries)
    return sorted((complex(z) for z in eigenvalues), key=lambda z: abs(z - 1))


def claim1_solve():
    """The eigenvalue-1 eigenvector of M(w), scaled to empty-set entry 1."""
    eigenvalues, vectors = np.linalg.eig(m_matrix(OMEGA).entries)
    which = int(np.argmin(np.abs(eigenvalues - 1)))
    vector = vectors[:, which] / vectors[0, which]
    return make(1, vector)


@dataclass(frozen=True)
class Claim2Solution:
    k: int
    solution: BinaryFunction
    nullity_first_element: int
    nullity_all_elements: int
    nullity_two_values: int
    residual: float
    minor_checks: dict

    @property
    def unique(self):
        return self.nullity_all_elements == 1

    @property
    def two_values_suffice(self):
        """The minor equations at two sampled mu per element already pin f down."""
        return self.nullity_two_values == 1


def _factorization_rows(k, elements, u):
    rows = []
    zeros = (0,) * k
    for i in elements:
        for g in range(1 << k):
            G = bits_of(g, k)
            for b in (0, 1):
                row = np.zeros(1 << (k + 1), dtype=complex)
                row[subset_index(insert_bit(G, i, b))] += 1
                row[subset_index(insert_bit(zeros, i, b))] -= u[g]
                rows.append(row)
    return np.array(rows)


def _minor_rows(k, elements, u, mus):
    """Rows of f|mu i ~ u, linearized as (low + lam high)_G = (low + lam high)_0 u_G."""
    rows = []
    zeros = (0,) * k
    for i in elements:
        for mu in mus:
            lam = lambda_mu(mu)
            for g in range(1 << k):
                G = bits_of(g, k)
                row = np.zeros(1 << (k + 1), dtype=complex)
                for b, weight in ((0, 1), (1, lam)):
                    row[subset_index(insert_bit(G, i, b))] += weight
                    row[subset_index(insert_bit(zeros, i, b))] -= weight * u[g]
                rows.append(row)
    return np.array(rows)


def claim2_solve(k, tol=None, seed=0):
    """
    Solve f_{G:i<-b} = f_{0:i<-b} u_G (u = F(C_1)^(x k)) with f_0 = 1, and
    record the nullity with only element 0 constrained, with all of them, and
    with the minor equations at two sampled mu per element in their place.
    """
    tol = default_tolerance(tol)
    n = k + 1
    target = tensor_power(ultraloop_image(), k)
    first = _factorization_rows(k, [0], target.values)
    everything = _factorization_rows(k, range(n), target.values)

    pin = np.zeros((1, 1 << n), dtype=complex)
    pin[0, 0] = 1
    system = np.vstack([everything, pin])
    rhs = np.zeros(system.shape[0], dtype=complex)
    rhs[-1] = 1
    x, *_ = np.linalg.lstsq(system, rhs, rcond=None)
    residual = float(np.linalg.norm(system @ x - rhs))
    solution = normalize(n, x)

    rng = np.random.default_rng(seed)
    sampled = [cmath.rect(rng.uniform(0.5, 1.5), rng.uniform(0, 2 * math.pi)) for _ in range(2)]
    named = {'s1': sampled[0], 's2': sampled[1], '1': 1, 'w': OMEGA, 'w2': OMEGA2}
    minor_checks = {
        (i, name): proportional(take_minor(solution, MinorSpec(i, mu), tol), target, tol)
        for i in range(n) for name, mu in named.items()
    }
    return Claim2Solution(
        k=k,
        solution=solution,
        nullity_first_element=(1 << n) - int(np.linalg.matrix_rank(first)),
        nullity_all_elements=(1 << n) - int(np.linalg.matrix_rank(everything)),
        nullity_two_values=(1 << n) - int(np.linalg.matrix_rank(_minor_rows(k, range(n), target.values, sampled))),
        residual=residual,
        minor_checks=minor_checks,
    )


def claim2_check(k, tol=None):
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > settings.TRIALAB_CLAIM2_CAP:
        raise CapExceeded(f"k={k} exceeds the claim 2 cap {settings.TRIALAB_CLAIM2_CAP}")
    tol = default_tolerance(tol)
    solved = claim2_solve(k, tol)
    ok = (solved.nullity_first_element == 2
          and solved.unique
          and solved.residual <= tol
          and proportional(solved.solution, tensor_power(ultraloop_image(), k + 1), tol)
          and all(solved.minor_checks.values()))
    logger.info("claim 2 at k=%d: nullities %d/%d, residual %.2g, %s", k, solved.nullity_first_element,
                solved.nullity_all_elements, solved.residual, 'ok' if ok else 'FAILED')
    return ok


def claim3_members(k):
    """Maps with k+1 edges every reduction of which is kC_1."""
    target = k_copies(ultraloop(), k)
    return [
        G for G in enumerate_dimaps(k + 1).maps
        if all(isomorphic(reduce(G, label, kind), target) for label in G.labels for kind in ReductionKind)
    ]


def claim3_check(k):
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    members = claim3_members(k)
    if k == 1:
        # every two-edge map qualifies
        return len(members) == len(enumerate_dimaps(2)) == 4
    return len(members) == 1 and isomorphic(members[0], k_copies(ultraloop(), k + 1))


@dataclass(frozen=True)
class Obstruction:
    """A two-edge map other than 2C_1 whose forced image is self-trial while it is not."""

    dimap: object
    forced_image: BinaryFunction
    image_self_trial: bool
    map_self_trial: bool

    @property
    def holds(self):
        return self.image_self_trial and not self.map_self_trial


def self_trial_obstructions(tol=None):
    forced = claim2_solve(1, tol).solution
    two = k_copies(ultraloop(), 2)
    return [
        Obstruction(G, forced, self_trial(forced, tol), isomorphic(trial(G)[0], G))
        for G in enumerate_dimaps(2).maps
        if not isomorphic(G, two)
    ]


@dataclass
class MainTheoremReport:
    kmax: int
    class_reports: dict = field(default_factory=dict)
    phase_reports: dict = field(default_factory=dict)
    empty_class: CheckReport = None
    claim1: bool = False
    claim2: dict = field(default_factory=dict)
    claim3: dict = field(default_factory=dict)
    obstructions: list = field(default_factory=list)

    @property
    def passed(self):
        return (self.empty_class is not None and self.empty_class.passed
                and self.claim1
                and all(r.passed for r in self.class_reports.values())
                and all(all(ok for _, ok in runs) for runs in self.phase_reports.values())
                and all(self.claim2.values())
                and all(self.claim3.values())
                and len(self.obstructions) == 3
                and all(o.holds for o in self.obstructions))

    def lines(self):
        out = [f'empty class: {"PASS" if self.empty_class.passed else "FAIL"}',
               f'claim 1: {"PASS" if self.claim1 else "FAIL"}']
        for k, report in self.class_reports.items():
            phases = self.phase_reports.get(k, [])
            out.append(f'U_{k}: {report.summary()} phases {sum(ok for _, ok in phases)}/{len(phases)}')
        out += [f'claim 2 k={k}: {"PASS" if ok else "FAIL"}' for k, ok in self.claim2.items()]
        out += [f'claim 3 k={k}: {"PASS" if ok else "FAIL"}' for k, ok in self.claim3.items()]
        out += [f'obstruction {o.dimap!r}: image self-trial={o.image_self_trial}, '
                f'map self-trial={o.map_self_trial}' for o in self.obstructions]
        return out


def main_theorem_check(kmax=MAX_CLASS_SIZE, phases=10, seed=0, tol=None):
    if not 0 <= kmax <= MAX_CLASS_SIZE:
        raise ValueError(f"kmax must lie in 0..{MAX_CLASS_SIZE}, got {kmax}")
    rng = np.random.default_rng(seed)
    report = MainTheoremReport(kmax=kmax)
    report.empty_class = check_representation(empty_class(), tol)
    report.claim1 = proportional(claim1_solve(), ultraloop_image(), 1e-12)

    for k in range(kmax + 1):
        candidate = canonical_Uk(k)
        report.class_reports[k] = check_representation(candidate, tol)
        report.phase_reports[k] = []
        for _ in range(phases):
            nu = cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            report.phase_reports[k].append((nu, check_representation(candidate.with_nu(nu), tol).passed))

    for k in range(1, settings.TRIALAB_CLAIM2_CAP + 1):
        report.claim2[k] = claim2_check(k, tol)
    for k in range(1, settings.TRIALAB_ENUMERATION_CAP):
        report.claim3[k] = claim3_check(k)
    report.obstructions = self_trial_obstructions(tol)

    if not report.passed:
        logger.warning("main theorem check failed: %s", '; '.join(report.lines()))
    return report
