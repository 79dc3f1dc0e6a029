"""
Verification suites behind ``manage.py verify``.

Each suite is a plain function registered under its command-line name. It
takes a seeded numpy generator and a tolerance, ticks checks off on a
``Tally`` and the runner turns the tally into a ``SuiteOutcome``, printed as

    SUITE <name> PASS|FAIL|WARN <details>

WARN is a pass that carries a flagged finding (a search that came up
empty at its cap, a resample rate above its limit); it never changes the
exit code.
"""
import cmath
import itertools
import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from binary_functions import gf2
from binary_functions.binfun import make, permute_elements, proportional, rowspace_indicator, tensor
from binary_functions.exceptions import BinaryFunctionError, NormalizationError
from binary_functions.minor import (
    MinorSpec,
    is_degenerate,
    minors_commute_check,
    take_minor,
    transform_minor_check,
)
from binary_functions.transform import (
    FIXED_VECTOR,
    OMEGA,
    OMEGA2,
    dense_transform,
    m_matrix,
    transform,
)
from dimaps.altmap import classify_edge, from_successors, isomorphic, k_copies, labeled_equal, trial, ultraloop
from dimaps.catalog import STRATEGIES, enumerate_dimaps, self_trial_members
from dimaps.choices import ReductionKind
from dimaps.exceptions import DimapError
from dimaps.reduce import is_degenerate_edge, search_noncommuting, trial_minor_check
from representations.exceptions import RepresentationError
from representations.represent import (
    claim1_solve,
    claim2_solve,
    claim3_check,
    main_theorem_check,
    self_trial_obstructions,
    trinity_eigenvalues,
    ultraloop_image,
)

from .choices import SUITE_CHOICES

logger = logging.getLogger(__name__)

SUITES = {}
MAX_REPORTED_FAILURES = 3
RESAMPLE_LIMIT = 0.05
EXPECTED_COUNTS = {0: 1, 1: 1, 2: 4, 3: 11, 4: 43}
SPECIAL_MUS = (1 + 0j, -1 + 0j, OMEGA, OMEGA2)


@dataclass
class Tally:
    checks: int = 0
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def check(self, ok, witness):
        self.checks += 1
        if not ok:
            self.failures.append(witness() if callable(witness) else witness)
        return ok

    def warn(self, message):
        logger.warning(message)
        self.warnings.append(message)

    def note(self, message):
        self.notes.append(message)

    @property
    def status(self):
        if self.failures:
            return 'FAIL'
        return 'WARN' if self.warnings else 'PASS'

    def details(self):
        parts = [f'checks={self.checks}', f'failures={len(self.failures)}', *self.notes, *self.warnings]
        parts += [f'witness: {w}' for w in self.failures[:MAX_REPORTED_FAILURES]]
        return ' '.join(parts)


@dataclass
class SuiteOutcome:
    name: str
    status: str
    details: str
    duration: float = 0.0

    @property
    def failed(self):
        return self.status == 'FAIL'

    def line(self):
        return f'SUITE {self.name} {self.status} {self.details}'.rstrip()


def suite(name):
    def register(func):
        SUITES[name] = func
        return func
    return register


def suite_names():
    return [name for name, _ in SUITE_CHOICES]


def run_suite(name, seed=0, tol=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    tol = settings.TRIALAB_TOLERANCE if tol is None else tol
    rng = np.random.default_rng(seed)
    tally = Tally()
    started = time.perf_counter()
    try:
        SUITES[name](tally, rng, tol)
    except (BinaryFunctionError, DimapError, RepresentationError, ValueError) as exc:
        logger.exception("suite %s aborted", name)
        tally.failures.append(f'aborted: {type(exc).__name__}: {exc}')
    outcome = SuiteOutcome(name, tally.status, tally.details(), time.perf_counter() - started)
    logger.info("%s (%.2fs)", outcome.line(), outcome.duration)
    return outcome


def run_suites(names, seed=0, tol=None):
    return [run_suite(name, seed, tol) for name in names]


# ---------------------------------------------------------------------------
# Random inputs
# ---------------------------------------------------------------------------

def random_function(rng, m):
    values = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    values[0] = 1
    return make(m, values)


def random_mu(rng, low=0.5, high=1.5):
    return cmath.rect(rng.uniform(low, high), rng.uniform(0, 2 * math.pi))


def degenerate_function(rng, m, i):
    """A function that factorizes across element i."""
    u = random_function(rng, m - 1)
    f = tensor(make(1, [1, complex(rng.normal(), rng.normal())]), u)
    order = list(range(1, m))
    order.insert(i, 0)
    return permute_elements(f, order)


def small_graphs(vertices=4, max_edges=5):
    """Every multigraph (loops allowed) on `vertices` labelled vertices with at most `max_edges` edges."""
    slots = [(u, v) for u in range(vertices) for v in range(u, vertices)]
    for size in range(max_edges + 1):
        yield from itertools.combinations_with_replacement(slots, size)


def subspaces(max_rows=4, max_columns=5):
    """Generator matrices of every GF(2) subspace spanned by at most max_rows rows, one per rowspace."""
    for n in range(1, max_columns + 1):
        seen = set()
        vectors = [np.array([(v >> (n - 1 - j)) & 1 for j in range(n)], dtype=np.uint8) for v in range(1, 1 << n)]
        for size in range(max_rows + 1):
            for rows in itertools.combinations(vectors, size):
                matrix = np.array(rows, dtype=np.uint8).reshape(size, n)
                key = frozenset(gf2.rowspace(matrix))
                if key not in seen:
                    seen.add(key)
                    yield matrix


def random_dimap(rng, k):
    labels = [f'e{i}' for i in range(k)]
    left = dict(zip(labels, rng.permutation(labels).tolist()))
    right = dict(zip(labels, rng.permutation(labels).tolist()))
    return from_successors(left, right, labels)


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

@suite('transforms')
def transforms_suite(tally, rng, tol):
    for _ in range(200):
        m = int(rng.integers(1, 9))
        f = random_function(rng, m)
        mu1, mu2 = random_mu(rng), random_mu(rng)
        difference = transform(transform(f, mu2), mu1).values - transform(f, mu1 * mu2).values
        tally.check(np.max(np.abs(difference)) <= 1e-9 * f.max_abs(),
                    lambda: f'composition m={m} mu1={mu1:.4g} mu2={mu2:.4g}')

    for _ in range(50):
        m = int(rng.integers(0, 7))
        f, mu = random_function(rng, m), random_mu(rng)
        fast, dense = transform(f, mu), dense_transform(f, mu)
        tally.check(np.max(np.abs(fast.values - dense.values)) <= 1e-10 * max(1.0, dense.max_abs()),
                    lambda: f'fast vs dense m={m} mu={mu:.4g}')

    graphs = 0
    for edges in small_graphs():
        graphs += 1
        N = gf2.incidence_matrix(4, edges)
        cutsets = rowspace_indicator(N, columns=len(edges))
        circuits = rowspace_indicator(gf2.orthogonal_complement(N, columns=len(edges)), columns=len(edges))
        tally.check(proportional(transform(cutsets, -1), circuits, 1e-9), lambda: f'duality on {edges}')
    tally.note(f'graphs={graphs}')

    eigen = m_matrix(OMEGA).entries @ FIXED_VECTOR
    tally.check(np.max(np.abs(eigen - FIXED_VECTOR)) <= 1e-12, 'M(w) does not fix (1, sqrt2-1)')
    for m in range(4):
        f = random_function(rng, m)
        thrice = transform(transform(transform(f, OMEGA), OMEGA), OMEGA)
        tally.check(proportional(thrice, f, tol), lambda: f'L[w]^3 is not the identity at m={m}')


@suite('minors')
def minors_suite(tally, rng, tol):
    samples = resampled = 0
    while samples < 200:
        m = int(rng.integers(1, 7))
        f, mu, nu = random_function(rng, m), random_mu(rng), random_mu(rng)
        i = int(rng.integers(0, m))
        try:
            take_minor(f, MinorSpec(i, mu * nu), tol)
            take_minor(transform(f, mu), MinorSpec(i, nu), tol)
        except NormalizationError:
            resampled += 1
            logger.debug("resampling: minor of m=%d function on element %d not normalizable", m, i)
            continue
        samples += 1
        tally.check(transform_minor_check(f, mu, nu, i, 1e-8),
                    lambda: f'interchange m={m} i={i} mu={mu:.4g} nu={nu:.4g}')
    rate = resampled / (samples + resampled)
    tally.note(f'resample_rate={rate:.3f}')
    if rate > RESAMPLE_LIMIT:
        tally.warn(f'resample rate {rate:.3f} above {RESAMPLE_LIMIT}')

    functions = 0
    while functions < 100:
        m = int(rng.integers(2, 7))
        f = random_function(rng, m)
        try:
            verdicts = [
                (i, mu1, j, mu2, minors_commute_check(f, MinorSpec(i, mu1), MinorSpec(j, mu2), 1e-9))
                for i, j in itertools.combinations(range(m), 2)
                for mu1, mu2 in itertools.product(SPECIAL_MUS, repeat=2)
            ]
        except NormalizationError:
            logger.debug("resampling: a minor of an m=%d function is not normalizable", m)
            continue
        functions += 1
        for i, mu1, j, mu2, ok in verdicts:
            tally.check(ok, lambda: f'commutation m={m} ({i}, {mu1:.3g}) ({j}, {mu2:.3g})')


def _minor_verdict(f, i, mu1, mu2, tol):
    try:
        return proportional(take_minor(f, MinorSpec(i, mu1), tol), take_minor(f, MinorSpec(i, mu2), tol), tol)
    except NormalizationError:
        return None


@suite('degeneracy')
def degeneracy_suite(tally, rng, tol):
    spaces = 0
    for matrix in subspaces():
        spaces += 1
        n = matrix.shape[1]
        f = rowspace_indicator(matrix, columns=n)
        zero, unit = gf2.loops_and_coloops(matrix, columns=n)
        expected = set(zero) | set(unit)
        for i in range(n):
            tally.check(is_degenerate(f, i) == (i in expected), lambda: f'element {i} of {matrix.tolist()}')
    tally.note(f'subspaces={spaces}')

    for sample in range(100):
        m = int(rng.integers(1, 6))
        f = degenerate_function(rng, m, int(rng.integers(0, m))) if sample % 2 else random_function(rng, m)
        for i in range(m):
            verdicts = []
            while len(verdicts) < 2:
                mu1, mu2 = random_mu(rng), random_mu(rng)
                verdict = _minor_verdict(f, i, mu1, mu2, 1e-8)
                if verdict is not None:
                    verdicts.append(verdict)
            tally.check(verdicts[0] == verdicts[1] == is_degenerate(f, i),
                        lambda: f'mu-dependent verdict on element {i} of m={m} sample {sample}')


@suite('dimaps')
def dimaps_suite(tally, rng, tol):
    cap = settings.TRIALAB_ENUMERATION_CAP
    for k, expected in EXPECTED_COUNTS.items():
        if k > cap:
            break
        catalogs = [enumerate_dimaps(k, strategy) for strategy in STRATEGIES]
        tally.check(all(len(c) == expected for c in catalogs),
                    lambda: f'k={k}: counts {[len(c) for c in catalogs]}, expected {expected}')

    self_trial = self_trial_members(enumerate_dimaps(2))
    tally.check(len(self_trial) == 1 and isomorphic(self_trial[0], k_copies(ultraloop(), 2)),
                lambda: f'self-trial two-edge maps: {self_trial}')

    small = [G for k in range(4) for G in enumerate_dimaps(k).maps]
    randoms = [random_dimap(rng, 4) for _ in range(100)]
    for G in small + randoms:
        thrice = trial(trial(trial(G)[0])[0])[0]
        tally.check(labeled_equal(thrice, G), lambda: f'trial cubed {G!r}')

    for G in small:
        for label in G.labels:
            for mu, nu in itertools.product(ReductionKind, repeat=2):
                tally.check(trial_minor_check(G, label, mu, nu),
                            lambda: f'triality/minor {G!r} edge {label} {mu.label} {nu.label}')
            tally.check(classify_edge(G, label).is_triloop == is_degenerate_edge(G, label),
                        lambda: f'triloop flag {G!r} edge {label}')

    found = search_noncommuting(cap)
    if found is None:
        tally.warn(f'NOT-FOUND-AT-CAP k<={cap}')
    else:
        witness, pair = found
        tally.note(f'noncommuting_at_k={len(witness)}')
        logger.info("non-commuting witness %r: %s", witness, pair)


@suite('claims')
def claims_suite(tally, rng, tol):
    eigenvalues = trinity_eigenvalues()
    tally.check(abs(eigenvalues[0] - 1) <= 1e-12 and abs(eigenvalues[1] - OMEGA) <= 1e-12,
                lambda: f'eigenvalues of M(w): {eigenvalues}')
    tally.check(proportional(claim1_solve(), ultraloop_image(), 1e-12), 'claim 1 eigenvector')

    two_suffice = []
    for k in range(1, settings.TRIALAB_CLAIM2_CAP + 1):
        solved = claim2_solve(k, tol, seed=int(rng.integers(1 << 31)))
        tally.check(solved.nullity_first_element == 2 and solved.unique and solved.residual <= 1e-9,
                    lambda: f'claim 2 k={k}: nullities {solved.nullity_first_element}/{solved.nullity_all_elements}')
        tally.check(all(solved.minor_checks.values()), lambda: f'claim 2 k={k}: minors of the solution')
        two_suffice.append(f'{k}:{"yes" if solved.two_values_suffice else "no"}')
        logger.info("claim 2 witness at k=%d: %s", k, solved.solution)
    tally.note(f'two_values_suffice={",".join(two_suffice)}')

    for k in range(1, min(3, settings.TRIALAB_ENUMERATION_CAP)):
        tally.check(claim3_check(k), lambda: f'claim 3 k={k}')

    obstructions = self_trial_obstructions(tol)
    tally.check(len(obstructions) == 3 and all(o.holds for o in obstructions),
                lambda: f'obstructions: {[(repr(o.dimap), o.holds) for o in obstructions]}')
    for obstruction in obstructions:
        logger.info("obstruction witness %r: forced image self-trial, map not", obstruction.dimap)


@suite('main-theorem')
def main_theorem_suite(tally, rng, tol):
    report = main_theorem_check(phases=10, seed=int(rng.integers(1 << 31)), tol=tol)
    for line in report.lines():
        logger.info("main theorem: %s", line)
    tally.check(report.passed, lambda: '; '.join(report.lines()))
    tally.note(f'classes=U_0..U_{report.kmax} obstructions={len(report.obstructions)}')
