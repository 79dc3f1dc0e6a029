"""
The three reductions of an alternating dimap, in successor form.

Removing e from a permutation P means sending P^-1(e) to P(e).

    1-reduction   remove e from L and R
    w-reduction   remove e from L and T, then R = L T^-1
    w2-reduction  remove e from R and T, then L = R T

The w-reduction moves the tail of the left successor of e into the slot of
e's tail; the w2-reduction does the same with the right successor.
"""
import itertools
import logging
from dataclasses import dataclass

from .altmap import (
    from_successors,
    invert,
    labeled_equal,
    trial_power,
    validate,
)
from .choices import ReductionKind
from .exceptions import InternalInvariantViolation, UnknownEdge

logger = logging.getLogger(__name__)

# orderings are checked in full up to this many edges, pairwise above it
FULL_PERMUTATION_LIMIT = 4


def _remove(perm, label):
    out = {x: y for x, y in perm.items() if x != label}
    before = invert(perm)[label]
    if before != label:
        out[before] = perm[label]
    return out


def reduce(dimap, label, kind):
    kind = ReductionKind(kind)
    if label not in dimap.left:
        raise UnknownEdge(f"no edge labelled {label!r}")

    if kind == ReductionKind.ONE:
        left, right = _remove(dimap.left, label), _remove(dimap.right, label)
    elif kind == ReductionKind.OMEGA:
        left, turn = _remove(dimap.left, label), _remove(dimap.turn, label)
        turn_inverse = invert(turn)
        right = {x: left[turn_inverse[x]] for x in left}
    else:
        right, turn = _remove(dimap.right, label), _remove(dimap.turn, label)
        left = {x: right[turn[x]] for x in right}

    result = from_successors(left, right, [x for x in dimap.labels if x != label])
    violations = validate(result)
    if violations:
        raise InternalInvariantViolation(f"{kind.label}-reduction of {label!r} in {dimap!r}: {violations}")
    return result


def reduce_sequence(dimap, steps):
    """Apply (label, kind) steps in order."""
    for label, kind in steps:
        dimap = reduce(dimap, label, kind)
    return dimap


def trial_minor_check(dimap, label, mu, nu):
    """G^mu |nu e^mu == (G |mu.nu e)^mu as labeled maps; trial keeps labels."""
    mu, nu = ReductionKind(mu), ReductionKind(nu)
    lhs = reduce(trial_power(dimap, mu), label, nu)
    rhs = trial_power(reduce(dimap, label, mu.compose(nu)), mu)
    return labeled_equal(lhs, rhs)


def reductions(dimap, label):
    return {kind: reduce(dimap, label, kind) for kind in ReductionKind}


def is_degenerate_edge(dimap, label):
    """All three reductions on the edge give the same labeled map."""
    one, omega, omega2 = reductions(dimap, label).values()
    return labeled_equal(one, omega) and labeled_equal(omega, omega2)


@dataclass(frozen=True)
class NoncommutingPair:
    first: str
    first_kind: ReductionKind
    second: str
    second_kind: ReductionKind

    def __str__(self):
        return (f"{self.first}:{self.first_kind.label} then {self.second}:{self.second_kind.label} "
                f"differs from the reverse order")


def find_noncommuting_pair(dimap):
    for first, second in itertools.combinations(dimap.labels, 2):
        for first_kind, second_kind in itertools.product(ReductionKind, repeat=2):
            forward = reduce_sequence(dimap, [(first, first_kind), (second, second_kind)])
            backward = reduce_sequence(dimap, [(second, second_kind), (first, first_kind)])
            if not labeled_equal(forward, backward):
                return NoncommutingPair(first, first_kind, second, second_kind)
    return None


def _orders_agree(dimap, steps):
    results = [reduce_sequence(dimap, order) for order in itertools.permutations(steps)]
    return all(labeled_equal(results[0], other) for other in results[1:])


def totally_reduction_commutative(dimap):
    """
    Every set of reductions on distinct edges gives one result in every order.
    Orderings are enumerated in full for small maps; larger maps get the
    pairwise test only.
    """
    if len(dimap) > FULL_PERMUTATION_LIMIT:
        return find_noncommuting_pair(dimap) is None
    for size in range(2, len(dimap) + 1):
        for chosen in itertools.combinations(dimap.labels, size):
            for kinds in itertools.product(ReductionKind, repeat=size):
                if not _orders_agree(dimap, list(zip(chosen, kinds))):
                    return False
    return True


def search_noncommuting(kmax):
    """Smallest witness: edge count ascending, then catalog (canonical) order."""
    from .catalog import enumerate_dimaps

    for k in range(kmax + 1):
        for dimap in enumerate_dimaps(k).maps:
            pair = find_noncommuting_pair(dimap)
            if pair is not None:
                logger.info("non-commuting reductions at k=%d: %r, %s", k, dimap, pair)
                return dimap, pair
    return None
