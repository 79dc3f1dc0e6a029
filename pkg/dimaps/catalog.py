"""
Exhaustive catalogs of alternating dimaps with k edges, up to isomorphism.

Two generators are kept so that each can check the other:

    compositional  connected maps from pairs of successor permutations,
                   disconnected maps as multisets of smaller connected ones
    rotation       dart rotations built directly (heads to tails, tails to
                   heads) and filtered by validate
"""
import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

from django.conf import settings

from .altmap import (
    AlternatingDimap,
    canonical_form,
    canonical_map,
    components,
    cycles,
    disjoint_union,
    empty,
    from_successors,
    genus_profile,
    isomorphic,
    trial,
    validate,
    write_adm,
)
from .exceptions import CapExceeded

logger = logging.getLogger(__name__)

STRATEGIES = ('compositional', 'rotation')


@dataclass(frozen=True, eq=False)
class Catalog:
    k: int
    maps: tuple
    strategy: str = 'compositional'

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    @cached_property
    def self_trial_flags(self):
        return tuple(isomorphic(trial(dimap)[0], dimap) for dimap in self.maps)

    @cached_property
    def counts(self):
        """Counter over (components, genus profile, self-trial)."""
        return Counter(
            (len(components(dimap)), genus_profile(dimap), flag)
            for dimap, flag in zip(self.maps, self.self_trial_flags)
        )

    def index_of(self, dimap):
        key = canonical_form(dimap)
        for index, member in enumerate(self.maps):
            if canonical_form(member) == key:
                return index
        return None


def _labels(k):
    return [f'e{i}' for i in range(k)]


def _connected(left, right):
    if not left:
        return False
    start = next(iter(left))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in (left[x], right[x]):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(left)


@lru_cache(maxsize=None)
def connected_dimaps(k):
    labels = _labels(k)
    found = {}
    for left_image in itertools.permutations(labels):
        left = dict(zip(labels, left_image))
        for right_image in itertools.permutations(labels):
            right = dict(zip(labels, right_image))
            if _connected(left, right):
                dimap = from_successors(left, right, labels)
                found.setdefault(canonical_form(dimap), dimap)
    return tuple(canonical_map(found[key]) for key in sorted(found))


def _partitions(k, largest=None):
    largest = k if largest is None else largest
    if k == 0:
        yield ()
        return
    for part in range(min(k, largest), 0, -1):
        for rest in _partitions(k - part, part):
            yield (part,) + rest


def _compositional(k):
    found = {}
    for partition in _partitions(k):
        groups = [
            list(itertools.combinations_with_replacement(connected_dimaps(size), count))
            for size, count in sorted(Counter(partition).items())
        ]
        for pick in itertools.product(*groups):
            dimap = empty()
            for part in itertools.chain.from_iterable(pick):
                dimap = disjoint_union(dimap, part)
            found.setdefault(canonical_form(dimap), dimap)
    return found


def _by_rotation(k):
    tails = [2 * i for i in range(k)]
    heads = [2 * i + 1 for i in range(k)]
    edges = tuple((label, 2 * i, 2 * i + 1) for i, label in enumerate(_labels(k)))
    found = {}
    # rho sends every head to a tail and every tail to a head
    for after_head in itertools.permutations(tails):
        for after_tail in itertools.permutations(heads):
            rho = dict(zip(heads, after_head))
            rho.update(zip(tails, after_tail))
            dimap = AlternatingDimap(edges, tuple(cycles(rho, tails + heads)))
            if validate(dimap):
                continue
            found.setdefault(canonical_form(dimap), dimap)
    return found


@lru_cache(maxsize=None)
def _generate(k, strategy):
    found = _compositional(k) if strategy == 'compositional' else _by_rotation(k)
    maps = tuple(canonical_map(found[key]) for key in sorted(found))
    logger.info("enumerated %d alternating dimaps with %d edges (%s)", len(maps), k, strategy)
    return maps


def enumerate_dimaps(k, strategy='compositional'):
    if k < 0:
        raise ValueError(f"edge count must be non-negative, got {k}")
    if k > settings.TRIALAB_ENUMERATION_CAP:
        raise CapExceeded(f"k={k} exceeds the enumeration cap {settings.TRIALAB_ENUMERATION_CAP}")
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    return Catalog(k, _generate(k, strategy), strategy)


def self_trial_members(catalog):
    return [dimap for dimap, flag in zip(catalog.maps, catalog.self_trial_flags) if flag]


def summary_lines(catalog):
    lines = [f'# k={catalog.k} strategy={catalog.strategy} maps={len(catalog)}',
             f'{"file":<12} {"vertices":>8} {"components":>10} {"genus":<10} self-trial']
    for index, (dimap, flag) in enumerate(zip(catalog.maps, catalog.self_trial_flags)):
        genera = ','.join(str(g) for g in genus_profile(dimap)) or '-'
        lines.append(f'{_filename(catalog.k, index):<12} {len(dimap.rotations):>8} '
                     f'{len(components(dimap)):>10} {genera:<10} {"yes" if flag else "no"}')
    return lines


def _filename(k, index):
    return f'k{k}-{index:02d}.adm'


def write_catalog(catalog, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for index, dimap in enumerate(catalog.maps):
        write_adm(dimap, directory / _filename(catalog.k, index))
    (directory / 'summary.txt').write_text('\n'.join(summary_lines(catalog)) + '\n', encoding='utf-8')
    logger.info("wrote %d maps to %s", len(catalog), directory)
    return directory
