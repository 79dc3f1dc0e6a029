"""
Alternating dimaps stored as dart rotation systems.

Every edge owns a tail dart and a head dart. Each vertex lists its darts in
clockwise order, alternating between tail darts and head darts. From the
rotation rho:

    left successor   L(e) = edge of rho(head(e))
    right successor  R(e) = edge of rho^-1(head(e))

The cycles of L are the anticlockwise faces, the cycles of R the clockwise
faces, and the cycles of T = R^-1 L group the in-edges at each vertex.
Any pair of permutations (L, R) of the edge set is an alternating dimap, so
most operations work on the successor form and rebuild darts with
from_successors.
"""
import logging
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

from .choices import FaceOrientation, ReductionKind, ViolationKind
from .exceptions import DimapFileError, InvalidMap, NonIntegerGenus, UnknownEdge

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    message: str

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.message}"


@dataclass(frozen=True)
class Face:
    darts: tuple
    edges: tuple
    orientation: str

    def __len__(self):
        return len(self.edges)


@dataclass(frozen=True, eq=False)
class AlternatingDimap:
    edges: tuple = ()
    rotations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'edges', tuple((str(label), int(t), int(h)) for label, t, h in self.edges))
        object.__setattr__(self, 'rotations', tuple(tuple(int(d) for d in r) for r in self.rotations))

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        if not self.edges:
            return 'AlternatingDimap(empty)'
        return (f"AlternatingDimap(L={format_cycles(self.left, self.labels)}, "
                f"R={format_cycles(self.right, self.labels)})")

    @property
    def labels(self):
        return tuple(label for label, _, _ in self.edges)

    @cached_property
    def _darts(self):
        violations = validate(self)
        if violations:
            raise InvalidMap(violations)
        tail = {label: t for label, t, _ in self.edges}
        head = {label: h for label, _, h in self.edges}
        owner = {}
        for label, t, h in self.edges:
            owner[t] = label
            owner[h] = label
        rho, vertex = {}, {}
        for index, rotation in enumerate(self.rotations):
            for position, dart in enumerate(rotation):
                rho[dart] = rotation[(position + 1) % len(rotation)]
                vertex[dart] = index
        return tail, head, owner, rho, vertex

    @cached_property
    def left(self):
        tail, head, owner, rho, _ = self._darts
        return {label: owner[rho[head[label]]] for label in self.labels}

    @cached_property
    def right(self):
        tail, head, owner, rho, _ = self._darts
        rho_inverse = {b: a for a, b in rho.items()}
        return {label: owner[rho_inverse[head[label]]] for label in self.labels}

    @cached_property
    def turn(self):
        """T = R^-1 L: the next in-edge clockwise at the head of e."""
        right_inverse = invert(self.right)
        return {label: right_inverse[self.left[label]] for label in self.labels}

    def tail_vertex(self, label):
        tail, _, _, _, vertex = self._darts
        return vertex[tail[self._known(label)]]

    def head_vertex(self, label):
        _, head, _, _, vertex = self._darts
        return vertex[head[self._known(label)]]

    def _known(self, label):
        if label not in self.left:
            raise UnknownEdge(f"no edge labelled {label!r}")
        return label


# ---------------------------------------------------------------------------
# Permutation helpers
# ---------------------------------------------------------------------------

def invert(perm):
    return {b: a for a, b in perm.items()}


def cycles(perm, order=None):
    order = list(perm) if order is None else order
    seen, out = set(), []
    for start in order:
        if start in seen:
            continue
        cycle, x = [], start
        while x not in seen:
            seen.add(x)
            cycle.append(x)
            x = perm[x]
        out.append(tuple(cycle))
    return out


def format_cycles(perm, order=None):
    return ''.join('(' + ' '.join(c) + ')' for c in cycles(perm, order)) or '()'


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------

def empty():
    return AlternatingDimap()


def ultraloop(label='e'):
    """C_1: one vertex, one loop, both faces of size 1."""
    return AlternatingDimap(((label, 0, 1),), ((0, 1),))


def build(edges, rotations):
    """Construct and validate; raises InvalidMap."""
    dimap = AlternatingDimap(edges, rotations)
    violations = validate(dimap)
    if violations:
        raise InvalidMap(violations)
    return dimap


def from_successors(left, right, order=None):
    """
    Build the dart form of the map with left successor `left` and right
    successor `right`. Edge number i in `order` gets tail dart 2i and head
    dart 2i+1.
    """
    order = list(left) if order is None else list(order)
    if not (set(order) == set(left) == set(right) == set(left.values()) == set(right.values())):
        raise InvalidMap([], "left and right successors must be permutations of the same edge set")
    if len(set(order)) != len(order):
        raise InvalidMap([], "edge order repeats a label")

    number = {label: i for i, label in enumerate(order)}
    right_inverse = invert(right)
    turn = {label: right_inverse[left[label]] for label in order}

    rotations, seen = [], set()
    for start in order:
        if start in seen:
            continue
        rotation, x = [], start
        while x not in seen:
            seen.add(x)
            rotation.append(2 * number[x] + 1)
            rotation.append(2 * number[left[x]])
            x = turn[x]
        rotations.append(tuple(rotation))
    edges = tuple((label, 2 * number[label], 2 * number[label] + 1) for label in order)
    return AlternatingDimap(edges, tuple(rotations))


def successor_form(dimap):
    return dict(dimap.left), dict(dimap.right)


def relabel(dimap, mapping):
    order = [mapping[label] for label in dimap.labels]
    left = {mapping[a]: mapping[b] for a, b in dimap.left.items()}
    right = {mapping[a]: mapping[b] for a, b in dimap.right.items()}
    return from_successors(left, right, order)


def disjoint_union(first, second):
    """Components of both maps on separate surfaces; clashing labels get _0/_1 suffixes."""
    if set(first.labels).isdisjoint(second.labels):
        left_names = {label: label for label in first.labels}
        right_names = {label: label for label in second.labels}
    else:
        left_names = {label: f'{label}_0' for label in first.labels}
        right_names = {label: f'{label}_1' for label in second.labels}
    shift = 1 + max((d for r in first.rotations for d in r), default=-1)
    edges = tuple((left_names[label], t, h) for label, t, h in first.edges) + tuple(
        (right_names[label], t + shift, h + shift) for label, t, h in second.edges
    )
    rotations = first.rotations + tuple(tuple(d + shift for d in r) for r in second.rotations)
    return AlternatingDimap(edges, rotations)


def k_copies(dimap, k):
    if k < 0:
        raise ValueError(f"number of copies must be non-negative, got {k}")
    if k == 1:
        return dimap
    result = empty()
    for j in range(k):
        copy = relabel(dimap, {label: f'{label}_{j}' for label in dimap.labels})
        result = disjoint_union(result, copy)
    return result


# ---------------------------------------------------------------------------
# Validation and structure
# ---------------------------------------------------------------------------

def validate(dimap):
    """List of Violations; empty when the rotation system is an alternating dimap."""
    violations = []
    for label, count in Counter(dimap.labels).items():
        if count > 1:
            violations.append(Violation(ViolationKind.DUPLICATE_LABEL, f'edge {label}', f'label used {count} times'))

    is_tail = {}
    edge_darts = Counter()
    for label, t, h in dimap.edges:
        edge_darts.update([t, h])
        is_tail[t] = True
        is_tail[h] = False
    rotation_darts = Counter(d for r in dimap.rotations for d in r)

    for dart, count in sorted(edge_darts.items()):
        if count > 1:
            violations.append(Violation(ViolationKind.DART_PAIRING, f'dart {dart}', f'in {count} edge ends'))
        if rotation_darts[dart] != 1:
            violations.append(Violation(ViolationKind.DART_ROTATION, f'dart {dart}',
                                        f'in {rotation_darts[dart]} rotations'))
    for dart in sorted(set(rotation_darts) - set(edge_darts)):
        violations.append(Violation(ViolationKind.DART_PAIRING, f'dart {dart}', 'belongs to no edge'))

    for index, rotation in enumerate(dimap.rotations):
        if not rotation:
            violations.append(Violation(ViolationKind.ISOLATED_VERTEX, f'vertex {index}', 'no incident darts'))
            continue
        kinds = [is_tail.get(d) for d in rotation]
        if None in kinds:
            continue
        if len(rotation) % 2 or any(kinds[i] == kinds[(i + 1) % len(kinds)] for i in range(len(kinds))):
            violations.append(Violation(ViolationKind.ALTERNATION, f'vertex {index}',
                                        f'rotation {rotation} does not alternate in and out'))
    if violations:
        return violations

    # face tracing is only meaningful on a consistent dart structure
    for darts in _face_orbits(dimap):
        if len({is_tail[d] for d in darts}) > 1:
            violations.append(Violation(ViolationKind.FACE_ORIENTATION, f'face {darts}',
                                        'boundary changes direction'))
    return violations


def _face_orbits(dimap):
    partner, rho = {}, {}
    for _, t, h in dimap.edges:
        partner[t], partner[h] = h, t
    for rotation in dimap.rotations:
        for position, dart in enumerate(rotation):
            rho[dart] = rotation[(position + 1) % len(rotation)]
    order = [t for _, t, _ in dimap.edges] + [h for _, _, h in dimap.edges]
    return cycles({d: rho[partner[d]] for d in order}, order)


def faces(dimap):
    """Orbits of rho composed with the edge involution; tail-dart orbits are anticlockwise."""
    tail, head, owner, _, _ = dimap._darts
    tails = set(tail.values())
    out = []
    for darts in _face_orbits(dimap):
        orientation = FaceOrientation.ANTICLOCKWISE if darts[0] in tails else FaceOrientation.CLOCKWISE
        out.append(Face(darts, tuple(owner[d] for d in darts), orientation))
    return out


def left_successor(dimap, label):
    return dimap.left[dimap._known(label)]


def right_successor(dimap, label):
    return dimap.right[dimap._known(label)]


def components(dimap):
    """Edge sets of the connected components, in edge order of their first member."""
    seen, out = set(), []
    for start in dimap.labels:
        if start in seen:
            continue
        block, queue = [], deque([start])
        seen.add(start)
        while queue:
            x = queue.popleft()
            block.append(x)
            for y in (dimap.left[x], dimap.right[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        out.append(frozenset(block))
    return out


def genus(dimap, component=None):
    """Genus of one component (a set of edge labels); defaults to the only component."""
    if component is None:
        blocks = components(dimap)
        if len(blocks) != 1:
            raise ValueError(f"map has {len(blocks)} components; name one")
        component = blocks[0]
    component = frozenset(component)
    members = [label for label in dimap.labels if label in component]
    if not members:
        raise UnknownEdge(f"component {sorted(component)} has no edges in this map")
    vertices = len(cycles(dimap.turn, members))
    face_count = len(cycles(dimap.left, members)) + len(cycles(dimap.right, members))
    twice = 2 - vertices + len(members) - face_count
    if twice % 2 or twice < 0:
        raise NonIntegerGenus(f"V={vertices}, E={len(members)}, F={face_count} on {sorted(component)}")
    return twice // 2


def genus_profile(dimap):
    return tuple(sorted(genus(dimap, block) for block in components(dimap)))


def total_genus(dimap):
    return sum(genus_profile(dimap))


def counts(dimap):
    """(vertices, edges, faces)."""
    return (len(dimap.rotations), len(dimap.edges),
            len(cycles(dimap.left, dimap.labels)) + len(cycles(dimap.right, dimap.labels)))


# ---------------------------------------------------------------------------
# Triality
# ---------------------------------------------------------------------------

def trial(dimap):
    """
    G^w with edge map e -> e^w (labels kept). Its left successor is T^-1 and
    its right successor L^-1, so its vertices are the clockwise faces of G
    and trial three times is the identity.
    """
    left_inverse = invert(dimap.left)
    left = {label: left_inverse[dimap.right[label]] for label in dimap.labels}
    result = from_successors(left, left_inverse, dimap.labels)
    return result, {label: label for label in dimap.labels}


def trial_power(dimap, kind):
    """G^mu for mu in {1, w, w2}: trial applied 0, 1 or 2 times."""
    for _ in range(int(ReductionKind(kind))):
        dimap, _ = trial(dimap)
    return dimap


# ---------------------------------------------------------------------------
# Edge classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EdgeClassification:
    label: str
    is_loop: bool
    is_ultraloop: bool
    is_1loop: bool
    is_omega_loop: bool
    is_omega2_loop: bool
    is_1semiloop: bool
    is_omega_semiloop: bool
    is_omega2_semiloop: bool
    notes: tuple = field(default=(), compare=False)

    @property
    def is_triloop(self):
        return self.is_1loop or self.is_omega_loop or self.is_omega2_loop

    @property
    def is_proper_triloop(self):
        return self.is_triloop and not self.is_ultraloop

    def is_semiloop(self, kind):
        kind = ReductionKind(kind)
        return (self.is_1semiloop, self.is_omega_semiloop, self.is_omega2_semiloop)[kind.value]

    @property
    def is_proper_semiloop(self):
        return any(self.is_semiloop(kind) for kind in ReductionKind) and not self.is_triloop

    def flags(self):
        names = ['loop', 'ultraloop', '1-loop', 'w-loop', 'w2-loop', 'triloop', 'proper-triloop',
                 '1-semiloop', 'w-semiloop', 'w2-semiloop', 'proper-semiloop']
        values = [self.is_loop, self.is_ultraloop, self.is_1loop, self.is_omega_loop, self.is_omega2_loop,
                  self.is_triloop, self.is_proper_triloop, self.is_1semiloop, self.is_omega_semiloop,
                  self.is_omega2_semiloop, self.is_proper_semiloop]
        return [name for name, value in zip(names, values) if value]


def _reduction_splits(dimap, label, kind):
    from .reduce import reduce

    reduced = reduce(dimap, label, kind)
    return (len(components(reduced)) > len(components(dimap))
            or total_genus(reduced) < total_genus(dimap))


def classify_edge(dimap, label):
    dimap._known(label)
    is_omega_loop = dimap.left[label] == label
    is_omega2_loop = dimap.right[label] == label
    is_loop = dimap.tail_vertex(label) == dimap.head_vertex(label)
    return EdgeClassification(
        label=label,
        is_loop=is_loop,
        is_ultraloop=is_omega_loop and is_omega2_loop,
        is_1loop=dimap.turn[label] == label,
        is_omega_loop=is_omega_loop,
        is_omega2_loop=is_omega2_loop,
        is_1semiloop=is_loop,
        is_omega_semiloop=is_omega2_loop or _reduction_splits(dimap, label, ReductionKind.OMEGA2),
        is_omega2_semiloop=is_omega_loop or _reduction_splits(dimap, label, ReductionKind.OMEGA),
    )


# ---------------------------------------------------------------------------
# Equality, canonical form and isomorphism
# ---------------------------------------------------------------------------

def labeled_equal(first, second):
    return (set(first.labels) == set(second.labels)
            and first.left == second.left
            and first.right == second.right)


def _component_code(dimap, start):
    number, order = {start: 0}, [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in (dimap.left[x], dimap.right[x]):
            if y not in number:
                number[y] = len(order)
                order.append(y)
                queue.append(y)
    code = tuple((number[dimap.left[x]], number[dimap.right[x]]) for x in order)
    return code, order


def canonical_labeling(dimap):
    """(canonical form, edge labels in canonical order)."""
    blocks = []
    for block in components(dimap):
        starts = [label for label in dimap.labels if label in block]
        blocks.append(min((_component_code(dimap, s) for s in starts), key=lambda item: item[0]))
    blocks.sort(key=lambda item: (len(item[0]), item[0]))
    form = tuple(code for code, _ in blocks)
    order = [label for _, block_order in blocks for label in block_order]
    return form, order


def canonical_form(dimap):
    return canonical_labeling(dimap)[0]


def canonical_map(dimap):
    """The isomorphic copy with edges e0..e{k-1} in canonical order."""
    _, order = canonical_labeling(dimap)
    return relabel(dimap, {label: f'e{i}' for i, label in enumerate(order)})


def isomorphic(first, second):
    return len(first) == len(second) and canonical_form(first) == canonical_form(second)


def isomorphism(first, second):
    """Label bijection first -> second commuting with both successors, or None."""
    form, first_order = canonical_labeling(first)
    other_form, second_order = canonical_labeling(second)
    if form != other_form:
        return None
    return dict(zip(first_order, second_order))


def isomorphisms(first, second):
    """Every label bijection first -> second commuting with both successors."""
    if not isomorphic(first, second):
        return
    starts = [
        _component_code(first, next(label for label in first.labels if label in block))
        for block in components(first)
    ]
    targets = [
        [_component_code(second, t) for t in second.labels if t in block]
        for block in components(second)
    ]

    def extend(index, used, mapping):
        if index == len(starts):
            yield dict(mapping)
            return
        code, order = starts[index]
        for j, block in enumerate(targets):
            if j in used:
                continue
            for other_code, other_order in block:
                if other_code == code:
                    yield from extend(index + 1, used | {j}, {**mapping, **dict(zip(order, other_order))})

    yield from extend(0, frozenset(), {})


# ---------------------------------------------------------------------------
# File format: "adm <ndarts>", "edge <label> <tail> <head>", "vertex <dart> ..."
# ---------------------------------------------------------------------------

def parse_adm(text, strict=True):
    """Parse an .adm file; with strict=False an invalid map is returned unvalidated."""
    ndarts, edges, rotations = None, [], []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        try:
            if ndarts is None:
                if fields[0] != 'adm' or len(fields) != 2:
                    raise DimapFileError(f"line {lineno}: expected 'adm <ndarts>', got {line!r}")
                ndarts = int(fields[1])
            elif fields[0] == 'edge' and len(fields) == 4:
                edges.append((fields[1], int(fields[2]), int(fields[3])))
            elif fields[0] == 'vertex' and len(fields) > 1:
                rotations.append(tuple(int(d) for d in fields[1:]))
            else:
                raise DimapFileError(f"line {lineno}: cannot parse {line!r}")
        except DimapFileError:
            raise
        except ValueError:
            raise DimapFileError(f"line {lineno}: non-integer dart in {line!r}")

    if ndarts is None:
        raise DimapFileError("missing 'adm <ndarts>' header")
    if ndarts != 2 * len(edges):
        raise DimapFileError(f"header declares {ndarts} darts but {len(edges)} edges were given")
    dimap = AlternatingDimap(tuple(edges), tuple(rotations))
    if not strict:
        return dimap
    violations = validate(dimap)
    if violations:
        raise DimapFileError('; '.join(str(v) for v in violations))
    return dimap


def format_adm(dimap):
    lines = [f'adm {2 * len(dimap.edges)}']
    lines += [f'edge {label} {t} {h}' for label, t, h in dimap.edges]
    lines += ['vertex ' + ' '.join(str(d) for d in rotation) for rotation in dimap.rotations]
    return '\n'.join(lines) + '\n'


def read_adm(path, strict=True):
    return parse_adm(Path(path).read_text(encoding='utf-8'), strict)


def write_adm(dimap, path):
    Path(path).write_text(format_adm(dimap), encoding='utf-8')
    logger.debug("wrote %r to %s", dimap, path)
