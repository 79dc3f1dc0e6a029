import tempfile
from pathlib import Path

from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hyp_settings, strategies as st

from .altmap import (
    AlternatingDimap,
    build,
    canonical_form,
    canonical_map,
    classify_edge,
    components,
    counts,
    cycles,
    disjoint_union,
    empty,
    faces,
    format_adm,
    from_successors,
    genus,
    genus_profile,
    isomorphic,
    isomorphism,
    isomorphisms,
    k_copies,
    labeled_equal,
    left_successor,
    parse_adm,
    read_adm,
    relabel,
    right_successor,
    successor_form,
    trial,
    trial_power,
    ultraloop,
    validate,
    write_adm,
)
from .catalog import connected_dimaps, enumerate_dimaps, self_trial_members, write_catalog
from .choices import FaceOrientation, ReductionKind, ViolationKind
from .exceptions import CapExceeded, DimapFileError, InvalidMap, UnknownEdge
from .reduce import (
    find_noncommuting_pair,
    is_degenerate_edge,
    reduce,
    reduce_sequence,
    search_noncommuting,
    totally_reduction_commutative,
    trial_minor_check,
)

KINDS = list(ReductionKind)


def perm(spec, labels):
    """Permutation from cycle notation, e.g. perm('(a b)(c d)', 'abcd')."""
    out = {label: label for label in labels}
    for chunk in spec.replace(')', '').split('('):
        members = chunk.split()
        for i, label in enumerate(members):
            out[label] = members[(i + 1) % len(members)]
    return out


def dimap(left, right, labels):
    return from_successors(perm(left, labels), perm(right, labels), list(labels))


def directed_digon():
    return dimap('(a b)', '(a b)', 'ab')


def omega_pair():
    return dimap('()', '(a b)', 'ab')


def torus():
    """One vertex, three loops, genus 1."""
    return dimap('(a b c)', '(a c b)', 'abc')


def witness():
    return dimap('(a b)(c d)', '(a c)(b d)', 'abcd')


def catalog_maps(kmax):
    for k in range(kmax + 1):
        yield from enumerate_dimaps(k).maps


labels4 = list('abcd')
maps4 = st.tuples(st.permutations(labels4), st.permutations(labels4)).map(
    lambda pair: from_successors(dict(zip(labels4, pair[0])), dict(zip(labels4, pair[1])), labels4)
)


class ValidationTests(SimpleTestCase):

    def test_ultraloop_and_empty_are_valid(self):
        self.assertEqual(validate(ultraloop()), [])
        self.assertEqual(validate(empty()), [])

    def test_adjacent_head_darts_break_alternation(self):
        bad = AlternatingDimap((('a', 0, 1), ('b', 2, 3)), ((1, 3, 0, 2),))
        self.assertEqual([v.kind for v in validate(bad)], [ViolationKind.ALTERNATION])
        with self.assertRaises(InvalidMap):
            build(bad.edges, bad.rotations)
        with self.assertRaises(InvalidMap):
            bad.left

    def test_isolated_vertex_and_missing_dart(self):
        kinds = {v.kind for v in validate(AlternatingDimap((('a', 0, 1),), ((0, 1), ())))}
        self.assertEqual(kinds, {ViolationKind.ISOLATED_VERTEX})
        kinds = {v.kind for v in validate(AlternatingDimap((('a', 0, 1),), ((0,),)))}
        self.assertIn(ViolationKind.DART_ROTATION, kinds)

    def test_duplicate_labels(self):
        bad = AlternatingDimap((('a', 0, 1), ('a', 2, 3)), ((0, 1), (2, 3)))
        self.assertIn(ViolationKind.DUPLICATE_LABEL, {v.kind for v in validate(bad)})

    def test_from_successors_needs_permutations(self):
        with self.assertRaises(InvalidMap):
            from_successors({'a': 'a', 'b': 'a'}, {'a': 'a', 'b': 'b'})

    def test_generated_maps_are_valid(self):
        for G in catalog_maps(4):
            self.assertEqual(validate(G), [])


class StructureTests(SimpleTestCase):

    def test_ultraloop_faces(self):
        found = faces(ultraloop())
        self.assertEqual(sorted(len(f) for f in found), [1, 1])
        self.assertEqual({f.orientation for f in found},
                         {FaceOrientation.CLOCKWISE, FaceOrientation.ANTICLOCKWISE})

    def test_copies_of_ultraloop_have_two_faces_each(self):
        for k in range(4):
            self.assertEqual(len(faces(k_copies(ultraloop(), k))), 2 * k)

    def test_orientations_two_colour_the_faces(self):
        for G in catalog_maps(3):
            found = faces(G)
            for label in G.labels:
                sides = [f.orientation for f in found if label in f.edges]
                self.assertCountEqual(sides, [FaceOrientation.CLOCKWISE, FaceOrientation.ANTICLOCKWISE])

    def test_successors(self):
        self.assertEqual(left_successor(ultraloop('a'), 'a'), 'a')
        self.assertEqual(right_successor(ultraloop('a'), 'a'), 'a')
        self.assertEqual(left_successor(omega_pair(), 'a'), 'a')
        self.assertEqual(left_successor(directed_digon(), 'a'), 'b')
        with self.assertRaises(UnknownEdge):
            left_successor(ultraloop('a'), 'z')

    def test_successor_form_round_trip(self):
        G = torus()
        self.assertEqual(successor_form(G), (perm('(a b c)', 'abc'), perm('(a c b)', 'abc')))

    def test_components_and_genus(self):
        self.assertEqual(len(components(ultraloop())), 1)
        self.assertEqual(genus(ultraloop()), 0)
        three = k_copies(ultraloop(), 3)
        self.assertEqual(len(components(three)), 3)
        self.assertEqual(genus_profile(three), (0, 0, 0))
        self.assertEqual(genus(torus()), 1)
        self.assertEqual(counts(torus()), (1, 3, 2))

    def test_two_edge_maps_are_planar(self):
        for G in enumerate_dimaps(2).maps:
            self.assertEqual(set(genus_profile(G)), {0})

    def test_euler_characteristic_is_even(self):
        for G in catalog_maps(4):
            self.assertTrue(all(g >= 0 for g in genus_profile(G)))

    def test_disjoint_union_and_copies(self):
        G = torus()
        self.assertTrue(labeled_equal(disjoint_union(G, empty()), G))
        self.assertEqual(len(k_copies(ultraloop(), 0)), 0)
        three = k_copies(ultraloop(), 3)
        self.assertEqual(len(three), 3)
        self.assertEqual(len(set(three.labels)), 3)
        both = disjoint_union(G, G)
        self.assertEqual(len(components(both)), 2)
        self.assertEqual(genus_profile(both), (1, 1))

    def test_adm_file(self):
        G = torus()
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'torus.adm'
            write_adm(G, path)
            self.assertTrue(labeled_equal(read_adm(path), G))
        self.assertTrue(format_adm(ultraloop('x')).startswith('adm 2\nedge x 0 1\n'))

    def test_invalid_adm_files(self):
        for text in ('edge a 0 1\n', 'adm 2\nedge a 0 1\nvertex 0 0\n', 'adm 4\nedge a 0 1\nvertex 0 1\n',
                     'adm 4\nedge a 0 1\nedge b 2 3\nvertex 1 3 0 2\n', 'adm 2\nedge a x 1\n'):
            with self.subTest(text=text), self.assertRaises(DimapFileError):
                parse_adm(text)


class TrialityTests(SimpleTestCase):

    def test_ultraloop_is_self_trial(self):
        G, edge_map = trial(ultraloop('a'))
        self.assertTrue(labeled_equal(G, ultraloop('a')))
        self.assertEqual(edge_map, {'a': 'a'})

    def test_copies_of_ultraloop_are_self_trial(self):
        three = k_copies(ultraloop(), 3)
        self.assertTrue(labeled_equal(trial(three)[0], three))

    def test_trial_vertices_are_clockwise_faces(self):
        for G in catalog_maps(3):
            clockwise = [f for f in faces(G) if f.orientation == FaceOrientation.CLOCKWISE]
            self.assertEqual(len(trial(G)[0].rotations), len(clockwise))

    def test_trial_cubed_is_identity_on_catalogs(self):
        for G in catalog_maps(4):
            self.assertTrue(labeled_equal(trial_power(trial_power(G, 2), 1), G))

    @given(maps4)
    @hyp_settings(deadline=None, max_examples=100)
    def test_trial_cubed_is_identity_on_random_maps(self, G):
        self.assertTrue(labeled_equal(trial(trial(trial(G)[0])[0])[0], G))

    def test_two_edge_maps_form_a_trial_orbit(self):
        catalog = enumerate_dimaps(2)
        others = [G for G in catalog.maps if not isomorphic(G, k_copies(ultraloop(), 2))]
        self.assertEqual(len(others), 3)
        images = {catalog.index_of(trial(G)[0]) for G in others}
        self.assertEqual(images, {catalog.index_of(G) for G in others})


class ClassificationTests(SimpleTestCase):

    def test_ultraloop(self):
        c = classify_edge(ultraloop('a'), 'a')
        self.assertTrue(c.is_ultraloop)
        self.assertTrue(c.is_1loop and c.is_omega_loop and c.is_omega2_loop)
        self.assertFalse(c.is_proper_triloop)
        self.assertFalse(c.is_proper_semiloop)

    def test_one_loop_need_not_be_a_loop(self):
        c = classify_edge(directed_digon(), 'a')
        self.assertTrue(c.is_1loop)
        self.assertFalse(c.is_loop)

    def test_omega_loop_in_larger_map(self):
        c = classify_edge(omega_pair(), 'a')
        self.assertTrue(c.is_loop)
        self.assertTrue(c.is_omega_loop)
        self.assertFalse(c.is_omega2_loop)
        self.assertTrue(c.is_proper_triloop)

    def test_ultraloop_implies_every_loop_kind(self):
        for G in catalog_maps(3):
            for label in G.labels:
                c = classify_edge(G, label)
                if c.is_ultraloop:
                    self.assertTrue(c.is_1loop and c.is_omega_loop and c.is_omega2_loop)

    def test_unknown_edge(self):
        with self.assertRaises(UnknownEdge):
            classify_edge(torus(), 'z')


class IsomorphismTests(SimpleTestCase):

    def test_renamed_darts_are_labeled_equal(self):
        renamed = AlternatingDimap((('a', 5, 9),), ((9, 5),))
        self.assertTrue(labeled_equal(renamed, ultraloop('a')))

    def test_different_edge_counts(self):
        self.assertFalse(isomorphic(k_copies(ultraloop(), 2), ultraloop()))

    def test_four_two_edge_maps(self):
        forms = {canonical_form(G) for G in enumerate_dimaps(2).maps}
        self.assertEqual(len(forms), 4)

    def test_explicit_isomorphism(self):
        G = witness()
        H = relabel(G, {'a': 'w', 'b': 'x', 'c': 'y', 'd': 'z'})
        H = from_successors(H.right, H.left)  # mirror, still isomorphic here
        mapping = isomorphism(G, H)
        self.assertIsNotNone(mapping)
        for label in G.labels:
            self.assertEqual(H.left[mapping[label]], mapping[G.left[label]])
            self.assertEqual(H.right[mapping[label]], mapping[G.right[label]])

    def test_isomorphism_absent(self):
        self.assertIsNone(isomorphism(directed_digon(), omega_pair()))

    def test_all_isomorphisms(self):
        three = k_copies(ultraloop(), 3)
        found = list(isomorphisms(three, three))
        self.assertEqual(len(found), 6)
        self.assertEqual(len({tuple(sorted(m.items())) for m in found}), 6)
        G = witness()
        H = relabel(G, {'a': 'w', 'b': 'x', 'c': 'y', 'd': 'z'})
        for mapping in isomorphisms(G, H):
            for label in G.labels:
                self.assertEqual(H.left[mapping[label]], mapping[G.left[label]])
                self.assertEqual(H.right[mapping[label]], mapping[G.right[label]])
        self.assertEqual(list(isomorphisms(directed_digon(), omega_pair())), [])
        self.assertEqual(list(isomorphisms(empty(), empty())), [{}])

    def test_canonical_map_labels(self):
        self.assertEqual(canonical_map(torus()).labels, ('e0', 'e1', 'e2'))
        self.assertTrue(isomorphic(canonical_map(torus()), torus()))


class ReductionTests(SimpleTestCase):

    def test_ultraloop_disappears(self):
        for kind in KINDS:
            self.assertEqual(len(reduce(ultraloop('a'), 'a', kind)), 0)

    def test_two_ultraloops_reduce_to_one(self):
        two = k_copies(ultraloop(), 2)
        for label in two.labels:
            for kind in KINDS:
                self.assertTrue(isomorphic(reduce(two, label, kind), ultraloop()))

    def test_torus_reductions(self):
        G = torus()
        swap = perm('(b c)', 'bc')
        fixed = perm('()', 'bc')
        self.assertEqual(successor_form(reduce(G, 'a', ReductionKind.ONE)), (swap, swap))
        self.assertEqual(successor_form(reduce(G, 'a', ReductionKind.OMEGA)), (swap, fixed))
        self.assertEqual(successor_form(reduce(G, 'a', ReductionKind.OMEGA2)), (fixed, swap))

    def test_unknown_edge(self):
        with self.assertRaises(UnknownEdge):
            reduce(torus(), 'z', ReductionKind.ONE)

    def test_every_sequence_ends_empty(self):
        for G in enumerate_dimaps(3).maps:
            for kind in KINDS:
                steps = [(label, kind) for label in G.labels]
                self.assertEqual(len(reduce_sequence(G, steps)), 0)

    def test_reductions_stay_in_catalog(self):
        for k in range(1, 5):
            smaller = enumerate_dimaps(k - 1)
            for G in enumerate_dimaps(k).maps:
                for label in G.labels:
                    for kind in KINDS:
                        H = reduce(G, label, kind)
                        self.assertEqual(len(H), k - 1)
                        self.assertIsNotNone(smaller.index_of(H))

    def test_maps_reducing_only_to_ultraloops(self):
        two = k_copies(ultraloop(), 2)
        for G in enumerate_dimaps(3).maps:
            if all(isomorphic(reduce(G, label, kind), two) for label in G.labels for kind in KINDS):
                self.assertTrue(isomorphic(G, k_copies(ultraloop(), 3)))

    def test_trial_minor_identity(self):
        for G in catalog_maps(3):
            for label in G.labels:
                for mu in KINDS:
                    for nu in KINDS:
                        with self.subTest(G=G, label=label, mu=mu, nu=nu):
                            self.assertTrue(trial_minor_check(G, label, mu, nu))

    @given(maps4, st.sampled_from(labels4), st.sampled_from(KINDS), st.sampled_from(KINDS))
    @hyp_settings(deadline=None, max_examples=100)
    def test_trial_minor_identity_on_random_maps(self, G, label, mu, nu):
        self.assertTrue(trial_minor_check(G, label, mu, nu))

    def test_degenerate_edges(self):
        self.assertTrue(is_degenerate_edge(ultraloop('a'), 'a'))
        self.assertTrue(is_degenerate_edge(omega_pair(), 'a'))
        self.assertFalse(is_degenerate_edge(torus(), 'a'))

    def test_degenerate_edges_are_triloops(self):
        for G in catalog_maps(4):
            for label in G.labels:
                self.assertEqual(is_degenerate_edge(G, label), classify_edge(G, label).is_triloop)

    def test_disconnecting_edge_is_proper_semiloop(self):
        for G in catalog_maps(4):
            if len(components(G)) != 1:
                continue
            for label in G.labels:
                for kind in KINDS:
                    if len(components(reduce(G, label, kind))) > 1:
                        c = classify_edge(G, label)
                        self.assertTrue(c.is_semiloop(kind.inverse))
                        self.assertTrue(c.is_proper_semiloop)


class CommutativityTests(SimpleTestCase):

    def test_copies_of_ultraloop_commute(self):
        for k in range(4):
            self.assertTrue(totally_reduction_commutative(k_copies(ultraloop(), k)))

    def test_small_maps_commute(self):
        for G in catalog_maps(3):
            self.assertTrue(totally_reduction_commutative(G))
            self.assertIsNone(find_noncommuting_pair(G))

    def test_four_edge_witness(self):
        G = witness()
        forward = reduce_sequence(G, [('a', ReductionKind.ONE), ('b', ReductionKind.OMEGA)])
        backward = reduce_sequence(G, [('b', ReductionKind.OMEGA), ('a', ReductionKind.ONE)])
        self.assertEqual(successor_form(forward), (perm('(c d)', 'cd'), perm('()', 'cd')))
        self.assertEqual(successor_form(backward), (perm('(c d)', 'cd'), perm('(c d)', 'cd')))
        self.assertFalse(labeled_equal(forward, backward))
        pair = find_noncommuting_pair(G)
        self.assertIsNotNone(pair)
        self.assertFalse(totally_reduction_commutative(G))

    def test_search_finds_four_edges(self):
        found = search_noncommuting(4)
        self.assertIsNotNone(found)
        G, pair = found
        self.assertEqual(len(G), 4)
        self.assertIsNone(search_noncommuting(3))


class CatalogTests(SimpleTestCase):

    def test_counts(self):
        self.assertEqual([len(enumerate_dimaps(k)) for k in range(5)], [1, 1, 4, 11, 43])

    def test_connected_counts(self):
        self.assertEqual([len(connected_dimaps(k)) for k in range(5)], [0, 1, 3, 7, 26])

    def test_strategies_agree(self):
        for k in range(5):
            compositional = {canonical_form(G) for G in enumerate_dimaps(k, 'compositional')}
            rotation = {canonical_form(G) for G in enumerate_dimaps(k, 'rotation')}
            self.assertEqual(compositional, rotation)

    @override_settings(TRIALAB_ENUMERATION_CAP=2)
    def test_cap(self):
        with self.assertRaises(CapExceeded):
            enumerate_dimaps(3)

    def test_self_trial_members(self):
        self.assertEqual(len(self_trial_members(enumerate_dimaps(0))), 1)
        [C1] = self_trial_members(enumerate_dimaps(1))
        self.assertTrue(isomorphic(C1, ultraloop()))
        [two] = self_trial_members(enumerate_dimaps(2))
        self.assertTrue(isomorphic(two, k_copies(ultraloop(), 2)))

    def test_closed_under_trial(self):
        for k in range(5):
            catalog = enumerate_dimaps(k)
            for G in catalog.maps:
                self.assertIsNotNone(catalog.index_of(trial(G)[0]))

    def test_counts_summary(self):
        catalog = enumerate_dimaps(2)
        self.assertEqual(catalog.counts[(2, (0, 0), True)], 1)
        self.assertEqual(sum(catalog.counts.values()), 4)

    def test_write_catalog(self):
        catalog = enumerate_dimaps(2)
        with tempfile.TemporaryDirectory() as tmp:
            write_catalog(catalog, tmp)
            files = sorted(Path(tmp).glob('*.adm'))
            self.assertEqual(len(files), 4)
            for path, G in zip(files, catalog.maps):
                self.assertTrue(labeled_equal(read_adm(path), G))
            self.assertIn('self-trial', (Path(tmp) / 'summary.txt').read_text())

    def test_cycles_helper(self):
        self.assertEqual(cycles(perm('(a b)', 'abc'), 'abc'), [('a', 'b'), ('c',)])
