import cmath
import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hyp_settings, strategies as st
from numpy.testing import assert_allclose

from binary_functions.binfun import make, proportional, tensor_power, unit
from binary_functions.minor import MinorSpec, take_minor
from binary_functions.transform import OMEGA, OMEGA2, SQRT2, m_matrix, self_trial
from dimaps.altmap import isomorphic, k_copies, ultraloop
from dimaps.exceptions import CapExceeded

from .exceptions import NotMinorClosed
from .represent import (
    RepresentationCandidate,
    _minor_rows,
    canonical_Uk,
    check_representation,
    claim1_solve,
    claim2_check,
    claim2_solve,
    claim3_check,
    claim3_members,
    empty_class,
    main_theorem_check,
    search_nu,
    self_trial_obstructions,
    trinity_eigenvalues,
    ultraloop_image,
)

U = SQRT2 - 1


def with_bad_ultraloop_image():
    members = (k_copies(ultraloop(), 0), ultraloop('a'))
    return RepresentationCandidate(members, (unit(), make(1, [1, 1])), ({}, {'a': 0}))


class CanonicalClassTests(SimpleTestCase):

    def test_images(self):
        U0 = canonical_Uk(0)
        self.assertEqual(len(U0), 1)
        self.assertEqual(U0.images[0].m, 0)
        assert_allclose(canonical_Uk(1).images[1].values, [1, U])
        assert_allclose(canonical_Uk(2).images[2].values, [1, U, U, U * U])

    def test_canonical_classes_pass(self):
        for k in range(6):
            with self.subTest(k=k):
                report = check_representation(canonical_Uk(k))
                self.assertTrue(report.passed, report.witnesses())

    @given(st.floats(min_value=0, max_value=2 * math.pi, allow_nan=False))
    @hyp_settings(deadline=None, max_examples=10)
    def test_any_phase_passes(self, angle):
        self.assertTrue(check_representation(canonical_Uk(3, nu=cmath.exp(1j * angle))).passed)

    def test_empty_class_passes(self):
        self.assertTrue(check_representation(empty_class()).passed)

    def test_ultraloop_image_must_be_self_trial(self):
        report = check_representation(with_bad_ultraloop_image())
        self.assertFalse(report.conditions['d'].passed)
        self.assertTrue(report.conditions['e'].passed)
        self.assertFalse(report.passed)
        self.assertIsNone(search_nu(with_bad_ultraloop_image(), samples=8))

    def test_phase_modulus(self):
        report = check_representation(canonical_Uk(2, nu=2))
        self.assertFalse(report.conditions['c'].passed)
        self.assertTrue(report.conditions['e'].passed)

    def test_malformed_candidate(self):
        candidate = RepresentationCandidate((ultraloop('a'),), (unit(),), ({'a': 0},))
        report = check_representation(candidate)
        self.assertFalse(report.conditions['a'].passed)
        self.assertFalse(report.conditions['d'].passed)

    def test_bad_element_map(self):
        candidate = canonical_Uk(1)
        broken = RepresentationCandidate(candidate.members, candidate.images, ({}, {'e': 1}))
        self.assertFalse(check_representation(broken).conditions['b'].passed)

    def test_class_must_be_minor_closed(self):
        candidate = RepresentationCandidate((ultraloop('a'),), (ultraloop_image(),), ({'a': 0},))
        with self.assertRaises(NotMinorClosed):
            check_representation(candidate)

    def test_search_nu(self):
        self.assertEqual(search_nu(canonical_Uk(2), samples=12), 1)

    def test_every_automorphism_of_a_member_is_checked(self):
        # with L[w] the identity only the automorphism swapping the two loops can fail
        U2 = canonical_Uk(2)
        symmetric = make(2, [1, 2, 2, 4], labels=U2.images[2].labels)
        lopsided = make(2, [1, 2, 3, 4], labels=U2.images[2].labels)
        with mock.patch('representations.represent.transform', side_effect=lambda f, mu: f):
            for image, passes in ((symmetric, True), (lopsided, False)):
                candidate = RepresentationCandidate(U2.members, U2.images[:2] + (image,), U2.element_maps)
                with self.subTest(image=image.values.tolist()):
                    self.assertEqual(check_representation(candidate).conditions['d'].passed, passes)


class ClaimTests(SimpleTestCase):

    def test_claim1(self):
        f = claim1_solve()
        assert_allclose(f.values, [1, U], atol=1e-12)
        assert_allclose(m_matrix(OMEGA).entries @ f.values, f.values, atol=1e-12)
        one, other = trinity_eigenvalues()
        self.assertAlmostEqual(one, 1, places=12)
        self.assertAlmostEqual(other, OMEGA, places=12)

    def test_tensor_powers_are_self_trial(self):
        for k in range(9):
            self.assertTrue(self_trial(tensor_power(ultraloop_image(), k)))

    def test_claim2_solution(self):
        solved = claim2_solve(1)
        assert_allclose(solved.solution.values, [1, U, U, U * U], atol=1e-12)
        self.assertEqual(solved.nullity_first_element, 2)
        self.assertEqual(solved.nullity_all_elements, 1)
        self.assertTrue(solved.two_values_suffice)

    def test_two_sampled_minors_per_element_pin_the_solution(self):
        for k in (1, 2, 3):
            for seed in (0, 1, 2):
                with self.subTest(k=k, seed=seed):
                    solved = claim2_solve(k, seed=seed)
                    self.assertEqual(solved.nullity_two_values, 1)
                    self.assertTrue(solved.two_values_suffice)
        # one mu per element leaves a second degree of freedom
        one_mu = _minor_rows(1, range(2), ultraloop_image().values, [0.5 + 0.5j])
        self.assertEqual(4 - np.linalg.matrix_rank(one_mu), 2)

    def test_claim2(self):
        for k in (1, 2, 3):
            self.assertTrue(claim2_check(k))
        with self.assertRaises(CapExceeded):
            claim2_check(4)

    @override_settings(TRIALAB_CLAIM2_CAP=4)
    def test_claim2_with_raised_cap(self):
        self.assertTrue(claim2_check(4))

    def test_perturbed_tensor_power_breaks_a_minor(self):
        values = np.array(tensor_power(ultraloop_image(), 2).values)
        values[3] += 0.1
        f = make(2, values)
        broken = [
            (i, mu) for i in (0, 1) for mu in (1, OMEGA, OMEGA2)
            if not proportional(take_minor(f, MinorSpec(i, mu)), ultraloop_image())
        ]
        self.assertTrue(broken)

    def test_claim3(self):
        self.assertTrue(claim3_check(1))
        self.assertTrue(claim3_check(2))
        self.assertTrue(claim3_check(3))
        [only] = claim3_members(2)
        self.assertTrue(isomorphic(only, k_copies(ultraloop(), 3)))

    def test_obstructions(self):
        found = self_trial_obstructions()
        self.assertEqual(len(found), 3)
        for obstruction in found:
            self.assertTrue(obstruction.holds)

    def test_main_theorem(self):
        report = main_theorem_check(5)
        self.assertTrue(report.passed, report.lines())
        self.assertEqual(sorted(report.class_reports), [0, 1, 2, 3, 4, 5])
        self.assertTrue(any(line.startswith('claim 3') for line in report.lines()))

    def test_main_theorem_bounds(self):
        with self.assertRaises(ValueError):
            main_theorem_check(6)
