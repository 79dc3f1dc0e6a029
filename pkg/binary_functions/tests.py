import cmath
import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase, override_settings
from hypothesis import assume, given, settings as hyp_settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from . import gf2
from .binfun import (
    BinaryFunction,
    RawVector,
    bits_of,
    delete_bit,
    format_bf,
    insert_bit,
    make,
    normalize,
    parse_bf,
    permute_elements,
    proportional,
    read_bf,
    read_raw,
    rowspace_indicator,
    subset_index,
    tensor,
    tensor_power,
    unit,
    write_bf,
)
from .exceptions import (
    BinaryFunctionFileError,
    DimensionMismatch,
    EmptySetNotOne,
    GroundSetTooLarge,
    IndexOutOfRange,
    NonFiniteValue,
    NormalizationError,
    PoleError,
    SingularTransform,
    WrongLength,
)
from .minor import (
    POLE,
    MinorSpec,
    contraction,
    degenerate_elements,
    degenerate_reduction_check,
    degenerate_reduction_sides,
    deletion,
    is_degenerate,
    lambda_mu,
    minors_commute_check,
    take_minor,
    transform_minor_check,
)
from .transform import (
    OMEGA,
    OMEGA2,
    SQRT2,
    dense_transform,
    inverse_transform,
    m_matrix,
    self_trial,
    special_name,
    transform,
    transform_power,
)

U = SQRT2 - 1
seeds = st.integers(min_value=0, max_value=2**32 - 1)


def ultraloop_image():
    return make(1, [1, U])


def random_bf(rng, m):
    values = rng.normal(size=1 << m) + 1j * rng.normal(size=1 << m)
    values[0] = 1
    return make(m, values)


def random_mu(rng):
    return cmath.rect(rng.uniform(0.4, 2.0), rng.uniform(0, 2 * math.pi))


def degenerate_bf(rng, m, i):
    """f_{G:i<-b} = c_b u_G, with element i at position i."""
    u = random_bf(rng, m - 1)
    c = complex(rng.normal(), rng.normal())
    f = tensor(make(1, [1, c]), u)
    order = list(range(1, m))
    order.insert(i, 0)
    return permute_elements(f, order), u


class BinaryFunctionTests(SimpleTestCase):

    def test_make_dimension_zero(self):
        f = make(0, [1])
        self.assertEqual(f.m, 0)
        self.assertEqual(f[0], 1)
        self.assertEqual(f.labels, ())

    def test_make_ultraloop_image(self):
        f = ultraloop_image()
        self.assertEqual(f.labels, ('e0',))
        self.assertAlmostEqual(f[1], SQRT2 - 1)

    def test_make_rejects_empty_entry_not_one(self):
        with self.assertRaises(EmptySetNotOne):
            make(1, [0, 1])

    def test_make_rejects_wrong_length(self):
        with self.assertRaises(WrongLength):
            make(2, [1, 0, 0])

    def test_values_are_read_only(self):
        f = make(1, [1, 2])
        with self.assertRaises(ValueError):
            f.values[1] = 5

    @override_settings(TRIALAB_MAX_GROUND_SET=2)
    def test_ground_set_limit(self):
        with self.assertRaises(GroundSetTooLarge):
            make(3, [1] * 8)

    def test_normalize(self):
        f = normalize(1, [2, 3])
        assert_allclose(f.values, [1, 1.5])
        with self.assertRaises(NormalizationError):
            normalize(1, [0, 3])

    def test_non_finite_entries_are_rejected(self):
        for values in ([math.nan, 0.5], [1, math.inf], [1, complex(0, math.nan)]):
            with self.subTest(values=values):
                with self.assertRaises(NonFiniteValue):
                    make(1, values)
                with self.assertRaises(NonFiniteValue):
                    normalize(1, values)
                with self.assertRaises(NonFiniteValue):
                    RawVector(1, values)

    def test_subset_index(self):
        self.assertEqual(subset_index((0, 0)), 0)
        self.assertEqual(subset_index((1, 0)), 2)
        self.assertEqual(subset_index((0, 1)), 1)

    def test_bits_of_inverts_subset_index(self):
        for index in range(16):
            self.assertEqual(subset_index(bits_of(index, 4)), index)
        with self.assertRaises(IndexOutOfRange):
            bits_of(16, 4)

    def test_insert_and_delete_bit(self):
        self.assertEqual(insert_bit((1, 0), 1, 1), (1, 1, 0))
        self.assertEqual(insert_bit((), 0, 0), (0,))
        self.assertEqual(insert_bit((1, 1), 2, 0), (1, 1, 0))
        self.assertEqual(delete_bit((1, 1, 0), 1), (1, 0))
        with self.assertRaises(IndexOutOfRange):
            insert_bit((1,), 3, 0)

    def test_proportional(self):
        b = RawVector(2, [1, 2j, -3, 0.5])
        a = RawVector(2, 2.5 * b.values)
        self.assertTrue(proportional(a, b))
        self.assertFalse(proportional(RawVector(1, [1, 0]), RawVector(1, [1, 1])))
        with self.assertRaises(DimensionMismatch):
            proportional(RawVector(1, [1, 0]), RawVector(0, [1]))

    def test_zero_vector_only_proportional_to_zero(self):
        zero = RawVector(1, [0, 0])
        self.assertTrue(proportional(zero, zero))
        self.assertFalse(proportional(zero, RawVector(1, [1, 0])))

    def test_binary_functions_proportional_only_when_equal(self):
        self.assertTrue(proportional(make(1, [1, 2]), make(1, [1, 2])))
        self.assertFalse(proportional(make(1, [1, 2]), make(1, [1, 3])))

    def test_tensor_with_unit(self):
        f = make(2, [1, 2, 3, 4])
        g = tensor(f, unit())
        assert_array_equal(g.values, f.values)
        self.assertEqual(g.labels, f.labels)

    def test_tensor_square_of_ultraloop_image(self):
        f = tensor_power(ultraloop_image(), 2)
        assert_allclose(f.values, [1, U, U, U * U])

    def test_tensor_coloop_loop(self):
        f = tensor(make(1, [1, 1], labels=['c']), make(1, [1, 0], labels=['l']))
        assert_array_equal(f.values, [1, 0, 1, 0])
        self.assertEqual(f.labels, ('c', 'l'))

    def test_tensor_suffixes_clashing_labels(self):
        f = tensor(ultraloop_image(), ultraloop_image())
        self.assertEqual(f.labels, ('e0_0', 'e0_1'))

    def test_permute_elements(self):
        f = make(2, [1, 2, 3, 4], labels=['a', 'b'])
        g = permute_elements(f, [1, 0])
        assert_array_equal(g.values, [1, 3, 2, 4])
        self.assertEqual(g.labels, ('b', 'a'))

    def test_slices_follow_most_significant_bit_convention(self):
        f = make(2, [1, 2, 3, 4])
        low, high = f.slices(0)
        assert_array_equal(low, [1, 2])
        assert_array_equal(high, [3, 4])
        low, high = f.slices(1)
        assert_array_equal(low, [1, 3])
        assert_array_equal(high, [2, 4])

    def test_rowspace_indicator_examples(self):
        assert_array_equal(rowspace_indicator([[0]]).values, [1, 0])
        assert_array_equal(rowspace_indicator([[1]]).values, [1, 1])
        digon = gf2.incidence_matrix(2, [(0, 1), (0, 1)])
        assert_array_equal(rowspace_indicator(digon).values, [1, 0, 0, 1])

    def test_rowspace_indicator_of_empty_matrix(self):
        f = rowspace_indicator([], columns=2)
        assert_array_equal(f.values, [1, 0, 0, 0])

    @given(seeds, st.integers(min_value=1, max_value=6), st.integers(min_value=1, max_value=4))
    @hyp_settings(deadline=None, max_examples=40)
    def test_rowspace_indicator_closed_under_sum(self, seed, m, rows):
        rng = np.random.default_rng(seed)
        f = rowspace_indicator(rng.integers(0, 2, size=(rows, m)))
        self.assertTrue(f.is_exact_indicator())
        support = [index for index in range(1 << m) if f[index] == 1]
        for a in support:
            for b in support:
                self.assertEqual(f[a ^ b], 1)


class FileFormatTests(SimpleTestCase):

    def test_write_then_read(self):
        f = make(2, [1, U, -0.25 + 1j, 1e-300])
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'f.bf'
            write_bf(f, path)
            self.assertTrue(path.read_text().startswith('bf 2\n'))
            g = read_bf(path)
        assert_array_equal(g.values, f.values)

    def test_comments_and_blank_lines(self):
        raw = parse_bf("# ultraloop\nbf 1\n\n0 1 0\n# second entry\n1 0.5 -0.5\n")
        assert_array_equal(raw.values, [1, 0.5 - 0.5j])

    def test_raw_file_needs_normalizing(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'raw.bf'
            path.write_text(format_bf(RawVector(1, [2, 1])))
            self.assertEqual(read_raw(path)[0], 2)
            with self.assertRaises(EmptySetNotOne):
                read_bf(path)
            assert_allclose(read_bf(path, normalize_on_load=True).values, [1, 0.5])

    def test_malformed_files(self):
        for text in ("0 1 0\n", "bf 1\n0 1 0\n", "bf 1\n0 1 0\n2 1 0\n", "bf x\n", "bf 1\n0 1\n1 1 0\n"):
            with self.subTest(text=text), self.assertRaises(BinaryFunctionFileError):
                parse_bf(text)

    def test_non_finite_entries_in_files(self):
        for text in ("bf 1\n0 nan 0\n1 0.5 0\n", "bf 1\n0 1 0\n1 inf 0\n", "bf 1\n0 1 0\n1 0.5 -inf\n"):
            with self.subTest(text=text), self.assertRaises(BinaryFunctionFileError):
                parse_bf(text)


class GF2Tests(SimpleTestCase):

    def test_rank(self):
        self.assertEqual(gf2.gf2_rank(np.eye(3, dtype=int)), 3)
        self.assertEqual(gf2.gf2_rank([[1, 1], [1, 1]]), 1)
        self.assertEqual(gf2.gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]), 2)

    def test_orthogonal_complement_of_digon(self):
        digon = gf2.incidence_matrix(2, [(0, 1), (0, 1)])
        assert_array_equal(gf2.orthogonal_complement(digon), [[1, 1]])

    def test_loops_and_coloops(self):
        zero, unit_columns = gf2.loops_and_coloops([[1, 0, 1], [0, 0, 1]])
        self.assertEqual(zero, [1])
        self.assertEqual(unit_columns, [0, 2])

    def test_incidence_matrix_loop_is_zero_column(self):
        N = gf2.incidence_matrix(2, [(0, 0), (0, 1)])
        assert_array_equal(N[:, 0], [0, 0])
        assert_array_equal(N[:, 1], [1, 1])


class TransformTests(SimpleTestCase):

    def test_identity_matrix_at_one(self):
        assert_array_equal(m_matrix(1).entries, np.eye(2))

    def test_hadamard_at_minus_one(self):
        assert_allclose(m_matrix(-1).entries, np.array([[1, 1], [1, -1]]) / SQRT2, atol=1e-15)

    def test_omega_eigenvalues(self):
        eigenvalues = sorted(np.linalg.eigvals(m_matrix(OMEGA).entries), key=lambda z: z.imag)
        assert_allclose(eigenvalues, [1, OMEGA], atol=1e-12)

    def test_special_names(self):
        self.assertEqual(special_name(OMEGA), 'w')
        self.assertEqual(special_name(OMEGA ** 2), 'w2')
        self.assertIsNone(special_name(2))

    @given(seeds)
    @hyp_settings(deadline=None, max_examples=100)
    def test_determinant_is_mu(self, seed):
        mu = random_mu(np.random.default_rng(seed))
        self.assertAlmostEqual(m_matrix(mu).det, mu, places=12)

    def test_identity_transform_is_exact(self):
        f = random_bf(np.random.default_rng(3), 4)
        assert_array_equal(transform(f, 1).values, f.values)

    def test_empty_ground_set(self):
        assert_array_equal(transform(unit(), OMEGA).values, [1])

    def test_ultraloop_image_is_fixed(self):
        assert_allclose(transform(ultraloop_image(), OMEGA).values, [1, U], atol=1e-12)

    def test_inverse(self):
        f = random_bf(np.random.default_rng(5), 3)
        assert_allclose(transform(inverse_transform(f, 0.7 + 0.2j), 0.7 + 0.2j).values, f.values, atol=1e-12)
        assert_allclose(inverse_transform(f, OMEGA).values, transform(f, OMEGA2).values, atol=1e-12)
        assert_allclose(transform_power(f, -1, 2).values, f.values, atol=1e-12)
        with self.assertRaises(SingularTransform):
            inverse_transform(f, 0)

    def test_self_trial(self):
        self.assertTrue(self_trial(ultraloop_image()))
        self.assertTrue(self_trial(tensor_power(ultraloop_image(), 2)))
        self.assertFalse(self_trial(make(1, [1, 1])))

    def test_trinity(self):
        f = random_bf(np.random.default_rng(11), 5)
        assert_allclose(transform_power(f, OMEGA, 3).values, f.values, atol=1e-10)

    @given(seeds, st.integers(min_value=0, max_value=7))
    @hyp_settings(deadline=None, max_examples=30)
    def test_composition_law(self, seed, m):
        rng = np.random.default_rng(seed)
        f = random_bf(rng, m)
        mu1, mu2 = random_mu(rng), random_mu(rng)
        twice = transform(transform(f, mu2), mu1)
        once = transform(f, mu1 * mu2)
        scale = max(1.0, once.max_abs())
        assert_allclose(twice.values, once.values, atol=1e-9 * scale, rtol=0)

    @given(seeds, st.integers(min_value=0, max_value=6))
    @hyp_settings(deadline=None, max_examples=50)
    def test_fast_matches_dense(self, seed, m):
        rng = np.random.default_rng(seed)
        f = random_bf(rng, m)
        mu = random_mu(rng)
        fast, dense = transform(f, mu), dense_transform(f, mu)
        scale = max(1.0, dense.max_abs())
        assert_allclose(fast.values, dense.values, atol=1e-10 * scale, rtol=0)

    def test_hadamard_duality_on_graphs(self):
        graphs = {
            'triangle': (3, [(0, 1), (1, 2), (0, 2)]),
            'digon with loop': (2, [(0, 1), (0, 1), (1, 1)]),
            'path': (3, [(0, 1), (1, 2)]),
        }
        for name, (vertices, edges) in graphs.items():
            with self.subTest(graph=name):
                N = gf2.incidence_matrix(vertices, edges)
                cutsets = rowspace_indicator(N)
                circuits = rowspace_indicator(gf2.orthogonal_complement(N), columns=len(edges))
                self.assertTrue(proportional(transform(cutsets, -1), circuits))


class MinorTests(SimpleTestCase):

    def test_lambda(self):
        self.assertAlmostEqual(lambda_mu(1), 1)
        self.assertEqual(lambda_mu(-1), 0)
        with self.assertRaises(PoleError):
            lambda_mu(POLE)
        with self.assertRaises(PoleError):
            MinorSpec(0, POLE)

    def test_minor_of_coloop_by_contraction(self):
        assert_array_equal(take_minor(make(1, [1, 1]), MinorSpec(0, -1)).values, [1])

    def test_deletion_in_digon_leaves_bridge(self):
        digon = make(2, [1, 0, 0, 1])
        assert_allclose(deletion(digon, 1).values, [1, 1])
        assert_allclose(contraction(digon, 1).values, [1, 0])

    def test_reductions_of_ultraloop_square(self):
        f = tensor_power(ultraloop_image(), 2)
        for mu in (1, OMEGA, OMEGA2):
            for i in (0, 1):
                with self.subTest(mu=mu, i=i):
                    assert_allclose(take_minor(f, MinorSpec(i, mu)).values, [1, U], atol=1e-12)

    def test_labels_follow_minor(self):
        f = make(2, [1, 0, 0, 1], labels=['a', 'b'])
        self.assertEqual(deletion(f, 0).labels, ('b',))

    def test_minor_errors(self):
        with self.assertRaises(NormalizationError):
            take_minor(make(1, [1, -1]), MinorSpec(0, 1))
        with self.assertRaises(IndexOutOfRange):
            take_minor(make(1, [1, 1]), MinorSpec(1, 1))

    def test_deletion_formula(self):
        f = random_bf(np.random.default_rng(2), 3)
        low, high = f.slices(1)
        expected = (low + high) / (low[0] + high[0])
        assert_allclose(deletion(f, 1).values, expected, atol=1e-12)

    def test_minors_commute(self):
        rng = np.random.default_rng(7)
        f = random_bf(rng, 4)
        self.assertTrue(minors_commute_check(f, MinorSpec(0, -1), MinorSpec(2, -1)))
        self.assertTrue(minors_commute_check(f, MinorSpec(1, OMEGA), MinorSpec(3, OMEGA2)))
        self.assertTrue(minors_commute_check(f, MinorSpec(3, 0.3j), MinorSpec(0, 2)))
        digon = make(2, [1, 0, 0, 1])
        self.assertTrue(minors_commute_check(digon, MinorSpec(0, 1), MinorSpec(1, -1)))
        with self.assertRaises(IndexOutOfRange):
            minors_commute_check(f, MinorSpec(1, 1), MinorSpec(1, -1))

    def test_transform_minor_identity(self):
        f = random_bf(np.random.default_rng(4), 3)
        self.assertTrue(transform_minor_check(f, 1, 0.5 + 0.5j, 2))
        self.assertTrue(transform_minor_check(f, OMEGA, 1, 0))

    @given(seeds, st.integers(min_value=1, max_value=5), st.data())
    @hyp_settings(deadline=None, max_examples=40)
    def test_transform_minor_interchange(self, seed, m, data):
        rng = np.random.default_rng(seed)
        f = random_bf(rng, m)
        i = data.draw(st.integers(min_value=0, max_value=m - 1))
        self.assertTrue(transform_minor_check(f, random_mu(rng), random_mu(rng), i))

    def test_degeneracy_examples(self):
        self.assertTrue(is_degenerate(make(1, [1, 1]), 0))
        self.assertTrue(is_degenerate(make(1, [1, 0]), 0))
        self.assertFalse(is_degenerate(make(2, [1, 0, 0, 1]), 0))
        self.assertEqual(degenerate_elements(tensor_power(ultraloop_image(), 3)), [0, 1, 2])

    @given(seeds, st.integers(min_value=1, max_value=5), st.data(), st.booleans())
    @hyp_settings(deadline=None, max_examples=40)
    def test_degeneracy_is_mu_independent(self, seed, m, data, degenerate):
        rng = np.random.default_rng(seed)
        i = data.draw(st.integers(min_value=0, max_value=m - 1))
        f = degenerate_bf(rng, m, i)[0] if degenerate else random_bf(rng, m)
        if m == 1:
            degenerate = True
        mus = [random_mu(rng) for _ in range(4)]
        first = proportional(take_minor(f, MinorSpec(i, mus[0])), take_minor(f, MinorSpec(i, mus[1])))
        second = proportional(take_minor(f, MinorSpec(i, mus[2])), take_minor(f, MinorSpec(i, mus[3])))
        self.assertEqual(first, degenerate)
        self.assertEqual(second, degenerate)
        self.assertEqual(is_degenerate(f, i), degenerate)

    @given(seeds, st.integers(min_value=1, max_value=5), st.data(), st.booleans())
    @hyp_settings(deadline=None, max_examples=40)
    def test_ratio_form_matches_agreeing_minors(self, seed, m, data, degenerate):
        rng = np.random.default_rng(seed)
        i = data.draw(st.integers(min_value=0, max_value=m - 1))
        f = degenerate_bf(rng, m, i)[0] if degenerate else random_bf(rng, m)
        low, high = f.slices(i)
        ratios_agree = np.allclose(high / high[0], low / low[0], rtol=1e-9, atol=1e-9)
        mu1, mu2 = random_mu(rng), random_mu(rng)
        assume(abs(lambda_mu(mu1) - lambda_mu(mu2)) > 1e-3)
        minors_agree = proportional(take_minor(f, MinorSpec(i, mu1)), take_minor(f, MinorSpec(i, mu2)))
        self.assertEqual(ratios_agree, minors_agree)
        self.assertEqual(ratios_agree, is_degenerate(f, i))

    @given(seeds, st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=4))
    @hyp_settings(deadline=None, max_examples=40)
    def test_degeneracy_matches_loops_and_coloops(self, seed, m, rows):
        rng = np.random.default_rng(seed)
        N = rng.integers(0, 2, size=(rows, m))
        f = rowspace_indicator(N, columns=m)
        zero, unit_columns = gf2.loops_and_coloops(N, columns=m)
        for i in range(m):
            self.assertEqual(is_degenerate(f, i), i in zero or i in unit_columns)

    def test_degenerate_reduction_examples(self):
        f = tensor_power(ultraloop_image(), 2)
        self.assertEqual(degenerate_reduction_sides(f, ultraloop_image(), 1, 1, -1), (True, True))
        digon = make(2, [1, 0, 0, 1])
        self.assertEqual(degenerate_reduction_sides(digon, make(1, [1, 1]), 0, 1, -1), (False, False))
        self.assertEqual(degenerate_reduction_sides(make(1, [1, 0.5]), unit(), 0, 1, -1), (True, True))
        self.assertTrue(degenerate_reduction_check(digon, make(1, [1, 1]), 0, 1, -1))

    def test_degenerate_reduction_on_factorized_function(self):
        rng = np.random.default_rng(13)
        f, u = degenerate_bf(rng, 4, 2)
        self.assertEqual(degenerate_reduction_sides(f, u, 2, OMEGA, 0.5), (True, True))
