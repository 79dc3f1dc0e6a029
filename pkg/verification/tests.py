import importlib
import math
import os
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
from django import forms
from django.core.management import call_command
from django.core.management.base import CommandError
from django.db import DatabaseError
from django.test import SimpleTestCase, TestCase, override_settings
from hypothesis import given, settings as hyp_settings, strategies as st
from numpy.testing import assert_allclose

from binary_functions import gf2
from binary_functions.binfun import (
    default_tolerance,
    format_bf,
    make,
    proportional,
    read_raw,
    rowspace_indicator,
    write_bf,
)
from binary_functions.transform import OMEGA, OMEGA2, SQRT2
from dimaps.altmap import from_successors, labeled_equal, read_adm, ultraloop, write_adm
from trialab_project import settings as project_settings

from . import suites
from .forms import MinorForm, VerifyForm, format_mu, parse_mu
from .models import SuiteResult, VerificationRun

ULTRALOOP_IMAGE = make(1, [1, SQRT2 - 1])


def digon_cutsets():
    return rowspace_indicator(gf2.incidence_matrix(2, [(0, 1), (0, 1)]))


class MuArgumentTests(SimpleTestCase):

    def test_named_values(self):
        self.assertEqual(parse_mu('1'), 1)
        self.assertEqual(parse_mu('-1'), -1)
        self.assertEqual(parse_mu('w'), OMEGA)
        self.assertEqual(parse_mu('w2'), OMEGA2)
        self.assertEqual(parse_mu('w'), complex(-0.5, math.sqrt(3) / 2))

    def test_complex_and_real_forms(self):
        self.assertEqual(parse_mu('0.5-2i'), complex(0.5, -2))
        self.assertEqual(parse_mu('5.828427124746190+0i'), complex(5.828427124746190, 0))
        self.assertEqual(parse_mu('1e-3+1.5e2i'), complex(1e-3, 150))
        self.assertEqual(parse_mu('2.5'), 2.5)

    def test_rejects_garbage(self):
        for text in ('', 'omega', '1+i', 'i', '1+2j', 'w3'):
            with self.subTest(text=text), self.assertRaises(forms.ValidationError):
                parse_mu(text)

    @given(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e12))
    @hyp_settings(deadline=None)
    def test_format_then_parse(self, mu):
        self.assertEqual(parse_mu(format_mu(mu)), mu)

    def test_named_values_print_by_name(self):
        self.assertEqual([format_mu(mu) for mu in (1, -1, OMEGA, OMEGA2)], ['1', '-1', 'w', 'w2'])

    def test_minor_form(self):
        form = MinorForm(data={'mu': 'w2', 'element': '3'})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['mu'], OMEGA2)
        self.assertFalse(MinorForm(data={'mu': 'w', 'element': '-1'}).is_valid())

    def test_verify_form_orders_suites(self):
        form = VerifyForm(data={'suites': ['claims', 'transforms', 'claims'], 'seed': ''})
        self.assertTrue(form.is_valid())
        self.assertEqual(form.cleaned_data['suites'], ['transforms', 'claims'])
        self.assertEqual(form.cleaned_data['seed'], 0)
        self.assertFalse(VerifyForm(data={'suites': ['nonsense']}).is_valid())


class SuiteTests(SimpleTestCase):

    def test_every_suite_is_registered(self):
        self.assertEqual(sorted(suites.SUITES), sorted(suites.suite_names()))

    def test_small_graph_count(self):
        # 10 vertex pairs (loops included), multisets of size 0..5
        self.assertEqual(sum(1 for _ in suites.small_graphs()), 3003)

    def test_subspaces_are_distinct(self):
        spaces = list(suites.subspaces())
        self.assertEqual(len(spaces), 2 + 5 + 16 + 67 + 373)
        keys = {(m.shape[1], frozenset(gf2.rowspace(m))) for m in spaces}
        self.assertEqual(len(keys), len(spaces))

    def test_tally(self):
        tally = suites.Tally()
        tally.check(True, 'unused')
        self.assertEqual(tally.status, 'PASS')
        tally.warn('NOT-FOUND-AT-CAP k<=4')
        self.assertEqual(tally.status, 'WARN')
        tally.check(False, lambda: 'broken')
        self.assertEqual(tally.status, 'FAIL')
        self.assertIn('witness: broken', tally.details())

    def test_unknown_suite(self):
        with self.assertRaises(KeyError):
            suites.run_suite('plotting')

    def test_randomized_suites_are_reproducible(self):
        first = suites.run_suite('minors', seed=7)
        second = suites.run_suite('minors', seed=7)
        self.assertEqual(first.details, second.details)

    def test_transforms(self):
        outcome = suites.run_suite('transforms', seed=1)
        self.assertEqual(outcome.status, 'PASS', outcome.details)
        self.assertIn('graphs=3003', outcome.details)

    def test_minors(self):
        outcome = suites.run_suite('minors')
        self.assertEqual(outcome.status, 'PASS', outcome.details)

    def test_degeneracy(self):
        outcome = suites.run_suite('degeneracy')
        self.assertEqual(outcome.status, 'PASS', outcome.details)
        self.assertIn('subspaces=463', outcome.details)

    def test_dimaps_finds_a_noncommuting_pair(self):
        outcome = suites.run_suite('dimaps')
        self.assertEqual(outcome.status, 'PASS', outcome.details)
        self.assertIn('noncommuting_at_k=4', outcome.details)

    def test_claims(self):
        outcome = suites.run_suite('claims')
        self.assertEqual(outcome.status, 'PASS', outcome.details)
        self.assertIn('two_values_suffice=', outcome.details)

    def test_main_theorem(self):
        outcome = suites.run_suite('main-theorem')
        self.assertEqual(outcome.status, 'PASS', outcome.details)
        self.assertIn('obstructions=3', outcome.details)

    def test_library_errors_fail_the_suite(self):
        def broken(tally, rng, tol):
            make(1, [2, 0])

        with mock.patch.dict(suites.SUITES, {'transforms': broken}):
            outcome = suites.run_suite('transforms')
        self.assertEqual(outcome.status, 'FAIL')
        self.assertIn('EmptySetNotOne', outcome.details)


class CommandTestCase(SimpleTestCase):

    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

    def call(self, *args):
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()

    def assertExitCode(self, code, *args):
        with self.assertRaises(CommandError) as raised:
            self.call(*args)
        self.assertEqual(raised.exception.returncode, code)
        return raised.exception


class TransformCommandTests(CommandTestCase):

    def test_identity_is_byte_identical(self):
        source, target = self.tmp / 'f.bf', self.tmp / 'g.bf'
        write_bf(make(2, [1, 0.25 - 1j, 3e-7, -2]), source)
        self.call('transform', str(source), '--mu', '1', '-o', str(target))
        self.assertEqual(target.read_bytes(), source.read_bytes())

    def test_trinity_fixes_ultraloop_image(self):
        source = self.tmp / 'c1.bf'
        write_bf(ULTRALOOP_IMAGE, source)
        out = self.call('transform', str(source), '--mu', 'w')
        self.assertTrue(out.startswith('bf 1\n'))
        self.assertTrue(proportional(read_raw_text(self.tmp, out), ULTRALOOP_IMAGE))

    def test_hadamard_on_digon(self):
        source, target = self.tmp / 'digon.bf', self.tmp / 'dual.bf'
        write_bf(digon_cutsets(), source)
        self.call('transform', str(source), '--mu', '-1', '-o', str(target))
        N = gf2.incidence_matrix(2, [(0, 1), (0, 1)])
        circuits = rowspace_indicator(gf2.orthogonal_complement(N))
        self.assertTrue(proportional(read_raw(target), circuits))

    def test_normalize_and_inverse(self):
        source, target = self.tmp / 'f.bf', self.tmp / 'g.bf'
        f = make(2, [1, 2, 3, 4j])
        write_bf(f, source)
        self.call('transform', str(source), '--mu', '0.5+0.5i', '--normalize', '-o', str(target))
        self.assertEqual(read_raw(target)[0], 1)
        self.call('transform', str(source), '--mu', '0.5+0.5i', '-o', str(target))
        self.call('transform', str(target), '--mu', '0.5+0.5i', '--inverse', '-o', str(target))
        assert_allclose(read_raw(target).values, f.values, atol=1e-12)

    def test_errors_exit_with_two(self):
        source = self.tmp / 'f.bf'
        write_bf(ULTRALOOP_IMAGE, source)
        self.assertExitCode(2, 'transform', str(source), '--mu', '0', '--inverse')
        self.assertExitCode(2, 'transform', str(source), '--mu', 'omega')
        self.assertExitCode(2, 'transform', str(self.tmp / 'missing.bf'))
        (self.tmp / 'bad.bf').write_text('bf 1\n0 1 0\n')
        self.assertExitCode(2, 'transform', str(self.tmp / 'bad.bf'))

    def test_singular_only_for_inverse(self):
        source = self.tmp / 'f.bf'
        write_bf(ULTRALOOP_IMAGE, source)
        out = self.call('transform', str(source), '--mu', '0')
        self.assertTrue(out.startswith('bf 1\n'))


def read_raw_text(directory, text):
    path = Path(directory) / 'stdout.bf'
    path.write_text(text)
    return read_raw(path)


class MinorCommandTests(CommandTestCase):

    def test_deletion_in_digon_leaves_coloop(self):
        source, target = self.tmp / 'digon.bf', self.tmp / 'bridge.bf'
        write_bf(digon_cutsets(), source)
        self.call('minor', str(source), '--mu', '1', '--element', '1', '-o', str(target))
        assert_allclose(read_raw(target).values, [1, 1])

    def test_down_to_dimension_zero(self):
        source = self.tmp / 'coloop.bf'
        write_bf(make(1, [1, 1]), source)
        self.assertEqual(self.call('minor', str(source), '--mu', '-1', '--element', '0'), 'bf 0\n0 1 0\n')

    def test_pole(self):
        source = self.tmp / 'f.bf'
        write_bf(make(1, [1, 1]), source)
        error = self.assertExitCode(2, 'minor', str(source), '--mu', '5.828427124746190+0i', '--element', '0')
        self.assertIn('PoleError', str(error))

    def test_bad_element(self):
        source = self.tmp / 'f.bf'
        write_bf(make(1, [1, 1]), source)
        self.assertExitCode(2, 'minor', str(source), '--mu', '1', '--element', '1')
        self.assertExitCode(2, 'minor', str(source), '--mu', '1', '--element', 'first')

    def test_strict_input(self):
        source = self.tmp / 'raw.bf'
        source.write_text(format_bf(make(1, [1, 1])).replace('0 1 0', '0 2 0'))
        self.assertExitCode(2, 'minor', str(source), '--mu', '1', '--element', '0')
        out = self.call('minor', str(source), '--mu', '1', '--element', '0', '--normalize-input')
        self.assertEqual(out, 'bf 0\n0 1 0\n')

    def test_tolerance_from_environment(self):
        source = self.tmp / 'near.bf'
        source.write_text('bf 1\n0 1.000001 0\n1 1 0\n')
        with mock.patch.dict(os.environ, {'TRIALAB_TOL': '1e-5'}):
            loose = importlib.reload(project_settings).TRIALAB_TOLERANCE
        self.addCleanup(importlib.reload, project_settings)
        self.assertEqual(loose, 1e-5)
        self.assertExitCode(2, 'minor', str(source), '--mu', '1', '--element', '0')
        with override_settings(TRIALAB_TOLERANCE=loose):
            self.assertEqual(default_tolerance(), 1e-5)
            self.assertEqual(self.call('minor', str(source), '--mu', '1', '--element', '0'), 'bf 0\n0 1 0\n')


class DimapCommandTests(CommandTestCase):

    def test_reducing_the_ultraloop(self):
        source, target = self.tmp / 'c1.adm', self.tmp / 'empty.adm'
        write_adm(ultraloop('e0'), source)
        self.call('dimap', 'reduce', str(source), '--mu', 'w', '--edge', 'e0', '-o', str(target))
        self.assertEqual(len(read_adm(target)), 0)

    def test_unknown_edge(self):
        source = self.tmp / 'c1.adm'
        write_adm(ultraloop('e0'), source)
        self.assertExitCode(2, 'dimap', 'reduce', str(source), '--mu', '1', '--edge', 'e9')

    def test_catalog_of_two_edges(self):
        directory = self.tmp / 'k2'
        self.call('dimap', 'catalog', '--edges', '2', '-o', str(directory))
        self.assertEqual(len(list(directory.glob('*.adm'))), 4)
        self.assertIn('maps=4', (directory / 'summary.txt').read_text())

    def test_catalog_summary_and_cap(self):
        out = self.call('dimap', 'catalog', '--edges', '3', '--strategy', 'rotation')
        self.assertIn('maps=11', out)
        self.assertExitCode(2, 'dimap', 'catalog', '--edges', '9')

    def test_trial_three_times(self):
        G = from_successors({'a': 'b', 'b': 'c', 'c': 'a'}, {'a': 'c', 'c': 'b', 'b': 'a'}, 'abc')
        source = self.tmp / 'torus.adm'
        write_adm(G, source)
        target = self.tmp / 'thrice.adm'
        self.call('dimap', 'trial', str(source), '--times', '3', '-o', str(target))
        self.assertTrue(labeled_equal(read_adm(target), G))

    def test_validate(self):
        good, bad = self.tmp / 'good.adm', self.tmp / 'bad.adm'
        write_adm(ultraloop('a'), good)
        bad.write_text('adm 4\nedge a 0 1\nedge b 2 3\nvertex 1 3 0 2\n')
        self.assertEqual(self.call('dimap', 'validate', str(good)), 'valid\n')
        self.assertExitCode(1, 'dimap', 'validate', str(bad))

    def test_classify(self):
        source = self.tmp / 'c1.adm'
        write_adm(ultraloop('a'), source)
        flags = self.call('dimap', 'classify', str(source)).split()
        self.assertEqual(flags[0], 'a')
        self.assertIn('ultraloop', flags)
        self.assertIn('triloop', flags)
        self.assertNotIn('proper-triloop', flags)

    def test_verb_is_required(self):
        for args in (('dimap',), ('dimap', 'explode')):
            with self.subTest(args=args), self.assertRaises(CommandError):
                self.call(*args)


class VerifyCommandTests(TestCase):

    def call(self, *args):
        out = StringIO()
        call_command('verify', *args, stdout=out)
        return out.getvalue()

    def test_records_a_run(self):
        with self.assertLogs('verification.signals', level='INFO') as logs:
            out = self.call('transforms', '--seed', '1')
        self.assertTrue(out.startswith('SUITE transforms PASS '))
        run = VerificationRun.objects.get()
        self.assertTrue(run.passed)
        self.assertEqual(run.suite_names, ['transforms'])
        self.assertEqual(run.seed, 1)
        self.assertIsNotNone(run.finished_at)
        self.assertEqual(list(run.results.values_list('suite', 'status')), [('transforms', 'PASS')])
        self.assertIn('SUITE transforms PASS', logs.output[0])

    def test_no_record(self):
        self.call('claims', '--no-record')
        self.assertFalse(VerificationRun.objects.exists())

    def test_failure_exits_with_one(self):
        def failing(tally, rng, tol):
            tally.check(False, 'forced')

        with mock.patch.dict(suites.SUITES, {'claims': failing}), \
                self.assertLogs('verification.signals', level='WARNING'), \
                self.assertRaises(CommandError) as raised:
            self.call('claims')
        self.assertEqual(raised.exception.returncode, 1)
        self.assertFalse(VerificationRun.objects.get().passed)
        self.assertEqual(SuiteResult.objects.get().status, 'FAIL')

    def test_warning_still_passes(self):
        def warned(tally, rng, tol):
            tally.warn('NOT-FOUND-AT-CAP k<=4')

        with mock.patch.dict(suites.SUITES, {'dimaps': warned}):
            out = self.call('dimaps')
        self.assertIn('SUITE dimaps WARN', out)
        self.assertTrue(VerificationRun.objects.get().passed)

    def test_usage_errors(self):
        for args in (['plotting'], ['--seed', 'x'], ['--seed', '-1']):
            with self.subTest(args=args), self.assertRaises(CommandError) as raised:
                self.call(*args)
            self.assertEqual(raised.exception.returncode, 2)

    def test_database_failure_is_only_a_warning(self):
        with mock.patch.object(VerificationRun.objects, 'create', side_effect=DatabaseError('no table')), \
                self.assertLogs('verification.management.commands.verify', level='WARNING') as logs:
            out = self.call('claims')
        self.assertIn('SUITE claims PASS', out)
        self.assertIn('not recorded', logs.output[0])

    def test_suite_result_string(self):
        run = VerificationRun.objects.create(seed=0, suites='minors', tolerance=1e-9, passed=True)
        result = SuiteResult.objects.create(run=run, suite='minors', status='PASS', details='checks=1')
        self.assertEqual(str(result), 'SUITE minors PASS checks=1')
        self.assertIn('passed', str(run))


class RandomInputTests(SimpleTestCase):

    def test_random_dimaps_are_valid(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            self.assertEqual(len(suites.random_dimap(rng, 4)), 4)
