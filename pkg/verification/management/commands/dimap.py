from django.core.management.base import BaseCommand, CommandError

from dimaps.altmap import classify_edge, format_adm, read_adm, trial, validate, write_adm
from dimaps.catalog import enumerate_dimaps, summary_lines, write_catalog
from dimaps.exceptions import DimapError
from dimaps.reduce import reduce
from verification.choices import REDUCTION_CHOICES, STRATEGY_CHOICES
from verification.forms import CatalogForm, ReduceForm, TrialForm, error_text


class Command(BaseCommand):
    help = 'Validate, trial, reduce, classify or enumerate alternating dimaps (.adm files).'

    def add_arguments(self, parser):
        verbs = parser.add_subparsers(dest='verb', required=True, metavar='VERB')

        validate_parser = verbs.add_parser('validate', help='report every violated map axiom')
        validate_parser.add_argument('input')

        trial_parser = verbs.add_parser('trial', help='apply trial (tau) to a map')
        trial_parser.add_argument('input')
        trial_parser.add_argument('--times', default='1', help='number of applications (default 1)')
        trial_parser.add_argument('-o', '--output')

        reduce_parser = verbs.add_parser('reduce', help='reduce one edge')
        reduce_parser.add_argument('input')
        reduce_parser.add_argument('--edge', required=True)
        reduce_parser.add_argument('--mu', required=True, choices=[value for value, _ in REDUCTION_CHOICES])
        reduce_parser.add_argument('-o', '--output')

        classify_parser = verbs.add_parser('classify', help='loop, triloop and semiloop flags per edge')
        classify_parser.add_argument('input')
        classify_parser.add_argument('--edge', help='only this edge')

        catalog_parser = verbs.add_parser('catalog', help='all maps with k edges up to isomorphism')
        catalog_parser.add_argument('--edges', required=True)
        catalog_parser.add_argument('--strategy', default='compositional',
                                    choices=[value for value, _ in STRATEGY_CHOICES])
        catalog_parser.add_argument('-o', '--output', help='directory for the .adm files and summary.txt')

    def handle(self, *args, **options):
        handler = getattr(self, f"handle_{options['verb']}")
        try:
            handler(options)
        except OSError as exc:
            raise CommandError(str(exc), returncode=2)
        except DimapError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=2)

    def _emit(self, dimap, output):
        if output:
            write_adm(dimap, output)
        else:
            self.stdout.write(format_adm(dimap), ending='')

    def handle_validate(self, options):
        violations = validate(read_adm(options['input'], strict=False))
        if not violations:
            self.stdout.write('valid')
            return
        for violation in violations:
            self.stdout.write(str(violation))
        raise CommandError(f"{options['input']}: {len(violations)} violation(s)", returncode=1)

    def handle_trial(self, options):
        form = TrialForm(data={'times': options['times']})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        dimap = read_adm(options['input'])
        for _ in range(form.cleaned_data['times']):
            dimap, _labels = trial(dimap)
        self._emit(dimap, options['output'])

    def handle_reduce(self, options):
        form = ReduceForm(data={'edge': options['edge'], 'mu': options['mu']})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        dimap = read_adm(options['input'])
        self._emit(reduce(dimap, form.cleaned_data['edge'], form.cleaned_data['mu']), options['output'])

    def handle_classify(self, options):
        dimap = read_adm(options['input'])
        labels = [options['edge']] if options['edge'] else dimap.labels
        for label in labels:
            flags = classify_edge(dimap, label).flags()
            self.stdout.write(f"{label} {' '.join(flags) or '-'}")

    def handle_catalog(self, options):
        form = CatalogForm(data={'edges': options['edges'], 'strategy': options['strategy']})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        catalog = enumerate_dimaps(form.cleaned_data['edges'], form.cleaned_data['strategy'])
        if options['output']:
            write_catalog(catalog, options['output'])
            self.stdout.write(f"wrote {len(catalog)} maps to {options['output']}")
        else:
            for line in summary_lines(catalog):
                self.stdout.write(line)
