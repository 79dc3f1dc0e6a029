from django.core.management.base import BaseCommand, CommandError

from binary_functions.binfun import format_bf, normalize, read_raw, write_bf
from binary_functions.exceptions import BinaryFunctionError
from binary_functions.transform import inverse_transform, transform
from verification.forms import TransformForm, error_text, format_mu


class Command(BaseCommand):
    help = 'Apply L[mu] (or its inverse) to a .bf file; the output is a raw vector unless --normalize is given.'

    def add_arguments(self, parser):
        parser.add_argument('input', help='input .bf file')
        parser.add_argument('--mu', default='1', help='1, -1, w, w2 or RE+IMi (default 1)')
        parser.add_argument('--inverse', action='store_true', help='apply L[mu]^-1 instead')
        parser.add_argument('--normalize', action='store_true', help='divide by the empty-set entry')
        parser.add_argument('-o', '--output', help='output file (default standard output)')

    def handle(self, *args, **options):
        form = TransformForm(data={
            'mu': options['mu'],
            'inverse': options['inverse'],
            'normalize': options['normalize'],
        })
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        mu = form.cleaned_data['mu']

        try:
            vector = read_raw(options['input'])
            result = inverse_transform(vector, mu) if form.cleaned_data['inverse'] else transform(vector, mu)
            if form.cleaned_data['normalize']:
                result = normalize(result.m, result.values, result.labels)
        except OSError as exc:
            raise CommandError(f"cannot read {options['input']}: {exc}", returncode=2)
        except BinaryFunctionError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=2)

        if options['output']:
            write_bf(result, options['output'])
            if options['verbosity'] > 1:
                self.stdout.write(f"wrote L[{format_mu(mu)}] of {options['input']} to {options['output']}")
        else:
            self.stdout.write(format_bf(result), ending='')
