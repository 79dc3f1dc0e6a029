from django.core.management.base import BaseCommand, CommandError

from binary_functions.binfun import format_bf, read_bf, write_bf
from binary_functions.exceptions import BinaryFunctionError
from binary_functions.minor import MinorSpec, take_minor
from verification.forms import MinorForm, error_text


class Command(BaseCommand):
    help = 'Take the minor f|[mu] e_i of a binary function file.'

    def add_arguments(self, parser):
        parser.add_argument('input', help='input .bf file (empty-set entry 1)')
        parser.add_argument('--mu', required=True, help='1, -1, w, w2 or RE+IMi')
        parser.add_argument('--element', required=True, help='index i of the element to remove')
        parser.add_argument('--normalize-input', action='store_true',
                            help='accept an input whose empty-set entry is not 1')
        parser.add_argument('-o', '--output', help='output file (default standard output)')

    def handle(self, *args, **options):
        form = MinorForm(data={'mu': options['mu'], 'element': options['element']})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)

        try:
            f = read_bf(options['input'], normalize_on_load=options['normalize_input'])
            result = take_minor(f, MinorSpec(form.cleaned_data['element'], form.cleaned_data['mu']))
        except OSError as exc:
            raise CommandError(f"cannot read {options['input']}: {exc}", returncode=2)
        except BinaryFunctionError as exc:
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=2)

        if options['output']:
            write_bf(result, options['output'])
        else:
            self.stdout.write(format_bf(result), ending='')
