import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError, transaction
from django.utils import timezone

from verification.choices import SUITE_CHOICES
from verification.forms import VerifyForm, error_text
from verification.models import SuiteResult, VerificationRun
from verification.suites import run_suites

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = 'Run verification suites and print one SUITE line per suite; exit 1 if any suite fails.'

    def add_arguments(self, parser):
        parser.add_argument('suites', nargs='*', metavar='SUITE',
                            help=f"any of {', '.join(name for name, _ in SUITE_CHOICES)} (default all)")
        parser.add_argument('--seed', default='0', help='seed for the randomized suites (default 0)')
        parser.add_argument('--no-record', action='store_true', help='do not store the run in the database')

    def handle(self, *args, **options):
        form = VerifyForm(data={'suites': options['suites'], 'seed': options['seed']})
        if not form.is_valid():
            raise CommandError(error_text(form), returncode=2)
        names, seed = form.cleaned_data['suites'], form.cleaned_data['seed']

        started_at = timezone.now()
        outcomes = run_suites(names, seed)
        for outcome in outcomes:
            self.stdout.write(outcome.line())

        failed = [outcome.name for outcome in outcomes if outcome.failed]
        if not options['no_record']:
            self.record(names, seed, outcomes, started_at, not failed)
        if failed:
            raise CommandError(f"failed suites: {', '.join(failed)}", returncode=1)

    def record(self, names, seed, outcomes, started_at, passed):
        try:
            with transaction.atomic():
                run = VerificationRun.objects.create(
                    seed=seed,
                    suites=','.join(names),
                    tolerance=settings.TRIALAB_TOLERANCE,
                    passed=passed,
                )
                # auto_now_add would stamp the save time
                VerificationRun.objects.filter(pk=run.pk).update(started_at=started_at, finished_at=timezone.now())
                for outcome in outcomes:
                    SuiteResult.objects.create(
                        run=run,
                        suite=outcome.name,
                        status=outcome.status,
                        details=outcome.details,
                        duration=outcome.duration,
                    )
        except DatabaseError as exc:
            logger.warning("verification run not recorded: %s", exc)
            return None
        return run
