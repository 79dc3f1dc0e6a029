import logging

from django.db.models.signals import post_save
from django.dispatch import receiver

from .models import SuiteResult

logger = logging.getLogger(__name__)


@receiver(post_save, sender=SuiteResult)
def log_suite_result(sender, instance, created, **kwargs):
    if not created:
        return
    level = logging.INFO if instance.status == 'PASS' else logging.WARNING
    logger.log(level, "run %s recorded %s", instance.run_id, instance.report_line())
