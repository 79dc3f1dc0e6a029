from django.db import models

from .choices import STATUS_CHOICES, SUITE_CHOICES


class VerificationRun(models.Model):
    seed = models.IntegerField(default=0)
    suites = models.CharField(max_length=255)  # comma separated suite names
    tolerance = models.FloatField()
    passed = models.BooleanField(default=False)
    started_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    class Meta:
        ordering = ['-started_at']

    def __str__(self):
        verdict = 'passed' if self.passed else 'failed'
        return f"Run {self.pk} ({self.suites}, seed {self.seed}) {verdict}"

    @property
    def suite_names(self):
        return [name for name in self.suites.split(',') if name]


class SuiteResult(models.Model):
    run = models.ForeignKey(VerificationRun, on_delete=models.CASCADE, related_name='results')
    suite = models.CharField(max_length=32, choices=SUITE_CHOICES)
    status = models.CharField(max_length=4, choices=STATUS_CHOICES)
    details = models.TextField(blank=True)
    duration = models.FloatField(default=0)  # seconds
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['run', 'id']

    def __str__(self):
        return self.report_line()

    def report_line(self):
        return f"SUITE {self.suite} {self.status} {self.details}".rstrip()
