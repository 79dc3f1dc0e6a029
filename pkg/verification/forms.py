"""
Argument validation for the management commands.

Options parsed by argparse are cleaned by these forms so every command
reports bad input from ``form.errors``.
"""
import re

from django import forms

from binary_functions.transform import OMEGA, OMEGA2
from dimaps.choices import ReductionKind

from .choices import REDUCTION_CHOICES, STRATEGY_CHOICES, SUITE_CHOICES

MU_NAMES = {'1': 1 + 0j, '-1': -1 + 0j, 'w': OMEGA, 'w2': OMEGA2}

_NUMBER = r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_COMPLEX = re.compile(rf'^(?P<re>{_NUMBER})(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$')
_REAL = re.compile(rf'^{_NUMBER}$')


def parse_mu(text):
    text = str(text).strip()
    if text in MU_NAMES:
        return MU_NAMES[text]
    match = _COMPLEX.match(text)
    if match:
        return complex(float(match['re']), float(match['im']))
    if _REAL.match(text):
        return complex(float(text), 0.0)
    raise forms.ValidationError(
        "Enter 1, -1, w, w2 or a complex number written as RE+IMi.", code='invalid_mu',
    )


def format_mu(mu):
    mu = complex(mu)
    for name, value in MU_NAMES.items():
        if mu == value:
            return name
    return f'{mu.real:.17g}{mu.imag:+.17g}i'


class MuField(forms.Field):
    def to_python(self, value):
        if value in self.empty_values:
            return None
        if isinstance(value, complex):
            return value
        return parse_mu(value)


class ReductionKindField(forms.ChoiceField):
    def __init__(self, **kwargs):
        kwargs.setdefault('choices', REDUCTION_CHOICES)
        super().__init__(**kwargs)

    def clean(self, value):
        value = super().clean(value)
        return ReductionKind.parse(value) if value else None


class TransformForm(forms.Form):
    mu = MuField(required=False)
    inverse = forms.BooleanField(required=False)
    normalize = forms.BooleanField(required=False)

    def clean_mu(self):
        mu = self.cleaned_data.get('mu')
        return 1 + 0j if mu is None else mu


class MinorForm(forms.Form):
    mu = MuField()
    element = forms.IntegerField(min_value=0)


class ReduceForm(forms.Form):
    edge = forms.CharField(max_length=64)
    mu = ReductionKindField()


class TrialForm(forms.Form):
    times = forms.IntegerField(min_value=0, required=False)

    def clean_times(self):
        times = self.cleaned_data.get('times')
        return 1 if times is None else times


class CatalogForm(forms.Form):
    edges = forms.IntegerField(min_value=0)
    strategy = forms.ChoiceField(choices=STRATEGY_CHOICES, required=False)

    def clean_strategy(self):
        return self.cleaned_data.get('strategy') or 'compositional'


class VerifyForm(forms.Form):
    suites = forms.MultipleChoiceField(choices=SUITE_CHOICES, required=False)
    seed = forms.IntegerField(min_value=0, required=False)

    def clean_suites(self):
        chosen = self.cleaned_data.get('suites') or []
        # canonical order, duplicates dropped
        return [name for name, _ in SUITE_CHOICES if name in chosen] or [name for name, _ in SUITE_CHOICES]

    def clean_seed(self):
        seed = self.cleaned_data.get('seed')
        return 0 if seed is None else seed


def error_text(form):
    return '; '.join(
        f"{field}: {' '.join(str(message) for message in messages)}"
        for field, messages in form.errors.items()
    )
