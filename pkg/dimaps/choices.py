from django.db import models

from binary_functions.transform import OMEGA, OMEGA2


class ReductionKind(models.IntegerChoices):
    """The three reductions, indexed by the exponent of omega."""

    ONE = 0, '1'
    OMEGA = 1, 'w'
    OMEGA2 = 2, 'w2'

    def compose(self, other):
        return ReductionKind((self.value + int(other)) % 3)

    @property
    def inverse(self):
        return ReductionKind((-self.value) % 3)

    @property
    def as_complex(self):
        return (complex(1), OMEGA, OMEGA2)[self.value]

    @classmethod
    def parse(cls, text):
        aliases = {'1': cls.ONE, 'w': cls.OMEGA, 'omega': cls.OMEGA, 'w2': cls.OMEGA2, 'omega2': cls.OMEGA2}
        try:
            return aliases[str(text).strip().lower()]
        except KeyError:
            raise ValueError(f"unknown reduction {text!r}; expected one of 1, w, w2")


class FaceOrientation(models.TextChoices):
    CLOCKWISE = 'clockwise', 'Clockwise'
    ANTICLOCKWISE = 'anticlockwise', 'Anticlockwise'


class ViolationKind(models.TextChoices):
    DUPLICATE_LABEL = 'duplicate-label', 'Duplicate edge label'
    DART_PAIRING = 'dart-pairing', 'Dart not in exactly one edge'
    DART_ROTATION = 'dart-rotation', 'Dart not in exactly one rotation'
    ISOLATED_VERTEX = 'isolated-vertex', 'Isolated vertex'
    ALTERNATION = 'alternation', 'Rotation does not alternate'
    FACE_ORIENTATION = 'face-orientation', 'Face is not uniformly directed'
