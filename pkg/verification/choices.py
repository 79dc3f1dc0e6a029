SUITE_CHOICES = [
    ('transforms', 'Transforms'),
    ('minors', 'Minors'),
    ('degeneracy', 'Degeneracy'),
    ('dimaps', 'Alternating dimaps'),
    ('claims', 'Claims'),
    ('main-theorem', 'Main theorem'),
]

STATUS_CHOICES = [
    ('PASS', 'Pass'),
    ('FAIL', 'Fail'),
    ('WARN', 'Pass with warning'),
]

STRATEGY_CHOICES = [
    ('compositional', 'Connected maps plus disjoint unions'),
    ('rotation', 'Dart rotations'),
]

REDUCTION_CHOICES = [
    ('1', '1-reduction'),
    ('w', 'w-reduction'),
    ('w2', 'w2-reduction'),
]
