"""
Binary functions: complex vectors indexed by the subsets of a ground set.

Element e_i of an m-element ground set is the index bit of weight
2^(m-1-i), so e_0 is the most significant bit and the subset {e_0} of a
two-element ground set sits at index 2. The same convention is used by
the file format and by every reshape in this package.
"""
import logging
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np
from django.conf import settings

from .exceptions import (
    BinaryFunctionFileError,
    DimensionMismatch,
    EmptySetNotOne,
    GroundSetTooLarge,
    IndexOutOfRange,
    NonFiniteValue,
    NormalizationError,
    WrongLength,
)
from . import gf2

logger = logging.getLogger(__name__)


def default_tolerance(tol=None):
    return settings.TRIALAB_TOLERANCE if tol is None else tol


def default_labels(m):
    return tuple(f'e{i}' for i in range(m))


def _require_finite(values):
    if not np.isfinite(values).all():
        raise NonFiniteValue(f"entries must be finite, got {values[~np.isfinite(values)][:3].tolist()}")


@dataclass(frozen=True, eq=False)
class RawVector:
    """A length-2^m complex vector with no constraint on its empty-set entry."""

    m: int
    values: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        if self.m < 0:
            raise WrongLength(f"ground set size must be non-negative, got {self.m}")
        if self.m > settings.TRIALAB_MAX_GROUND_SET:
            raise GroundSetTooLarge(
                f"ground set of size {self.m} exceeds {settings.TRIALAB_MAX_GROUND_SET}"
            )
        values = np.array(self.values, dtype=complex).reshape(-1)
        if values.shape[0] != 1 << self.m:
            raise WrongLength(f"expected {1 << self.m} values for m={self.m}, got {values.shape[0]}")
        _require_finite(values)
        values.flags.writeable = False

        labels = default_labels(self.m) if self.labels is None else tuple(str(l) for l in self.labels)
        if len(labels) != self.m:
            raise WrongLength(f"expected {self.m} labels, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ValueError(f"element labels must be distinct: {labels}")

        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'labels', labels)

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, index):
        return complex(self.values[index])

    def __repr__(self):
        shown = ', '.join(f'{v:.6g}' for v in self.values[:8])
        more = ', ...' if len(self) > 8 else ''
        return f"{type(self).__name__}(m={self.m}, values=({shown}{more}))"

    def entry(self, bits):
        """Value at the subset whose characteristic bits are `bits`."""
        if len(bits) != self.m:
            raise DimensionMismatch(f"bit sequence of length {len(bits)} for m={self.m}")
        return complex(self.values[subset_index(bits)])

    def slices(self, i):
        """The two halves of the vector along element i, as (m-1)-dimensional arrays."""
        if not 0 <= i < self.m:
            raise IndexOutOfRange(f"element {i} outside ground set of size {self.m}")
        blocks = self.values.reshape(1 << i, 2, 1 << (self.m - 1 - i))
        return blocks[:, 0, :].reshape(-1), blocks[:, 1, :].reshape(-1)

    def is_exact_indicator(self):
        """True when every entry is exactly 0 or 1 (e.g. a rowspace indicator)."""
        return bool(np.all((self.values == 0) | (self.values == 1)))

    def max_abs(self):
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True, eq=False)
class BinaryFunction(RawVector):
    """A RawVector whose empty-set entry is 1."""

    def __post_init__(self):
        super().__post_init__()
        if not abs(self.values[0] - 1) <= default_tolerance():
            raise EmptySetNotOne(f"empty-set entry is {self.values[0]}, not 1")
        values = self.values.copy()
        values[0] = 1
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)


def make(m, values, labels=None, tol=None):
    values = np.array(values, dtype=complex).reshape(-1)
    if values.shape[0] != 1 << m:
        raise WrongLength(f"expected {1 << m} values for m={m}, got {values.shape[0]}")
    _require_finite(values)
    if not abs(values[0] - 1) <= default_tolerance(tol):
        raise EmptySetNotOne(f"empty-set entry is {values[0]}, not 1")
    values[0] = 1
    return BinaryFunction(m, values, labels)


def normalize(m, values, labels=None, tol=None):
    """Divide through by the empty-set entry."""
    values = np.array(values, dtype=complex).reshape(-1)
    if values.shape[0] != 1 << m:
        raise WrongLength(f"expected {1 << m} values for m={m}, got {values.shape[0]}")
    _require_finite(values)
    if not abs(values[0]) >= default_tolerance(tol):
        raise NormalizationError(f"empty-set entry {values[0]} is too small to normalize by")
    values = values / values[0]
    values[0] = 1
    return BinaryFunction(m, values, labels)


def unit():
    """The dimension-0 binary function (1), image of the empty dimap."""
    return BinaryFunction(0, [1])


def permute_elements(vector, order):
    """
    Reorder the ground set: element j of the result is element order[j]
    of `vector`.
    """
    order = list(order)
    if sorted(order) != list(range(vector.m)):
        raise IndexOutOfRange(f"{order} is not a permutation of range({vector.m})")
    if vector.m == 0:
        return vector
    values = vector.values.reshape((2,) * vector.m).transpose(order).reshape(-1)
    labels = tuple(vector.labels[j] for j in order)
    return type(vector)(vector.m, values, labels)


# ---------------------------------------------------------------------------
# Bit sequences
# ---------------------------------------------------------------------------

def subset_index(bits):
    index = 0
    for b in bits:
        index = (index << 1) | (1 if b else 0)
    return index


def bits_of(index, k):
    if not 0 <= index < 1 << k:
        raise IndexOutOfRange(f"index {index} outside [0, 2^{k})")
    return tuple((index >> (k - 1 - i)) & 1 for i in range(k))


def insert_bit(bits, i, b):
    """G:i<-b, the sequence with b inserted before position i."""
    bits = tuple(bits)
    if not 0 <= i <= len(bits):
        raise IndexOutOfRange(f"cannot insert at {i} into a sequence of length {len(bits)}")
    return bits[:i] + (1 if b else 0,) + bits[i:]


def delete_bit(bits, i):
    bits = tuple(bits)
    if not 0 <= i < len(bits):
        raise IndexOutOfRange(f"cannot delete position {i} from a sequence of length {len(bits)}")
    return bits[:i] + bits[i + 1:]


# ---------------------------------------------------------------------------
# Comparisons and products
# ---------------------------------------------------------------------------

def proportionality_residual(a, b):
    """
    max |a - c*b| for the best-matching c, or inf when exactly one of the
    two vectors is zero. Zero against zero gives 0.
    """
    if a.m != b.m:
        raise DimensionMismatch(f"cannot compare dimensions {a.m} and {b.m}")
    x, y = a.values, b.values
    x_size, y_size = float(np.max(np.abs(x))), float(np.max(np.abs(y)))
    if x_size == 0 or y_size == 0:
        return 0.0 if x_size == y_size else float('inf')
    k = int(np.argmax(np.abs(y)))
    c = x[k] / y[k]
    return float(np.max(np.abs(x - c * y)))


def proportional(a, b, tol=None):
    """a ~ b: a = c*b for some nonzero c, entrywise within tol (scaled by the data)."""
    tol = default_tolerance(tol)
    if a.m != b.m:
        raise DimensionMismatch(f"cannot compare dimensions {a.m} and {b.m}")
    a_zero, b_zero = a.max_abs() <= tol, b.max_abs() <= tol
    if a_zero or b_zero:
        return a_zero and b_zero
    scale = max(1.0, a.max_abs(), b.max_abs())
    return proportionality_residual(a, b) <= tol * scale


def _merged_labels(left, right):
    if set(left).isdisjoint(right):
        return left + right
    return tuple(f'{l}_0' for l in left) + tuple(f'{l}_1' for l in right)


def tensor(f, g):
    values = np.kron(f.values, g.values)
    labels = _merged_labels(f.labels, g.labels)
    if isinstance(f, BinaryFunction) and isinstance(g, BinaryFunction):
        return BinaryFunction(f.m + g.m, values, labels)
    return RawVector(f.m + g.m, values, labels)


def tensor_power(f, k, labels=None):
    if k < 0:
        raise ValueError(f"tensor power must be non-negative, got {k}")
    values = reduce(np.kron, [f.values] * k, np.ones(1, dtype=complex))
    return BinaryFunction(f.m * k, values, labels)


def rowspace_indicator(matrix, labels=None, columns=None):
    """
    Indicator of the GF(2) rowspace of `matrix` (columns are the ground set).
    For a graph incidence matrix this is the cutset-space indicator.
    """
    matrix = gf2.as_gf2(matrix, columns)
    m = matrix.shape[1]
    values = np.zeros(1 << m, dtype=complex)
    values[sorted(gf2.rowspace(matrix))] = 1
    return BinaryFunction(m, values, labels)


# ---------------------------------------------------------------------------
# File format: "bf <m>" then 2^m lines "<index> <re> <im>"
# ---------------------------------------------------------------------------

def parse_bf(text):
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        fields = line.split()
        if header is None:
            if len(fields) != 2 or fields[0] != 'bf':
                raise BinaryFunctionFileError(f"line {lineno}: expected 'bf <m>', got {line!r}")
            try:
                header = int(fields[1])
            except ValueError:
                raise BinaryFunctionFileError(f"line {lineno}: bad dimension {fields[1]!r}")
            if header < 0:
                raise BinaryFunctionFileError(f"line {lineno}: negative dimension")
            continue
        if len(fields) != 3:
            raise BinaryFunctionFileError(f"line {lineno}: expected '<index> <re> <im>', got {line!r}")
        try:
            index, re, im = int(fields[0]), float(fields[1]), float(fields[2])
        except ValueError:
            raise BinaryFunctionFileError(f"line {lineno}: cannot parse {line!r}")
        if index != len(rows):
            raise BinaryFunctionFileError(f"line {lineno}: expected index {len(rows)}, got {index}")
        if not np.isfinite([re, im]).all():
            raise BinaryFunctionFileError(f"line {lineno}: entry must be finite, got {line!r}")
        rows.append(complex(re, im))

    if header is None:
        raise BinaryFunctionFileError("missing 'bf <m>' header")
    if header > settings.TRIALAB_MAX_GROUND_SET:
        raise BinaryFunctionFileError(f"dimension {header} exceeds {settings.TRIALAB_MAX_GROUND_SET}")
    if len(rows) != 1 << header:
        raise BinaryFunctionFileError(f"expected {1 << header} entries for m={header}, got {len(rows)}")
    return RawVector(header, rows)


def format_bf(vector):
    lines = [f'bf {vector.m}']
    for index, value in enumerate(vector.values):
        lines.append(f'{index} {value.real:.17g} {value.imag:.17g}')
    return '\n'.join(lines) + '\n'


def read_raw(path):
    return parse_bf(Path(path).read_text(encoding='utf-8'))


def read_bf(path, normalize_on_load=False, tol=None):
    """Load a binary function; strict unless normalize_on_load is set."""
    raw = read_raw(path)
    if normalize_on_load:
        return normalize(raw.m, raw.values, tol=tol)
    return make(raw.m, raw.values, tol=tol)


def write_bf(vector, path):
    Path(path).write_text(format_bf(vector), encoding='utf-8')
    logger.debug("wrote %s to %s", vector, path)
