"""
Linear algebra over GF(2) for 0/1 matrices whose columns are the ground set.

Row vectors convert to subset indices with column 0 as the most
significant bit, matching binfun.subset_index.
"""
import itertools

import numpy as np


def as_gf2(matrix, columns=None):
    """Coerce to a 2-d uint8 array reduced mod 2; an empty list needs `columns`."""
    array = np.asarray(matrix)
    if array.size == 0:
        width = columns if columns is not None else (array.shape[1] if array.ndim == 2 else 0)
        return np.zeros((0, width), dtype=np.uint8)
    if array.ndim == 1:
        array = array.reshape(1, -1)
    return (array.astype(np.int64) & 1).astype(np.uint8)


def rref(matrix):
    """Reduced row echelon form and pivot columns."""
    A = as_gf2(matrix).copy()
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.where(A[r:, c] == 1)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            A[[r, p], :] = A[[p, r], :]
        # clear column c everywhere else
        ones = np.where(A[:, c] == 1)[0]
        ones = ones[ones != r]
        if ones.size:
            A[ones, :] ^= A[r, :]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def gf2_rank(matrix):
    return len(rref(matrix)[1])


def row_to_index(row):
    index = 0
    for bit in row:
        index = (index << 1) | int(bit)
    return index


def rowspace(matrix):
    """Every vector of the rowspace, as a set of subset indices."""
    basis, _ = rref(matrix)
    masks = [row_to_index(row) for row in basis]
    space = set()
    for choice in itertools.product((0, 1), repeat=len(masks)):
        index = 0
        for pick, mask in zip(choice, masks):
            if pick:
                index ^= mask
        space.add(index)
    return space


def orthogonal_complement(matrix, columns=None):
    """Basis (as rows) of {x : N x = 0}; the rowspace of the result is the dual space."""
    A = as_gf2(matrix, columns)
    cols = A.shape[1]
    basis, pivots = rref(A)
    free = [c for c in range(cols) if c not in pivots]
    out = np.zeros((len(free), cols), dtype=np.uint8)
    for t, f in enumerate(free):
        out[t, f] = 1
        for r, p in enumerate(pivots):
            out[t, p] = basis[r, f]
    return out


def loops_and_coloops(matrix, columns=None):
    """
    Columns on which every rowspace vector vanishes, and columns whose unit
    vector lies in the rowspace.
    """
    A = as_gf2(matrix, columns)
    cols = A.shape[1]
    rank = gf2_rank(A)
    zero = [c for c in range(cols) if not A[:, c].any()]
    unit = []
    for c in range(cols):
        e = np.zeros((1, cols), dtype=np.uint8)
        e[0, c] = 1
        if gf2_rank(np.vstack([A, e])) == rank:
            unit.append(c)
    return zero, unit


def incidence_matrix(vertices, edges):
    """Vertex-edge incidence mod 2; a loop contributes a zero column."""
    N = np.zeros((vertices, len(edges)), dtype=np.uint8)
    for j, (u, v) in enumerate(edges):
        N[u, j] ^= 1
        N[v, j] ^= 1
    return N
