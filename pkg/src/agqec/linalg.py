"""Dense linear algebra over the tabulated finite fields of :mod:`agqec.gf`.

Matrices are 2-D numpy arrays of element indices.  Elimination uses a fixed
pivot rule (first nonzero entry scanning columns left to right, rows top to
bottom), so echelon forms, ranks and nullspace bases are reproducible.
"""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec


def _sum_felt(spec: FieldSpec, arr: np.ndarray, axis: int) -> np.ndarray:
    # Field addition of many indices at once: componentwise mod-p sums of the
    # polynomial coordinates, re-encoded as indices.
    if spec.ext_deg == 1:
        return arr.sum(axis=axis) % spec.p
    c0 = (arr % spec.p).sum(axis=axis) % spec.p
    c1 = (arr // spec.p).sum(axis=axis) % spec.p
    return c0 + spec.p * c1


def matmul(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product over the field; A is (m, k), B is (k, n)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    prod = spec.mul_table[A[:, :, None], B[None, :, :]]
    return _sum_felt(spec, prod, axis=1)


def rref(spec: FieldSpec, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column list."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(R[r:, c])[0]
        if hits.size == 0:
            continue
        k = r + int(hits[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = spec.mul_table[spec.inv_table[R[r, c]], R[r]]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                factor = R[i, c]
                R[i] = spec.add_table[R[i], spec.neg_table[spec.mul_table[factor, R[r]]]]
        pivots.append(c)
        r += 1
    return R, pivots


def rank(spec: FieldSpec, M: np.ndarray) -> int:
    if np.asarray(M).shape[0] == 0:
        return 0
    _, pivots = rref(spec, M)
    return len(pivots)


def nullspace(spec: FieldSpec, M: np.ndarray) -> np.ndarray:
    """Rows spanning {v : M v^T = 0}, one per free column, deterministic."""
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(spec, M)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, c in enumerate(pivots):
            basis[row, c] = spec.neg_table[R[i, f]]
    return basis


def row_reduce_vector(spec: FieldSpec, R: np.ndarray, pivots: list[int], v: np.ndarray) -> np.ndarray:
    """Reduce v against an rref basis; zero result means v is in the row space."""
    v = np.array(v, dtype=np.int64, copy=True)
    for i, c in enumerate(pivots):
        if v[c] != 0:
            v = spec.add_table[v, spec.neg_table[spec.mul_table[v[c], R[i]]]]
    return v


def row_space_contains(spec: FieldSpec, M: np.ndarray, v: np.ndarray) -> bool:
    R, pivots = rref(spec, M)
    return not np.any(row_reduce_vector(spec, R, pivots, v))


def row_space_equal(spec: FieldSpec, A: np.ndarray, B: np.ndarray) -> bool:
    """Row spaces coincide iff the two rrefs are identical matrices."""
    RA, pa = rref(spec, A)
    RB, pb = rref(spec, B)
    if pa != pb:
        return False
    ra, rb = len(pa), len(pb)
    return np.array_equal(RA[:ra], RB[:rb])


def hermitian_gram(spec: FieldSpec, A: np.ndarray) -> np.ndarray:
    """Gram matrix of rows under <u, v> = sum_i u_i * conj(v_i)."""
    A = np.asarray(A)
    if A.shape[0] == 0:
        return np.zeros((0, 0), dtype=np.int64)
    return matmul(spec, A, spec.conj(A).T)
