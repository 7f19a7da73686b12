"""One-point evaluation codes C(D, s*Pinf) over F_{q^2}.

A code is built by evaluating the monomial basis of the pole-order-s space
at every affine rational point of the curve.  The class records the divisor
degree s, the evaluation-point ordering, and the generator matrix; duality,
Hermitian self-orthogonality and exact minimum distance are computed from
the matrix, never from closed-form parameter claims.

The closed-form formulas themselves are kept in
:func:`claimed_parameters`, verbatim, for audit tables only; nothing in the
construction path trusts them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from . import linalg
from .curve import CurveSpec, affine_points, monomial_basis, rr_dimension
from .gf import FieldSpec, build_field

DEFAULT_ENUMERATION_BUDGET = 6_000_000


@dataclass
class LinearCode:
    """A k x n generator matrix over F_{q^2} plus its construction metadata.

    gen rows are linearly independent (rank is exactly k).  Columns follow
    point_order, the evaluation-point list used when the code was built.
    s is the one-point divisor degree, or None for codes (such as duals)
    not produced by direct evaluation.
    """

    field: FieldSpec
    n: int
    k: int
    gen: np.ndarray
    s: int | None = None
    point_order: list[tuple[int, int]] = dc_field(default_factory=list)
    curve: CurveSpec | None = None

    @property
    def designed_distance(self) -> int | None:
        if self.s is None or self.s >= self.n:
            return None
        return self.n - self.s


def build_one_point_code(curve: CurveSpec, field: FieldSpec, s: int) -> LinearCode:
    """Evaluate the monomial basis of the degree-s space at all affine points.

    Row r of the generator is (f(P_1), ..., f(P_n)) for f = x^i y^j the r-th
    basis monomial.  For s < n these rows are independent; beyond that,
    dependent rows are dropped (first independent subset in basis order) so
    the stored matrix always has full row rank.
    """
    if field.q_sub != curve.q:
        raise ValueError("field is not the quadratic extension matching the curve")
    points = affine_points(curve, field)
    n = len(points)
    g = curve.genus
    if not 0 <= s < n + 2 * g:
        raise ValueError(f"s must lie in [0, {n + 2 * g}), got {s}")

    xs = np.array([p[0] for p in points], dtype=np.int64)
    ys = np.array([p[1] for p in points], dtype=np.int64)
    basis = monomial_basis(curve, s)
    max_i = max(i for i, _ in basis)
    xpow = np.empty((max_i + 1, n), dtype=np.int64)
    xpow[0] = 1
    for i in range(1, max_i + 1):
        xpow[i] = field.mul(xpow[i - 1], xs)
    ypow = np.empty((curve.q, n), dtype=np.int64)
    ypow[0] = 1
    for j in range(1, curve.q):
        ypow[j] = field.mul(ypow[j - 1], ys)

    rows = np.array([field.mul(xpow[i], ypow[j]) for i, j in basis], dtype=np.int64)

    # Keep the first independent subset of rows, in basis order.
    kept: list[int] = []
    work = np.zeros((0, n), dtype=np.int64)
    pivots: list[int] = []
    for r in range(rows.shape[0]):
        residue = linalg.row_reduce_vector(field, work, pivots, rows[r])
        if np.any(residue):
            kept.append(r)
            work = np.vstack([work, residue[None, :]])
            work, pivots = linalg.rref(field, work)
    gen = rows[kept]

    return LinearCode(
        field=field,
        n=n,
        k=gen.shape[0],
        gen=gen,
        s=s,
        point_order=points,
        curve=curve,
    )


def dual_code(code: LinearCode) -> LinearCode:
    """The Euclidean dual: generator rows span {v : gen v^T = 0}."""
    null = linalg.nullspace(code.field, code.gen)
    return LinearCode(
        field=code.field,
        n=code.n,
        k=null.shape[0],
        gen=null,
        s=None,
        point_order=list(code.point_order),
        curve=code.curve,
    )


def is_hermitian_self_orthogonal(code: LinearCode) -> bool:
    """True iff every pair of generator rows has zero Hermitian inner product.

    The pairing is <u, v> = sum_i u_i * v_i^q, so this is exactly the
    containment of the code in its Hermitian dual.
    """
    if code.field.q_sub is None:
        raise ValueError("Hermitian self-orthogonality needs a quadratic extension field")
    if code.k == 0:
        return True
    gram = linalg.hermitian_gram(code.field, code.gen)
    return not np.any(gram)


def hermitian_so_sweep(curve: CurveSpec, field: FieldSpec, s_max: int | None = None) -> dict[int, bool]:
    """Self-orthogonality flag for every s in [0, s_max]; used by audit tables."""
    n = curve.q**3 if curve.m == curve.q + 1 else len(affine_points(curve, field))
    if s_max is None:
        s_max = n + 2 * curve.genus - 2
    return {
        s: is_hermitian_self_orthogonal(build_one_point_code(curve, field, s))
        for s in range(s_max + 1)
    }


def max_so_degree(curve: CurveSpec, field: FieldSpec) -> int:
    """Largest s whose evaluation code is Hermitian self-orthogonal.

    Scans s ascending and stops at the first failure; valid because the
    degree-s spaces are nested, so the flag is monotone in s (the full sweep
    in the test suite re-verifies that).
    """
    n = len(affine_points(curve, field))
    last = -1
    for s in range(n + 2 * curve.genus - 1):
        if not is_hermitian_self_orthogonal(build_one_point_code(curve, field, s)):
            break
        last = s
    if last < 0:
        raise ValueError("no self-orthogonal degree exists")
    return last


def min_distance_exact(code: LinearCode, budget: int = DEFAULT_ENUMERATION_BUDGET) -> int:
    """Minimum Hamming weight over all nonzero codewords, by full enumeration.

    Refuses (ValueError) when order**k exceeds the budget; degenerate k = 0
    codes have no nonzero codewords and are also rejected.
    """
    if code.k == 0:
        raise ValueError("code has no nonzero codewords")
    order = code.field.order
    count = order**code.k
    if count > budget:
        raise ValueError(f"enumeration of {count} codewords exceeds budget {budget}")

    spec = code.field
    # Block enumeration: tabulate all combinations of the low rows once, then
    # stream combinations of the remaining rows over that block.
    k_low = min(code.k, 4 if order > 5 else 6)
    block = np.zeros((1, code.n), dtype=np.int64)
    for r in range(k_low):
        scaled = np.array([spec.mul(c, code.gen[r]) for c in range(order)], dtype=np.int64)
        block = spec.add_table[block[:, None, :], scaled[None, :, :]].reshape(-1, code.n)

    best = code.n + 1
    k_high = code.k - k_low
    high_rows = code.gen[k_low:]
    for combo in range(order**k_high):
        word = np.zeros(code.n, dtype=np.int64)
        c = combo
        for r in range(k_high):
            coeff = c % order
            c //= order
            if coeff:
                word = spec.add(word, spec.mul(coeff, high_rows[r]))
        full = spec.add_table[block, word[None, :]]
        weights = np.count_nonzero(full, axis=1)
        if combo == 0:
            weights = weights[1:]  # skip the all-zero codeword
        if weights.size:
            best = min(best, int(weights.min()))
    return best


def low_weight_search(code: LinearCode, trials: int, seed: int) -> int:
    """Randomized upper bound on the minimum distance for codes too large to
    enumerate: best weight among random nonzero codewords."""
    rng = np.random.default_rng(seed)
    spec = code.field
    best = code.n
    for _ in range(trials):
        coeffs = rng.integers(0, spec.order, size=code.k)
        if not np.any(coeffs):
            continue
        word = np.zeros(code.n, dtype=np.int64)
        for r in range(code.k):
            if coeffs[r]:
                word = spec.add(word, spec.mul(int(coeffs[r]), code.gen[r]))
        best = min(best, int(np.count_nonzero(word)))
    return best


def claimed_parameters(q: int, r: int) -> dict:
    """Literal closed-form parameter formulas for this construction family.

    These are the published claims the audit table compares against; they are
    intentionally evaluated exactly as written (including their internal
    inconsistencies) and are never used to build codes.

    Returns a dict with:
        T: lattice count #{(i, j) : i*q + j*(q-1) <= r, 0 <= j <= q-1}
        k_cases: the five-case piecewise dimension, cases applied in order
        case: which case fired (1-5)
        designed_d: q^3 - r*(q^2 - q + 1)
        quantum: (q^3, q^3 + q^2 - 3q - 2r, r + 2q - q^2)
    """

    def T(t: int) -> int:
        if t < 0:
            return 0
        total = 0
        for j in range(q):
            rem = t - j * (q - 1)
            if rem < 0:
                break
            total += rem // q + 1
        return total

    n = q**3
    if r < 0:
        k, case = 0, 1
    elif 0 <= r <= q * q - 3 * q:
        k, case = T(r), 2
    elif q * q - 3 * q < r < n:
        k, case = r * (q * q - q + 1) - (q - 1) * (q - 2) // 2, 3
    elif n <= r <= n + q * q - 3 * q:
        k, case = n - T(n + q * q - 3 * q - r), 4
    else:
        k, case = n, 5

    return {
        "T": T(r),
        "k_cases": k,
        "case": case,
        "designed_d": n - r * (q * q - q + 1),
        "quantum": (n, n + q * q - 3 * q - 2 * r, r + 2 * q - q * q),
    }


def save_code(code: LinearCode, path: str | Path) -> None:
    """Write the code file: field, curve, s, matrix and point list as JSON."""
    doc = {
        "field": code.field.serialize(),
        "curve": {"q": code.curve.q, "m": code.curve.m} if code.curve else None,
        "s": code.s,
        "n": code.n,
        "k": code.k,
        "generator": code.gen.tolist(),
        "points": [list(p) for p in code.point_order],
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_code(path: str | Path) -> LinearCode:
    doc = json.loads(Path(path).read_text())
    f = doc["field"]
    spec = build_field(f["p"], f["ext_deg"])
    if spec.serialize() != f:
        raise ValueError("code file uses an unsupported field representation")
    curve = CurveSpec(doc["curve"]["q"], doc["curve"]["m"]) if doc.get("curve") else None
    gen = np.array(doc["generator"], dtype=np.int64).reshape(doc["k"], doc["n"])
    if np.any(gen < 0) or np.any(gen >= spec.order):
        raise ValueError("generator entries out of range")
    return LinearCode(
        field=spec,
        n=doc["n"],
        k=doc["k"],
        gen=gen,
        s=doc["s"],
        point_order=[tuple(p) for p in doc["points"]],
        curve=curve,
    )
