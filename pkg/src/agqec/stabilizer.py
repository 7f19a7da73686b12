"""Qudit stabilizer codes over F_q from Hermitian self-orthogonal codes.

Pauli operators on n qudits are exponent vectors of length 2n over F_q:
the first n entries are X exponents, the last n are Z exponents.  Two
Paulis commute (up to phase) exactly when their symplectic product
vanishes, so a stabilizer group is the row space of a check matrix whose
rows are pairwise symplectically orthogonal.

The construction: a Hermitian self-orthogonal [n, k] code over F_{q^2}
expands, row by row, into 2k symplectically self-orthogonal check rows
over F_q (the row c = a + b*beta maps to (a | b), and beta*c expands the
same way), giving an [[n, n - 2k]] stabilizer code.  Commutation is a
checked postcondition, not an assumption.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .agcode import LinearCode
from .gf import build_field

DEFAULT_PAULI_BUDGET = 2_000_000


class ConstructionError(Exception):
    """An internal invariant of a code construction failed."""


def pauli_weight(v: np.ndarray) -> int:
    """Number of qudits acted on nontrivially by an (x | z) exponent vector."""
    v = np.asarray(v)
    n = v.shape[-1] // 2
    return int(np.count_nonzero(v[..., :n] | v[..., n:]))


def single_qudit_pauli(n: int, j: int, a: int, b: int) -> np.ndarray:
    """The Pauli X^a Z^b on qudit j as a length-2n exponent vector."""
    v = np.zeros(2 * n, dtype=np.int64)
    v[j] = a
    v[n + j] = b
    return v


def symplectic_product(q: int, u: np.ndarray, v: np.ndarray) -> int:
    """sum_j (u_x[j] * v_z[j] - u_z[j] * v_x[j]) mod q."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError("length mismatch between Pauli vectors")
    n = u.shape[0] // 2
    return int((u[:n] @ v[n:] - u[n:] @ v[:n]) % q)


def _rref_mod_prime(M: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    R = np.array(M, dtype=np.int64, copy=True) % q
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
        R[r] = (R[r] * pow(int(R[r, c]), -1, q)) % q
        nz = np.nonzero(R[:, c])[0]
        for i in nz:
            if i != r:
                R[i] = (R[i] - R[i, c] * R[r]) % q
        pivots.append(c)
        r += 1
    return R, pivots


def _reduce_against(R: np.ndarray, pivots: list[int], v: np.ndarray, q: int) -> np.ndarray:
    v = np.array(v, dtype=np.int64, copy=True) % q
    for i, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * R[i]) % q
    return v


class StabilizerCode:
    """An [[n, k]] qudit stabilizer code over a prime field F_q.

    Attributes:
        q: prime qudit dimension.
        n: physical qudits.
        k: logical qudits (n minus the number of independent checks).
        checks: (n - k) x 2n check matrix, rows in (x | z) exponent form.
        logicals: 2k x 2n matrix of logical operator representatives; rows
            2i and 2i+1 form a conjugate pair with symplectic product 1,
            and all other pairings (including with every check) vanish.
    """

    def __init__(self, q: int, checks: np.ndarray, logicals: np.ndarray | None = None):
        checks = np.asarray(checks, dtype=np.int64) % q
        if checks.ndim != 2 or checks.shape[1] % 2:
            raise ValueError("checks must be an (m, 2n) matrix")
        self.q = int(q)
        self.n = checks.shape[1] // 2
        self._check_q_prime()

        rref, pivots = _rref_mod_prime(checks, q)
        if len(pivots) != checks.shape[0]:
            raise ConstructionError("check rows are not linearly independent")
        self.checks = checks
        self.k = self.n - checks.shape[0]
        self._rref = rref[: len(pivots)]
        self._pivots = pivots

        self._assert_commuting()
        # Syndrome map as a single matrix: syndrome(e) = S e mod q with
        # S = (-Hz | Hx), so each component is the symplectic product of a
        # check row with the error.
        hx, hz = self.checks[:, : self.n], self.checks[:, self.n :]
        self._syndrome_matrix = np.hstack([(-hz) % q, hx])

        self.logicals = (
            np.asarray(logicals, dtype=np.int64) % q
            if logicals is not None
            else self._complete_logicals()
        )
        self._assert_logicals()

    def _check_q_prime(self):
        if self.q < 2 or any(self.q % d == 0 for d in range(2, self.q)):
            raise ValueError(f"qudit dimension {self.q} must be prime")

    def _assert_commuting(self):
        hx, hz = self.checks[:, : self.n], self.checks[:, self.n :]
        gram = (hx @ hz.T - hz @ hx.T) % self.q
        if np.any(gram):
            raise ConstructionError("check rows do not pairwise commute")

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_hermitian_code(cls, code: LinearCode) -> "StabilizerCode":
        """Expand a Hermitian self-orthogonal code over F_{q^2} into checks.

        Each generator row c contributes the expansions of c and beta*c over
        the basis {1, beta}; the resulting rows are independent over F_q, so
        an [n, k] input yields n - 2k logical qudits.  Rejects inputs that
        are not Hermitian self-orthogonal.
        """
        from .agcode import is_hermitian_self_orthogonal

        spec = code.field
        if spec.q_sub is None:
            raise ValueError("stabilizer construction needs a code over a quadratic extension")
        if not is_hermitian_self_orthogonal(code):
            raise ValueError("input code is not Hermitian self-orthogonal")
        q = spec.q_sub
        beta = spec.from_coeffs((0, 1))

        rows = []
        for r in range(code.k):
            for word in (code.gen[r], spec.mul(beta, code.gen[r])):
                a = word % spec.p
                b = word // spec.p
                rows.append(np.concatenate([a, b]))
        checks = (
            np.array(rows, dtype=np.int64) if rows else np.zeros((0, 2 * code.n), dtype=np.int64)
        )
        stab = cls(q, checks)
        if stab.k != code.n - 2 * code.k:
            raise ConstructionError(
                f"expected {code.n - 2 * code.k} logical qudits, got {stab.k}"
            )
        return stab

    def _complete_logicals(self) -> np.ndarray:
        """Symplectic Gram-Schmidt over the centralizer, deterministic order."""
        q, n = self.q, self.n
        # Centralizer of the stabilizer group: nullspace of the syndrome map.
        cand = _nullspace_mod_prime(self._syndrome_matrix, q)
        pool = [cand[i] for i in range(cand.shape[0])]

        span = self._rref.copy()
        span_piv = list(self._pivots)

        def in_span(v):
            return not np.any(_reduce_against(span, span_piv, v, q))

        def add_to_span(v):
            nonlocal span, span_piv
            stacked = np.vstack([span, v[None, :]]) if span.size else v[None, :]
            span, span_piv = _rref_mod_prime(stacked, q)
            span = span[: len(span_piv)]

        pairs: list[np.ndarray] = []
        while pool:
            u = pool.pop(0)
            if in_span(u):
                continue
            partner = None
            for idx, w in enumerate(pool):
                if symplectic_product(q, u, w):
                    partner = idx
                    break
            if partner is None:
                raise ConstructionError("centralizer element without symplectic partner")
            v = pool.pop(partner)
            v = (v * pow(symplectic_product(q, u, v), -1, q)) % q
            pool = [
                (w - symplectic_product(q, w, v) * u + symplectic_product(q, w, u) * v) % q
                for w in pool
            ]
            pairs.extend([u, v])
            add_to_span(u)
            add_to_span(v)

        logicals = (
            np.array(pairs, dtype=np.int64)
            if pairs
            else np.zeros((0, 2 * n), dtype=np.int64)
        )
        if logicals.shape[0] != 2 * self.k:
            raise ConstructionError("logical completion produced the wrong count")
        return logicals

    def _assert_logicals(self):
        if self.logicals.shape != (2 * self.k, 2 * self.n):
            raise ConstructionError("logicals matrix has the wrong shape")
        if self.k == 0:
            return
        if np.any(self.syndrome(self.logicals)):
            raise ConstructionError("logical operator fails to commute with checks")
        lx, lz = self.logicals[:, : self.n], self.logicals[:, self.n :]
        gram = (lx @ lz.T - lz @ lx.T) % self.q
        want = np.zeros_like(gram)
        for i in range(0, 2 * self.k, 2):
            want[i, i + 1] = 1
            want[i + 1, i] = (-1) % self.q
        if not np.array_equal(gram, want):
            raise ConstructionError("logicals are not canonically paired")

    # -- syndrome machinery ---------------------------------------------------

    def syndrome(self, e: np.ndarray) -> np.ndarray:
        """Symplectic product of every check with e; linear in e mod q."""
        e = np.asarray(e)
        if e.shape[-1] != 2 * self.n:
            raise ValueError("error vector has wrong length")
        return (e @ self._syndrome_matrix.T) % self.q

    def classify(self, r: np.ndarray) -> str:
        """One of 'identity', 'stabilizer', 'logical', 'unresolved'.

        identity: r = 0.  unresolved: nonzero syndrome.  stabilizer: zero
        syndrome and r lies in the check row space.  logical: the rest.
        """
        r = np.asarray(r, dtype=np.int64) % self.q
        if not np.any(r):
            return "identity"
        if np.any(self.syndrome(r)):
            return "unresolved"
        if not np.any(_reduce_against(self._rref, self._pivots, r, self.q)):
            return "stabilizer"
        return "logical"

    def validate(self) -> None:
        """Re-run the structural checks; raises ConstructionError on failure."""
        self._assert_commuting()
        self._assert_logicals()

    def __repr__(self):
        return f"StabilizerCode([[{self.n}, {self.k}]]_{self.q}, {self.n - self.k} checks)"


def _nullspace_mod_prime(M: np.ndarray, q: int) -> np.ndarray:
    M = np.asarray(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = _rref_mod_prime(M, q)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        basis[row, f] = 1
        for i, c in enumerate(pivots):
            basis[row, c] = (-R[i, f]) % q
    return basis


@dataclass
class DistanceBound:
    """Result of a bounded-weight logical search.

    verified_min_weight_logical is the least weight at which a logical
    (zero-syndrome, outside the stabilizer row space) Pauli exists, or None
    when no logical of weight <= wmax was found, i.e. distance > wmax.
    """

    wmax: int
    verified_min_weight_logical: int | None
    candidates_scanned: int
    example: np.ndarray | None = None


def distance_lower_bound(
    code: StabilizerCode, wmax: int, budget: int = DEFAULT_PAULI_BUDGET
) -> DistanceBound:
    """Scan every Pauli of weight <= wmax for logical operators.

    Enumerates weight classes in increasing order and stops at the first
    weight containing a logical.  Refuses (ValueError) when the candidate
    count exceeds the budget.
    """
    q, n = code.q, code.n
    per_qudit = q * q - 1
    total = sum(math.comb(n, w) * per_qudit**w for w in range(1, wmax + 1))
    if total > budget:
        raise ValueError(f"{total} candidates exceed budget {budget}")

    # Syndromes of all single-qudit Paulis: shape (n, q^2 - 1, m).
    m = n - code.k
    singles = np.zeros((n, per_qudit, m), dtype=np.int64)
    vecs = np.zeros((n, per_qudit, 2 * n), dtype=np.int64)
    for j in range(n):
        for v in range(1, q * q):
            a, b = v % q, v // q
            p = single_qudit_pauli(n, j, a, b)
            vecs[j, v - 1] = p
            singles[j, v - 1] = code.syndrome(p)

    scanned = 0
    for w in range(1, wmax + 1):
        found_weight = None
        example = None
        for support in itertools.combinations(range(n), w):
            # Broadcast-sum the per-qudit syndromes over all value choices.
            syn = singles[support[0]]
            for pos in range(1, w):
                syn = (syn[..., None, :] + singles[support[pos]][None, ...]) % q
                syn = syn.reshape(-1, m)
            scanned += syn.shape[0]
            zero = np.nonzero(~syn.any(axis=1))[0]
            for flat in zero:
                vals = []
                rem = int(flat)
                for _ in range(w):
                    vals.append(rem % per_qudit)
                    rem //= per_qudit
                vals.reverse()
                pauli = np.zeros(2 * n, dtype=np.int64)
                for pos, v in zip(support, vals):
                    pauli = (pauli + vecs[pos, v]) % q
                if code.classify(pauli) == "logical":
                    found_weight = w
                    example = pauli
                    break
            if found_weight is not None:
                break
        if found_weight is not None:
            return DistanceBound(wmax, found_weight, scanned, example)
    return DistanceBound(wmax, None, scanned, None)


def save_stabilizer(code: StabilizerCode, path: str | Path) -> None:
    doc = {
        "q": code.q,
        "n": code.n,
        "k": code.k,
        "checks": code.checks.tolist(),
        "logicals": code.logicals.tolist(),
    }
    Path(path).write_text(json.dumps(doc, indent=1))


def load_stabilizer(path: str | Path) -> StabilizerCode:
    """Load and validate a stabilizer file; any commuting check matrix of the
    right shape is accepted, whatever produced it."""
    doc = json.loads(Path(path).read_text())
    checks = np.array(doc["checks"], dtype=np.int64).reshape(doc["n"] - doc["k"], 2 * doc["n"])
    logicals = np.array(doc["logicals"], dtype=np.int64).reshape(2 * doc["k"], 2 * doc["n"])
    return StabilizerCode(doc["q"], checks, logicals)
