"""Stage-one decoder: greedy syndrome-weight descent with single-qudit moves.

At each step the decoder considers every single-qudit pure power X^a or Z^b,
computes the syndrome weight after that move, and applies the move with the
largest strict weight reduction (ties broken by action order).  It stops at
zero syndrome, at a local minimum, or at the iteration cap.  Stalling is a
legitimate outcome; the residual syndrome is handed to the learned stage.

Sign convention shared with the learned stage: searching uses the update
s' = s - syndrome(a) for action a, and the physical correction recorded for
a chosen action is its inverse -a, so that for error e the composed operator
e + correction always has syndrome equal to the tracked residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stabilizer import StabilizerCode, single_qudit_pauli


def action_set(q: int, n: int) -> np.ndarray:
    """All single-qudit pure powers as (2(q-1)n, 2n) exponent vectors.

    Order: qudit 0 first; within a qudit X^1..X^{q-1} then Z^1..Z^{q-1}.
    """
    actions = np.zeros((2 * (q - 1) * n, 2 * n), dtype=np.int64)
    row = 0
    for j in range(n):
        for a in range(1, q):
            actions[row, j] = a
            row += 1
        for b in range(1, q):
            actions[row, n + j] = b
            row += 1
    return actions


@dataclass
class GreedyResult:
    correction: np.ndarray  # accumulated physical correction, length 2n
    residual: np.ndarray  # final syndrome, length n - k
    steps: int


class GreedyDecoder:
    """Greedy decoder bound to one stabilizer code, with precomputed action
    syndromes so each step is a single vectorized pass over all actions."""

    def __init__(self, code: StabilizerCode, max_iters: int | None = None):
        self.code = code
        self.actions = action_set(code.q, code.n)
        self.action_syndromes = code.syndrome(self.actions)
        self.max_iters = max_iters if max_iters is not None else 2 * code.n

    def decode(self, s0: np.ndarray, max_iters: int | None = None) -> GreedyResult:
        q = self.code.q
        limit = max_iters if max_iters is not None else self.max_iters
        s = np.asarray(s0, dtype=np.int64) % q
        if s.shape != (self.code.n - self.code.k,):
            raise ValueError("syndrome has wrong length for this code")
        correction = np.zeros(2 * self.code.n, dtype=np.int64)
        steps = 0
        weight = int(np.count_nonzero(s))
        while weight and steps < limit:
            candidates = (s[None, :] - self.action_syndromes) % q
            cand_weights = np.count_nonzero(candidates, axis=1)
            best = int(np.argmin(cand_weights))  # first minimum = action order
            if cand_weights[best] >= weight:
                break  # no strict improvement anywhere
            correction = (correction - self.actions[best]) % q
            s = candidates[best]
            weight = int(cand_weights[best])
            steps += 1
        return GreedyResult(correction=correction, residual=s, steps=steps)


def greedy_decode(code: StabilizerCode, s0: np.ndarray, max_iters: int | None = None) -> GreedyResult:
    """One-shot convenience wrapper; caches the decoder on the code object."""
    dec = getattr(code, "_greedy_decoder", None)
    if dec is None:
        dec = GreedyDecoder(code)
        code._greedy_decoder = dec
    return dec.decode(s0, max_iters=max_iters)
