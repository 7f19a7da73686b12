"""Depolarizing-style qudit noise models producing (x | z) exponent vectors.

Two kinds are supported:

    uniform_pauli: each qudit is hit with probability p, and the hit draws
        a uniform nonzero exponent pair (a, b) among the q^2 - 1 choices.
    xz3: each qudit is hit with probability p, the hit picks a type from
        {X-only, Z-only, XZ} uniformly (p/3 each), and every nonzero
        exponent is uniform over 1..q-1.

Sampling is pure given a numpy Generator, so trials that derive their own
streams from (master_seed, trial_index) are reproducible regardless of
execution order.  PCG64 (the numpy default 64-bit generator) is the pinned
generator for the whole project.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

KINDS = ("uniform_pauli", "xz3")


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {KINDS}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"error probability must be in [0, 1], got {self.p}")


def sample_error(model: NoiseModel, code_q: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """One i.i.d.-per-qudit error, as a length-2n exponent vector over F_q."""
    e = np.zeros(2 * n, dtype=np.int64)
    hits = np.nonzero(rng.random(n) < model.p)[0]
    if hits.size == 0:
        return e
    q = code_q
    if model.kind == "uniform_pauli":
        # r in [1, q^2) decodes to (a, b) = (r mod q, r div q), never (0, 0).
        r = rng.integers(1, q * q, size=hits.size)
        e[hits] = r % q
        e[n + hits] = r // q
    else:
        kind = rng.integers(0, 3, size=hits.size)  # 0: X, 1: Z, 2: XZ
        x_exp = rng.integers(1, q, size=hits.size)
        z_exp = rng.integers(1, q, size=hits.size)
        x_on = kind != 1
        z_on = kind != 0
        e[hits[x_on]] = x_exp[x_on]
        e[n + hits[z_on]] = z_exp[z_on]
    return e
