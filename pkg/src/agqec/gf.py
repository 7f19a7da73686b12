"""Exact arithmetic in small prime fields F_p and their quadratic extensions.

Field elements are canonical integer indices.  An element with polynomial
coordinates (c0, c1, ..., c_{d-1}) in the modulus basis has index
sum(c_i * p**i), so index 0 is the additive identity and index 1 the
multiplicative identity.  Every operation is backed by a precomputed table,
which makes scalar arithmetic O(1) and lets matrix code operate on whole
numpy arrays of indices with fancy indexing.

Only the fields this project needs are supported:

    F_p   for any prime p       (ext_deg = 1, modulus is the formal "b - 0")
    F_9   = F_3[b] / (b^2 + 1)
    F_25  = F_5[b] / (b^2 + 4b + 2)

The extension moduli are pinned so that matrices, point orderings and all
serialized artifacts are byte-reproducible.
"""

from __future__ import annotations

import numpy as np

# Felt: a field element, stored as its canonical integer index.
Felt = int

# Pinned monic moduli for the quadratic extensions, coefficients ascending
# (constant term first).  b^2 + 1 over F_3; b^2 + 4b + 2 over F_5.
_EXTENSION_MODULI = {
    (3, 2): (1, 0, 1),
    (5, 2): (2, 4, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


class FieldSpec:
    """A fully tabulated finite field F_p or F_{p^2}.

    Attributes:
        p: prime characteristic.
        ext_deg: extension degree over F_p (1 or 2).
        modulus: monic modulus polynomial, ascending coefficients,
            length ext_deg + 1.
        order: number of elements, p**ext_deg.
        q_sub: order of the fixed subfield under conjugation when this is a
            quadratic extension (q_sub**2 == order), else None.
    """

    def __init__(self, p: int, ext_deg: int, modulus: tuple[int, ...]):
        if not _is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if ext_deg not in (1, 2):
            raise ValueError(f"unsupported extension degree {ext_deg}")
        if len(modulus) != ext_deg + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree ext_deg")
        if any(not 0 <= c < p for c in modulus[:-1]):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if ext_deg == 2:
            # Irreducibility of a quadratic is equivalent to having no root.
            for a in range(p):
                if (a * a + modulus[1] * a + modulus[0]) % p == 0:
                    raise ValueError(f"modulus {modulus} has root {a} in F_{p}")

        self.p = p
        self.ext_deg = ext_deg
        self.modulus = tuple(modulus)
        self.order = p**ext_deg
        self.q_sub = p if ext_deg == 2 else None
        self._build_tables()

    # -- construction of the operation tables --------------------------------

    def _build_tables(self):
        p, d, n = self.p, self.ext_deg, self.order
        idx = np.arange(n)
        if d == 1:
            add = (idx[:, None] + idx[None, :]) % p
            mul = (idx[:, None] * idx[None, :]) % p
            neg = (-idx) % p
        else:
            c0, c1 = idx % p, idx // p
            add = (c0[:, None] + c0[None, :]) % p + p * ((c1[:, None] + c1[None, :]) % p)
            neg = (-c0) % p + p * ((-c1) % p)
            # (a0 + a1 b)(b0 + b1 b) with b^2 = -m1 b - m0
            m0, m1 = self.modulus[0], self.modulus[1]
            t0 = c0[:, None] * c0[None, :]
            t1 = c0[:, None] * c1[None, :] + c1[:, None] * c0[None, :]
            t2 = c1[:, None] * c1[None, :]
            r0 = (t0 - m0 * t2) % p
            r1 = (t1 - m1 * t2) % p
            mul = r0 + p * r1
        self.add_table = add.astype(np.int64)
        self.mul_table = mul.astype(np.int64)
        self.neg_table = neg.astype(np.int64)

        inv = np.zeros(n, dtype=np.int64)
        for a in range(1, n):
            hits = np.nonzero(self.mul_table[a] == 1)[0]
            if hits.size != 1:
                raise ValueError("modulus does not define a field")
            inv[a] = hits[0]
        self.inv_table = inv

        if self.q_sub is not None:
            conj = np.arange(n, dtype=np.int64)
            for _ in range(self.q_sub - 1):
                conj = self.mul_table[conj, np.arange(n)]
            self.conj_table = conj
        else:
            self.conj_table = None

    # -- scalar and vectorized arithmetic -------------------------------------

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul_table[a, self.inv(b)]

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1 if np.isscalar(a) else np.ones_like(np.asarray(a)), a
        while e:
            if e & 1:
                result = self.mul_table[result, base]
            base = self.mul_table[base, base]
            e >>= 1
        return result

    def conj(self, a):
        """The conjugation a -> a**q_sub; an involution fixing exactly F_q."""
        if self.conj_table is None:
            raise ValueError("conjugation requires a quadratic extension field")
        return self.conj_table[a]

    # -- representation helpers -----------------------------------------------

    def coeffs(self, a: Felt) -> tuple[int, ...]:
        """Polynomial coordinates of an element index, ascending in b."""
        out = []
        for _ in range(self.ext_deg):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def from_coeffs(self, coeffs) -> Felt:
        if len(coeffs) != self.ext_deg:
            raise ValueError("coefficient vector has wrong length")
        return sum(int(c) % self.p * self.p**i for i, c in enumerate(coeffs))

    def elements(self) -> list[Felt]:
        """All elements in ascending canonical index order (0 first, 1 second)."""
        return list(range(self.order))

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.p == other.p
            and self.ext_deg == other.ext_deg
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.p, self.ext_deg, self.modulus))

    def __repr__(self):
        if self.ext_deg == 1:
            return f"FieldSpec(F_{self.p})"
        return f"FieldSpec(F_{self.order} = F_{self.p}[b]/{self.modulus})"

    def serialize(self) -> dict:
        return {"p": self.p, "ext_deg": self.ext_deg, "modulus": list(self.modulus)}


_FIELD_CACHE: dict[tuple[int, int], FieldSpec] = {}


def build_field(p: int, ext_deg: int) -> FieldSpec:
    """Build (or fetch from cache) the supported field of order p**ext_deg.

    Prime fields accept any prime p.  Quadratic extensions are limited to the
    pinned-modulus table (F_9 and F_25); anything else raises ValueError.
    """
    key = (p, ext_deg)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    if not _is_prime(p):
        raise ValueError(f"unsupported field: {p} is not prime")
    if ext_deg == 1:
        spec = FieldSpec(p, 1, (0, 1))
    elif key in _EXTENSION_MODULI:
        spec = FieldSpec(p, 2, _EXTENSION_MODULI[key])
    else:
        raise ValueError(f"unsupported field GF({p}^{ext_deg}); no pinned modulus")
    _FIELD_CACHE[key] = spec
    return spec


def arith(spec: FieldSpec, op: str, a: Felt, b: Felt) -> Felt:
    """Dispatch a binary field operation by name ('add'|'sub'|'mul'|'div')."""
    for x in (a, b):
        if not 0 <= x < spec.order:
            raise ValueError(f"element index {x} out of range for {spec!r}")
    try:
        fn = {"add": spec.add, "sub": spec.sub, "mul": spec.mul, "div": spec.div}[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return int(fn(a, b))


def conj_q(spec: FieldSpec, a: Felt) -> Felt:
    """Conjugation x -> x**q on a quadratic extension, as a free function."""
    return int(spec.conj(a))
