"""Systematic Reed-Solomon codes with Berlekamp-Welch decoding."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .field import FieldSpec
from .subspace import rref

EXHAUSTIVE_LIMIT = 1 << 16


@dataclass(frozen=True)
class RSSpec:
    """An [n, k, n-k+1] Reed-Solomon code over ``field``.

    Messages are the values of the encoding polynomial at the first ``k``
    evaluation points, so codewords start with the message.
    """

    field: FieldSpec
    n: int
    k: int
    eval_points: tuple[int, ...] | None = None
    generator: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.k <= self.n <= self.field.order:
            raise ValueError(f"need 1 <= k <= n <= q, got k={self.k}, n={self.n}, q={self.field.order}")
        pts = self.eval_points
        if pts is None:
            pts = tuple(range(self.n))
        pts = tuple(int(p) for p in pts)
        if len(pts) != self.n or len(set(pts)) != self.n:
            raise ValueError("need n distinct evaluation points")
        if any(not 0 <= p < self.field.order for p in pts):
            raise ValueError("evaluation points must be field elements")
        object.__setattr__(self, "eval_points", pts)
        object.__setattr__(self, "generator", self._systematic_generator())

    @property
    def delta(self) -> int:
        return self.n - self.k + 1

    @property
    def radius(self) -> int:
        return (self.n - self.k) // 2

    def _systematic_generator(self) -> np.ndarray:
        f, pts, k = self.field, self.eval_points, self.k
        g = np.zeros((k, self.n), dtype=np.int64)
        for i in range(k):
            # Lagrange basis polynomial for point i among the first k points
            denom = 1
            for j in range(k):
                if j != i:
                    denom = f.mul_int(denom, pts[i] ^ pts[j])
            denom_inv = f.inv_int(denom)
            for col, x in enumerate(pts):
                num = 1
                for j in range(k):
                    if j != i:
                        num = f.mul_int(num, x ^ pts[j])
                g[i, col] = f.mul_int(num, denom_inv)
        return g


def rs_encode_systematic(msg, spec: RSSpec) -> np.ndarray:
    """Encode one message (length k) or a stack of messages (rows)."""
    msg = np.asarray(msg, dtype=np.int64)
    if msg.shape[-1] != spec.k:
        raise ValueError(f"message length must be {spec.k}")
    if msg.ndim == 1:
        return spec.field.matmul(msg[None], spec.generator)[0]
    return spec.field.matmul(msg, spec.generator)


def is_codeword(word, spec: RSSpec) -> bool:
    word = np.asarray(word, dtype=np.int64)
    return bool(np.array_equal(rs_encode_systematic(word[: spec.k], spec), word))


def _poly_eval(coeffs: list[int], x: int, f: FieldSpec) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = f.mul_int(acc, x) ^ c
    return acc


def _poly_divmod(num: list[int], den: list[int], f: FieldSpec) -> tuple[list[int], list[int]]:
    num = list(num)
    while den and den[-1] == 0:
        den = den[:-1]
    dd = len(den) - 1
    lead_inv = f.inv_int(den[-1])
    quot = [0] * max(len(num) - dd, 1)
    for s in range(len(num) - 1, dd - 1, -1):
        c = num[s]
        if c:
            c = f.mul_int(c, lead_inv)
            quot[s - dd] = c
            for i, d in enumerate(den):
                num[s - dd + i] ^= f.mul_int(c, d)
    return quot, num[:dd]


def rs_decode(word, spec: RSSpec) -> np.ndarray | None:
    """Message of the codeword within Hamming distance (n-k)//2 of ``word``, else None."""
    word = np.asarray(word, dtype=np.int64)
    if word.shape != (spec.n,):
        raise ValueError(f"word length must be {spec.n}")
    if is_codeword(word, spec):
        return word[: spec.k].copy()
    t = spec.radius
    if t == 0:
        return None
    f, k, n = spec.field, spec.k, spec.n
    pts = spec.eval_points
    # unknowns: e_0..e_{t-1} (E monic of degree t), q_0..q_{k+t-1}
    ncols = t + k + t
    aug = np.zeros((n, ncols + 1), dtype=np.int64)
    for i, (x, y) in enumerate(zip(pts, word.tolist())):
        xp = [f.pow_int(x, j) for j in range(k + t + 1)]
        for j in range(t):
            aug[i, j] = f.mul_int(int(y), xp[j])
        for j in range(k + t):
            aug[i, t + j] = xp[j]
        aug[i, ncols] = f.mul_int(int(y), xp[t])
    red, rnk = rref(aug, f)
    sol = [0] * ncols
    for row in red[:rnk]:
        piv = int(np.flatnonzero(row)[0])
        if piv == ncols:
            return None
        sol[piv] = int(row[ncols])
    err_loc = sol[:t] + [1]
    numer = sol[t:]
    quot, rem = _poly_divmod(numer, err_loc, f)
    if any(rem):
        return None
    quot = quot[:k] + [0] * max(0, k - len(quot))
    msg = np.array([_poly_eval(quot, x, f) for x in pts[:k]], dtype=np.int64)
    dist = int(np.count_nonzero(rs_encode_systematic(msg, spec) != word))
    if dist > t:
        return None
    return msg


def all_codewords(spec: RSSpec) -> np.ndarray:
    q, k = spec.field.order, spec.k
    if q**k > EXHAUSTIVE_LIMIT:
        raise ValueError(f"q^k = {q**k} exceeds the enumeration limit {EXHAUSTIVE_LIMIT}")
    msgs = np.array(list(itertools.product(range(q), repeat=k)), dtype=np.int64)
    return rs_encode_systematic(msgs, spec)


def rs_min_distance(spec: RSSpec) -> int:
    """Minimum Hamming weight over nonzero codewords, by enumeration."""
    words = all_codewords(spec)
    weights = np.count_nonzero(words, axis=1)
    return int(weights[weights > 0].min())
