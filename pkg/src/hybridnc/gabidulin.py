"""Lifted Gabidulin subspace codes and their minimum-distance decoders.

A message is ``k`` coefficients ``f_0..f_{k-1}`` of GF(q^m) defining the
linearized polynomial ``f(x) = sum f_i x^(q^i)``.  It is evaluated at ``l``
points of GF(q^m) that are independent over GF(q); the values are expanded
to an ``l x m`` matrix ``X`` over GF(q) and the codeword is the row space of
``[I_l | X]`` inside GF(q)^(l+m).

Two decoders are provided.  The exhaustive one scans the whole codebook and
is exact at any distance.  The algebraic one linearizes the problem
(Welch-Berlekamp style, with the received space first split into rows that
carry a pivot in the identity block and rows that do not) and finds the
unique codeword within half the minimum distance when one exists.  Both
return ``None`` when no codeword lies strictly within that radius.
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from .field import ExtFieldSpec, FieldSpec
from .subspace import AmbientMismatchError, Subspace, batched_rank, rank

Message = tuple[int, ...]

EXHAUSTIVE_LIMIT = 1 << 20
AUTO_EXHAUSTIVE_LIMIT = 1 << 12
PAIRWISE_LIMIT = 1 << 12
_CHUNK = 1 << 14


class CodebookTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class GabidulinSpec:
    ext: ExtFieldSpec
    length: int
    dimension: int
    eval_points: tuple[int, ...] | None = None

    def __post_init__(self):
        m = self.ext.extension_degree
        if not 1 <= self.dimension <= self.length <= m:
            raise ValueError(
                f"need 1 <= k_C <= l <= m, got k_C={self.dimension}, l={self.length}, m={m}"
            )
        pts = self.eval_points
        if pts is None:
            pts = tuple(self.ext.basis[: self.length])
        pts = tuple(int(p) for p in pts)
        if len(pts) != self.length:
            raise ValueError("need exactly l evaluation points")
        expanded = np.array([self.ext.to_vector(p) for p in pts], dtype=np.int64)
        if rank(expanded, self.ext.base) != self.length:
            raise ValueError("evaluation points are not linearly independent over GF(q)")
        object.__setattr__(self, "eval_points", pts)

    @property
    def base(self) -> FieldSpec:
        return self.ext.base


def gabidulin_encode(msg: Message, spec: GabidulinSpec) -> list[int]:
    """Evaluate the linearized polynomial given by ``msg`` at the evaluation points."""
    if len(msg) != spec.dimension:
        raise ValueError(f"message must have {spec.dimension} coefficients")
    ext = spec.ext
    out = []
    for g in spec.eval_points:
        acc = 0
        for i, c in enumerate(msg):
            if c:
                acc ^= ext.mul_int(int(c), ext.frob_int(g, i))
        out.append(acc)
    return out


def expand(codeword, spec: GabidulinSpec) -> np.ndarray:
    return np.array([spec.ext.to_vector(int(x)) for x in codeword], dtype=np.int64).reshape(
        len(codeword), spec.ext.extension_degree
    )


def expand_and_lift(codeword, spec: GabidulinSpec) -> Subspace:
    """Row space of ``[I | X]`` where ``X`` expands each symbol over GF(q)."""
    if len(codeword) != spec.length:
        raise ValueError(f"codeword must have {spec.length} symbols")
    x = expand(codeword, spec)
    lifted = np.hstack([np.eye(spec.length, dtype=np.int64), x])
    # already in RREF: the identity block holds every pivot
    return Subspace(spec.base, spec.length + spec.ext.extension_degree, lifted)


def encode_message(msg: Message, spec: GabidulinSpec) -> Subspace:
    return expand_and_lift(gabidulin_encode(msg, spec), spec)


class SubspaceCodebook:
    """The lifted Gabidulin code: q^(m k_C) codewords of dimension l in GF(q)^(l+m)."""

    def __init__(self, gabidulin: GabidulinSpec):
        self.gabidulin = gabidulin
        self.ext = gabidulin.ext
        self.field = gabidulin.base
        self.length = gabidulin.length
        self.dimension = gabidulin.dimension
        self.ambient_dim = gabidulin.length + gabidulin.ext.extension_degree
        self.size = self.ext.order**self.dimension
        self.min_distance = 2 * (self.length - self.dimension + 1)
        self._matrices: np.ndarray | None = None

    @classmethod
    def build(cls, q_exp: int, m: int, ell: int, k_c: int) -> SubspaceCodebook:
        ext = ExtFieldSpec(FieldSpec(q_exp), m)
        return cls(GabidulinSpec(ext, ell, k_c))

    def __repr__(self) -> str:
        return (
            f"SubspaceCodebook(q={self.field.order}, m={self.ext.extension_degree}, "
            f"l={self.length}, k_C={self.dimension}, d={self.min_distance})"
        )

    def message_from_index(self, index: int) -> Message:
        qm = self.ext.order
        if not 0 <= index < self.size:
            raise IndexError(index)
        return tuple((index // qm**i) % qm for i in range(self.dimension))

    def index_of(self, msg: Message) -> int:
        qm = self.ext.order
        return sum(int(c) * qm**i for i, c in enumerate(msg))

    def random_message(self, rng: np.random.Generator) -> Message:
        return tuple(self.ext.random(rng) for _ in range(self.dimension))

    def messages(self) -> Iterator[Message]:
        for i in range(self.size):
            yield self.message_from_index(i)

    def encode(self, msg: Message) -> Subspace:
        return encode_message(msg, self.gabidulin)

    def codewords(self) -> Iterator[Subspace]:
        for msg in self.messages():
            yield self.encode(msg)

    def codeword_matrices(self, limit: int = EXHAUSTIVE_LIMIT) -> np.ndarray:
        """All expanded matrices ``X``, indexed like :meth:`message_from_index`."""
        if self.size > limit:
            raise CodebookTooLargeError(
                f"codebook has {self.size} codewords, above the enumeration limit {limit}"
            )
        if self._matrices is None:
            self._matrices = self._enumerate_matrices()
        return self._matrices

    def _enumerate_matrices(self) -> np.ndarray:
        # X depends GF(q)-linearly on the base-field digits of the message
        f, ext = self.field, self.ext
        m, ell = ext.extension_degree, self.length
        cur = np.zeros((1, ell, m), dtype=np.int64)
        scalars = np.arange(f.order, dtype=np.int64)
        for i in range(self.dimension):
            for s in range(m):
                unit = [0] * self.dimension
                unit[i] = ext.basis[s]
                x_t = expand(gabidulin_encode(tuple(unit), self.gabidulin), self.gabidulin)
                scaled = f.mul(scalars[:, None, None], x_t[None])
                cur = (scaled[:, None] ^ cur[None]).reshape(-1, ell, m)
        return cur

    def decode(self, received: Subspace, method: str = "auto") -> Message | None:
        return decode(received, self, method)


def _split_received(received: Subspace, cb: SubspaceCodebook) -> tuple[np.ndarray, np.ndarray]:
    if received.ambient_dim != cb.ambient_dim or received.field != cb.field:
        raise AmbientMismatchError(f"{received!r} is not in the ambient space of {cb!r}")
    b = received.basis
    return b[:, : cb.length], b[:, cb.length :]


def codeword_distances(received: Subspace, cb: SubspaceCodebook, mats: np.ndarray) -> np.ndarray:
    """Subspace distance from ``received`` to each lifted codeword in ``mats``.

    For a basis (A | Y) of U with r rows, d(U, rowspace[I | X]) = l - r + 2 rank(Y - A X).
    """
    a, y = _split_received(received, cb)
    r = received.dim
    f = cb.field
    if r == 0:
        return np.full(len(mats), cb.length, dtype=np.int64)
    out = np.empty(len(mats), dtype=np.int64)
    for lo in range(0, len(mats), _CHUNK):
        chunk = mats[lo : lo + _CHUNK]
        diff = y[None] ^ f.matmul(a[None], chunk)
        out[lo : lo + _CHUNK] = cb.length - r + 2 * batched_rank(diff, f)
    return out


def decode_exhaustive(received: Subspace, cb: SubspaceCodebook) -> Message | None:
    dist = codeword_distances(received, cb, cb.codeword_matrices())
    best = int(dist.min())
    if 2 * best >= cb.min_distance:
        return None
    hits = np.flatnonzero(dist == best)
    if len(hits) != 1:
        return None
    return cb.message_from_index(int(hits[0]))


def _ext_nullvector(rows: list[list[int]], ncols: int, ext: ExtFieldSpec) -> list[int] | None:
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    prow = 0
    for c in range(ncols):
        p = next((i for i in range(prow, len(mat)) if mat[i][c]), None)
        if p is None:
            continue
        mat[prow], mat[p] = mat[p], mat[prow]
        inv = ext.inv_int(mat[prow][c])
        mat[prow] = [ext.mul_int(inv, x) for x in mat[prow]]
        for i in range(len(mat)):
            if i != prow and mat[i][c]:
                fac = mat[i][c]
                mat[i] = [x ^ ext.mul_int(fac, y) for x, y in zip(mat[i], mat[prow])]
        pivots.append(c)
        prow += 1
        if prow == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    sol = [0] * ncols
    sol[free[0]] = 1
    for i, c in enumerate(pivots):
        sol[c] = mat[i][free[0]]
    return sol


def _compose(outer: list[int], inner: list[int], ext: ExtFieldSpec) -> list[int]:
    out = [0] * (len(outer) + len(inner) - 1)
    for i, v in enumerate(outer):
        if v:
            for j, c in enumerate(inner):
                if c:
                    out[i + j] ^= ext.mul_int(v, ext.frob_int(c, i))
    return out


def _left_divide(num: list[int], den: list[int], k: int, ext: ExtFieldSpec) -> list[int] | None:
    """Solve num = den o f for f of q-degree < k, or None if den does not divide num."""
    top = max((i for i, v in enumerate(den) if v), default=None)
    if top is None:
        return None
    m = ext.extension_degree
    lead_inv = ext.inv_int(den[top])
    f = [0] * k
    for j in range(k - 1, -1, -1):
        s = top + j
        acc = num[s] if s < len(num) else 0
        for i in range(top):
            j2 = s - i
            if j2 < k and f[j2]:
                acc ^= ext.mul_int(den[i], ext.frob_int(f[j2], i))
        f[j] = ext.frob_int(ext.mul_int(acc, lead_inv), (m - top) % m)
    comp = _compose(den, f, ext)
    width = max(len(comp), len(num))
    if comp + [0] * (width - len(comp)) != list(num) + [0] * (width - len(num)):
        return None
    return f


def decode_algebraic(received: Subspace, cb: SubspaceCodebook) -> Message | None:
    """Bounded-distance decoding by linearized interpolation.

    Rows of the RREF basis are (a_j, y_j) with a_j != 0, plus rows (0, w)
    that can only be errors.  With r_A rows of the first kind and r_E of
    the second, a codeword is within the radius iff the error rank tau
    satisfies r_A >= 2 tau + r_E + k.  Any nonzero solution (V, N) of
    V(y_j) = N(a_j), V(w) = 0 with deg V <= tau + r_E then has N = V o f.
    """
    a_blk, y_blk = _split_received(received, cb)
    ext = cb.ext
    k = cb.dimension
    has_a = a_blk.any(axis=1)
    r_a = int(has_a.sum())
    r_e = received.dim - r_a
    tau = (r_a - r_e - k) // 2
    if tau < 0:
        return None
    pts = cb.gabidulin.eval_points
    a_vals = []
    for row in a_blk[has_a]:
        acc = 0
        for c, g in zip(row, pts):
            if c:
                acc ^= ext.scale_int(int(c), g)
        a_vals.append(acc)
    y_vals = [ext.from_vector(row) for row in y_blk[has_a]]
    w_vals = [ext.from_vector(row) for row in y_blk[~has_a]]
    dv = tau + r_e
    dn = tau + r_e + k - 1
    rows = []
    for a, y in zip(a_vals, y_vals):
        rows.append([ext.frob_int(y, i) for i in range(dv + 1)] + [ext.frob_int(a, i) for i in range(dn + 1)])
    for w in w_vals:
        rows.append([ext.frob_int(w, i) for i in range(dv + 1)] + [0] * (dn + 1))
    sol = _ext_nullvector(rows, dv + dn + 2, ext)
    if sol is None:
        return None
    coeffs = _left_divide(sol[dv + 1 :], sol[: dv + 1], k, ext)
    if coeffs is None:
        return None
    msg = tuple(coeffs)
    x = expand(gabidulin_encode(msg, cb.gabidulin), cb.gabidulin)
    dist = codeword_distances(received, cb, x[None])[0]
    if 2 * dist >= cb.min_distance:
        return None
    return msg


def decode(received: Subspace, cb: SubspaceCodebook, method: str = "auto") -> Message | None:
    """Message of the unique codeword within distance < d/2 of ``received``, else None.

    ``method`` is ``"exhaustive"``, ``"algebraic"`` or ``"auto"`` (exhaustive
    for small codebooks).
    """
    if method == "auto":
        method = "exhaustive" if cb.size <= AUTO_EXHAUSTIVE_LIMIT else "algebraic"
    if method == "exhaustive":
        return decode_exhaustive(received, cb)
    if method == "algebraic":
        return decode_algebraic(received, cb)
    raise ValueError(f"unknown decoding method {method!r}")


def difference_index(a, b):
    """Index of the codeword matrix X_a - X_b.

    Message digits live in GF(2^e) and pack into the index e bits at a
    time, and X depends linearly on the digits, so subtracting codewords
    is XOR of their indices.
    """
    return a ^ b


def min_distance(cb: SubspaceCodebook) -> int:
    """Exact minimum subspace distance over every pair of distinct codewords.

    Both codewords of a pair have dimension l, so their distance is
    2 rank(X_a - X_b); the rank of each difference matrix is computed once.
    """
    if cb.size > PAIRWISE_LIMIT:
        raise CodebookTooLargeError(
            f"pairwise scan of {cb.size} codewords exceeds the limit {PAIRWISE_LIMIT}"
        )
    if cb.size < 2:
        raise ValueError("minimum distance needs at least two codewords")
    ranks = batched_rank(cb.codeword_matrices(), cb.field)
    idx = np.arange(cb.size)
    best = None
    for a in range(cb.size - 1):
        d = 2 * int(ranks[difference_index(a, idx[a + 1 :])].min())
        best = d if best is None else min(best, d)
    return best
