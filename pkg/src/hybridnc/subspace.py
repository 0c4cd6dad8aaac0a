"""Subspaces of F_q^N in canonical RREF form, and operator-channel primitives."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .field import FieldSpec


class AmbientMismatchError(ValueError):
    pass


def rref(m, f: FieldSpec) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form over ``f`` and the rank.

    Zero rows are kept at the bottom so the output has the input's shape.
    """
    r = np.array(m, dtype=np.int64, copy=True)
    if r.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = r.shape
    prow = 0
    for c in range(cols):
        if prow == rows:
            break
        nz = np.flatnonzero(r[prow:, c])
        if nz.size == 0:
            continue
        p = prow + nz[0]
        if p != prow:
            r[[prow, p]] = r[[p, prow]]
        piv = r[prow, c]
        if piv != 1:
            r[prow] = f.mul(r[prow], f.inv_int(int(piv)))
        factors = r[:, c].copy()
        factors[prow] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            r[hit] ^= f.mul(factors[hit, None], r[prow][None, :])
        prow += 1
    return r, prow


def rank(m, f: FieldSpec) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return rref(m, f)[1]


def batched_rank(mats, f: FieldSpec) -> np.ndarray:
    """Ranks of a stack of matrices with shape (batch, rows, cols)."""
    work = np.array(mats, dtype=np.int64, copy=True)
    batch, rows, cols = work.shape
    out = np.zeros(batch, dtype=np.int64)
    if rows == 0 or cols == 0 or batch == 0:
        return out
    row_ids = np.arange(rows)
    for c in range(cols):
        cand = (work[:, :, c] != 0) & (row_ids[None, :] >= out[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        sel = np.flatnonzero(has)
        piv = cand[sel].argmax(axis=1)
        tgt = out[sel]
        prow = work[sel, piv].copy()
        work[sel, piv] = work[sel, tgt]
        prow = f.mul(prow, f.inv(prow[:, c])[:, None])
        work[sel, tgt] = prow
        factors = work[sel, :, c]
        factors = np.where(row_ids[None, :] > tgt[:, None], factors, 0)
        work[sel] ^= f.mul(factors[:, :, None], prow[:, None, :])
        out[sel] += 1
    return out


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of F_q^N stored as its RREF basis (no zero rows).

    Because the RREF basis is unique, two subspaces are equal exactly when
    their basis matrices are identical.
    """

    field: FieldSpec
    ambient_dim: int
    basis: np.ndarray = field(repr=False)

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.int64).reshape(-1, self.ambient_dim)
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self) -> int:
        return hash((self.field, self.ambient_dim, self.basis.tobytes()))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim}, q={self.field.order})"

    def contains(self, vec) -> bool:
        vec = np.asarray(vec, dtype=np.int64).reshape(1, -1)
        if vec.shape[1] != self.ambient_dim:
            raise AmbientMismatchError("vector length differs from ambient dimension")
        if self.dim == 0:
            return not vec.any()
        return rank(np.vstack([self.basis, vec]), self.field) == self.dim

    def is_subspace_of(self, other: Subspace) -> bool:
        _check_ambient(self, other)
        return dim_intersection(self, other) == self.dim

    @classmethod
    def zero(cls, f: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(f, ambient_dim, np.zeros((0, ambient_dim), dtype=np.int64))

    @classmethod
    def full(cls, f: FieldSpec, ambient_dim: int) -> Subspace:
        return cls(f, ambient_dim, np.eye(ambient_dim, dtype=np.int64))


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim or a.field != b.field:
        raise AmbientMismatchError(f"{a!r} and {b!r} live in different ambient spaces")


def span(generators, ambient_dim: int, f: FieldSpec) -> Subspace:
    """Canonical subspace spanned by ``generators`` (zero vectors allowed)."""
    gens = np.asarray(generators, dtype=np.int64)
    if gens.size == 0:
        return Subspace.zero(f, ambient_dim)
    if gens.ndim == 1:
        gens = gens[None, :]
    if gens.shape[1] != ambient_dim:
        raise AmbientMismatchError(
            f"generator length {gens.shape[1]} differs from ambient dimension {ambient_dim}"
        )
    if np.any((gens < 0) | (gens >= f.order)):
        raise ValueError("generator entries are not field elements")
    r, k = rref(gens, f)
    return Subspace(f, ambient_dim, r[:k])


def sum_space(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    return span(np.vstack([a.basis, b.basis]), a.ambient_dim, a.field)


def dim_intersection(a: Subspace, b: Subspace) -> int:
    _check_ambient(a, b)
    if a.dim == 0 or b.dim == 0:
        return 0
    return a.dim + b.dim - rank(np.vstack([a.basis, b.basis]), a.field)


def subspace_distance(a: Subspace, b: Subspace) -> int:
    return a.dim + b.dim - 2 * dim_intersection(a, b)


def erasures_errors(sent: Subspace, received: Subspace) -> tuple[int, int]:
    """(rho, t): dimensions lost from ``sent`` and spurious dimensions in ``received``."""
    z = dim_intersection(sent, received)
    return sent.dim - z, received.dim - z


def _full_rank_coefficients(rows: int, cols: int, f: FieldSpec, rng: np.random.Generator):
    while True:
        c = f.random(rng, (rows, cols))
        if rank(c, f) == min(rows, cols):
            return c


def erase_operator(v: Subspace, z: int, rng: np.random.Generator) -> Subspace:
    """A uniformly random ``z``-dimensional subspace of ``v``, or ``v`` itself if dim v <= z."""
    if z < 0:
        raise ValueError("z must be non-negative")
    if v.dim <= z:
        return v
    if z == 0:
        return Subspace.zero(v.field, v.ambient_dim)
    coeffs = _full_rank_coefficients(z, v.dim, v.field, rng)
    return span(v.field.matmul(coeffs, v.basis), v.ambient_dim, v.field)


def random_generating_set(v: Subspace, b: int, rng: np.random.Generator) -> np.ndarray:
    """``b`` vectors of ``v`` (one per row) drawn uniformly, conditioned on spanning ``v``."""
    if b < v.dim:
        raise ValueError(f"cannot span a {v.dim}-dimensional space with {b} vectors")
    if v.dim == 0:
        return np.zeros((b, v.ambient_dim), dtype=np.int64)
    coeffs = _full_rank_coefficients(b, v.dim, v.field, rng)
    return v.field.matmul(coeffs, v.basis)


def random_subspace(f: FieldSpec, ambient_dim: int, dim: int, rng: np.random.Generator) -> Subspace:
    """Uniformly random subspace of the given dimension."""
    coeffs = _full_rank_coefficients(dim, ambient_dim, f, rng)
    return span(coeffs, ambient_dim, f)


def enumerate_subspaces(f: FieldSpec, ambient_dim: int) -> list[Subspace]:
    """Every subspace of F_q^N, by enumerating RREF matrices.  Desk scale only."""
    q = f.order
    if q**ambient_dim > 1 << 12:
        raise ValueError("ambient space too large to enumerate")
    out = [Subspace.zero(f, ambient_dim)]
    for k in range(1, ambient_dim + 1):
        for pivots in combinations(range(ambient_dim), k):
            free = [
                (i, c)
                for i, p in enumerate(pivots)
                for c in range(p + 1, ambient_dim)
                if c not in pivots
            ]
            for vals in product(range(q), repeat=len(free)):
                m = np.zeros((k, ambient_dim), dtype=np.int64)
                for i, p in enumerate(pivots):
                    m[i, p] = 1
                for (i, c), x in zip(free, vals):
                    m[i, c] = x
                out.append(Subspace(f, ambient_dim, m))
    return out
