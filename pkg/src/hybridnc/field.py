"""Arithmetic in GF(2^e) and in the one-level extension GF(q^m) over it.

Base-field elements are plain integers in ``[0, q)`` whose bits are the
polynomial coefficients.  Vectors and matrices over the base field are
numpy integer arrays; :class:`FieldSpec` provides vectorised operations on
them.  Extension-field elements are integers packing ``m`` base-field digits
(``e`` bits each, little endian) in the polynomial basis ``1, a, ..., a^(m-1)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

# x^8 + x^4 + x^3 + x + 1
AES_MODULUS = 0x11B
TABLE_LIMIT = 16
MAX_DEGREE = 32


class FieldMismatchError(ValueError):
    """Raised when elements of different fields meet in one operation."""


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _poly_mod2(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible_gf2(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2 over GF(2)."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for div in range(1 << d, 1 << (d + 1)):
            if _poly_mod2(poly, div) == 0:
                return False
    return True


def smallest_irreducible_gf2(degree: int) -> int:
    for cand in range(1 << degree, 1 << (degree + 1)):
        if is_irreducible_gf2(cand):
            return cand
    raise ValueError(f"no irreducible polynomial of degree {degree}")  # pragma: no cover


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class FieldSpec:
    """The field GF(2^degree) defined by an irreducible ``modulus``.

    ``modulus`` is a bit-vector of coefficients including the leading term,
    e.g. ``0x11B`` for x^8 + x^4 + x^3 + x + 1.  Fields up to 2^16 use
    log/antilog tables; larger ones reduce explicitly.
    """

    def __init__(self, degree: int = 8, modulus: int | None = None):
        if not 1 <= degree <= MAX_DEGREE:
            raise ValueError(f"field degree must be in [1, {MAX_DEGREE}], got {degree}")
        if modulus is None:
            modulus = AES_MODULUS if degree == 8 else smallest_irreducible_gf2(degree)
        if modulus.bit_length() - 1 != degree:
            raise ValueError(f"modulus {modulus:#x} does not have degree {degree}")
        if not is_irreducible_gf2(modulus):
            raise ValueError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        self.characteristic = 2
        self._tables = degree <= TABLE_LIMIT
        self.generator = self.exp_table = self.log_table = self.inv_table = None
        if self._tables:
            self._build_tables()

    def _build_tables(self) -> None:
        q = self.order
        gen = self._find_generator()
        exp = [0] * (2 * q)
        log = [0] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = _poly_mod2(_clmul(x, gen), self.modulus)
        for i in range(q - 1, 2 * q):
            exp[i] = exp[i - (q - 1)]
        self.generator = gen
        self._exp = exp
        self._log = log
        dtype = np.int64
        self.exp_table = np.array(exp, dtype=dtype)
        self.log_table = np.array(log, dtype=dtype)
        inv = np.zeros(q, dtype=dtype)
        for a in range(1, q):
            inv[a] = exp[(q - 1 - log[a]) % (q - 1)]
        self.inv_table = inv
        self._inv = inv.tolist()

    def _find_generator(self) -> int:
        q = self.order
        if q == 2:
            return 1
        factors = _prime_factors(q - 1)
        for g in range(2, q):
            if all(self._pow_slow(g, (q - 1) // f) != 1 for f in factors):
                return g
        raise ValueError("no generator found")  # pragma: no cover

    def _pow_slow(self, a: int, n: int) -> int:
        r = 1
        while n:
            if n & 1:
                r = _poly_mod2(_clmul(r, a), self.modulus)
            a = _poly_mod2(_clmul(a, a), self.modulus)
            n >>= 1
        return r

    def __repr__(self) -> str:
        return f"FieldSpec(degree={self.degree}, modulus={self.modulus:#x})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldSpec)
            and self.degree == other.degree
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.modulus))

    # scalar arithmetic on raw integers

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._tables:
            return self._exp[self._log[a] + self._log[b]]
        return _poly_mod2(_clmul(a, b), self.modulus)

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._tables:
            return self._inv[a]
        return self._pow_slow(a, self.order - 2)

    def pow_int(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv_int(a), -n
        if self._tables:
            if n == 0:
                return 1
            if a == 0:
                return 0
            return self._exp[(self._log[a] * n) % (self.order - 1)]
        return self._pow_slow(a, n)

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(int(value), self)

    # vectorised arithmetic on numpy arrays

    def mul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._tables:
            r = self.exp_table[self.log_table[a] + self.log_table[b]]
            return np.where((a == 0) | (b == 0), 0, r)
        return self._mul_reduce(a, b)

    def _mul_reduce(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a, b = np.broadcast_arrays(a.astype(np.uint64), b.astype(np.uint64))
        acc = np.zeros(a.shape, dtype=np.uint64)
        a = a.copy()
        top = np.uint64(1 << self.degree)
        red = np.uint64(self.modulus ^ (1 << self.degree))
        for bit in range(self.degree):
            sel = ((b >> np.uint64(bit)) & np.uint64(1)).astype(bool)
            acc ^= np.where(sel, a, np.uint64(0))
            a <<= np.uint64(1)
            over = (a & top) != 0
            a = np.where(over, (a ^ top) ^ red, a)
        return acc.astype(np.int64)

    def inv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self._tables:
            return self.inv_table[a]
        return np.vectorize(self.inv_int, otypes=[np.int64])(a)

    def matmul(self, a, b) -> np.ndarray:
        """Matrix product over the field; supports leading batch dimensions."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape[-1] == 0:
            return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
        prod = self.mul(a[..., :, :, None], b[..., None, :, :])
        return np.bitwise_xor.reduce(prod, axis=-2)

    def random(self, rng: np.random.Generator, size, nonzero: bool = False) -> np.ndarray:
        low = 1 if nonzero else 0
        return rng.integers(low, self.order, size=size, dtype=np.int64)


@dataclass(frozen=True)
class FieldElement:
    """A scalar of GF(2^e) bound to its field."""

    value: int
    spec: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.spec.order:
            raise ValueError(f"{self.value} is not an element of {self.spec!r}")

    def _check(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement) or other.spec != self.spec:
            raise FieldMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        return mul(self, other)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        return mul(self, inv(other))

    def __pow__(self, n: int) -> FieldElement:
        return FieldElement(self.spec.pow_int(self.value, n), self.spec)

    def __neg__(self) -> FieldElement:
        return self

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF(2^{self.spec.degree})({self.value:#x})"


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.value ^ b.value, a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    a._check(b)
    return FieldElement(a.spec.mul_int(a.value, b.value), a.spec)


def inv(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec.inv_int(a.value), a.spec)


# polynomials over the base field, lists of ints, lowest degree first


def _ptrim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmod(a: list[int], m: list[int], f: FieldSpec) -> list[int]:
    a = _ptrim(list(a))
    dm = len(m) - 1
    lead_inv = f.inv_int(m[-1])
    while len(a) - 1 >= dm:
        c = f.mul_int(a[-1], lead_inv)
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] ^= f.mul_int(c, mi)
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], f: FieldSpec) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] ^= f.mul_int(ai, bj)
    return _pmod(out, m, f)


def _pgcd(a: list[int], b: list[int], f: FieldSpec) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, f)
    return a


def _x_pow_q_iter(poly: list[int], f: FieldSpec, times: int) -> list[int]:
    """x^(q^times) mod poly, by repeated q-th powering."""
    x = _pmod([0, 1], poly, f)
    for _ in range(times):
        for _ in range(f.degree):
            x = _pmulmod(x, x, poly, f)
    return x


def is_irreducible_over(poly: list[int], f: FieldSpec) -> bool:
    """Rabin's test for a monic polynomial over the base field."""
    m = len(poly) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if _ptrim(list(_x_pow_q_iter(poly, f, m))) != _ptrim([0, 1]):
        return False
    for p in _prime_factors(m):
        h = _x_pow_q_iter(poly, f, m // p)
        h = list(h) + [0] * max(0, 2 - len(h))
        h[1] ^= 1
        g = _pgcd(poly, h, f)
        if len(g) > 1:
            return False
    return True


def smallest_irreducible_over(f: FieldSpec, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m.

    Candidates are ordered as base-q numbers whose digits, most significant
    first, are the coefficients of 1, x, ..., x^(m-1).
    """
    q = f.order
    # a zero constant term makes x a factor
    start = q ** (m - 1) if m > 1 else 0
    for idx in range(start, q**m):
        low = [(idx // q ** (m - 1 - i)) % q for i in range(m)]
        poly = low + [1]
        if is_irreducible_over(poly, f):
            return tuple(poly)
    raise ValueError(f"no irreducible polynomial of degree {m}")  # pragma: no cover


class ExtFieldSpec:
    """GF(q^m) as polynomials of degree < m over a base :class:`FieldSpec`."""

    def __init__(self, base: FieldSpec, extension_degree: int, modulus=None):
        m = extension_degree
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if base.degree * m > 62:
            raise ValueError("extension field too large for packed representation")
        if modulus is None:
            modulus = _default_ext_modulus(base, m)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not is_irreducible_over(list(modulus), base):
            raise ValueError(f"modulus {modulus} is reducible over {base!r}")
        self.base = base
        self.extension_degree = m
        self.modulus = modulus
        self.order = base.order**m
        self._shift = base.degree
        self._mask = base.order - 1
        # frob_images[i][s] = (a^s)^(q^i) packed
        alpha_pows = [self.pack([1 if j == s else 0 for j in range(m)]) for s in range(m)]
        self._frob_images = [alpha_pows]
        for _ in range(1, m):
            prev = self._frob_images[-1]
            self._frob_images.append([self._pow_q(x) for x in prev])
        self._norm_exp = (self.order - 1) // (base.order - 1)

    @property
    def basis(self) -> list[int]:
        """The polynomial basis 1, a, ..., a^(m-1) as packed elements."""
        return list(self._frob_images[0])

    def __repr__(self) -> str:
        return f"ExtFieldSpec({self.base!r}, m={self.extension_degree}, modulus={self.modulus})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, ExtFieldSpec)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.base, self.modulus))

    def __call__(self, value: int) -> ExtFieldElement:
        return ExtFieldElement(int(value), self)

    def unpack(self, a: int) -> list[int]:
        return [(a >> (self._shift * s)) & self._mask for s in range(self.extension_degree)]

    def pack(self, digits) -> int:
        out = 0
        for s, d in enumerate(digits):
            out |= int(d) << (self._shift * s)
        return out

    def to_vector(self, a: int) -> list[int]:
        """Coordinates of ``a`` over the base field in the polynomial basis."""
        return self.unpack(a)

    def from_vector(self, v) -> int:
        return self.pack(v)

    def mul_int(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        f = self.base
        m = self.extension_degree
        da, db = self.unpack(a), self.unpack(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] ^= f.mul_int(x, y)
        mod = self.modulus
        for deg in range(2 * m - 2, m - 1, -1):
            c = prod[deg]
            if c:
                prod[deg] = 0
                for i in range(m):
                    if mod[i]:
                        prod[deg - m + i] ^= f.mul_int(c, mod[i])
        return self.pack(prod[:m])

    def scale_int(self, c: int, a: int) -> int:
        """Multiply a packed element by a base-field scalar."""
        f = self.base
        return self.pack([f.mul_int(c, d) for d in self.unpack(a)])

    def _pow_q(self, a: int) -> int:
        for _ in range(self.base.degree):
            a = self.mul_int(a, a)
        return a

    def frob_int(self, a: int, i: int = 1) -> int:
        i %= self.extension_degree
        if i == 0 or a == 0:
            return a
        images = self._frob_images[i]
        out = 0
        for c, img in zip(self.unpack(a), images):
            if c:
                out ^= img if c == 1 else self.scale_int(c, img)
        return out

    def inv_int(self, a: int) -> int:
        """Itoh-Tsujii: a^-1 = (a^r)^-1 * a^(r-1), r = (q^m - 1)/(q - 1)."""
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        m = self.extension_degree
        t = 1
        for i in range(1, m):
            t = self.mul_int(t, self.frob_int(a, i))
        norm = self.mul_int(a, t)
        # norm lies in the base field: only digit 0 is set
        return self.scale_int(self.base.inv_int(norm), t)

    def pow_int(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv_int(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul_int(r, a)
            a = self.mul_int(a, a)
            n >>= 1
        return r

    def embed(self, c: int) -> int:
        """The base-field element c as an element of the extension."""
        return int(c)

    def random(self, rng: np.random.Generator) -> int:
        return int(rng.integers(0, self.order, dtype=np.int64))


@functools.lru_cache(maxsize=None)
def _default_ext_modulus(base: FieldSpec, m: int) -> tuple[int, ...]:
    return smallest_irreducible_over(base, m)


@dataclass(frozen=True)
class ExtFieldElement:
    """A scalar of GF(q^m) bound to its extension field."""

    value: int
    spec: ExtFieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.spec.order:
            raise ValueError(f"{self.value} is not an element of {self.spec!r}")

    def _check(self, other: ExtFieldElement) -> None:
        if not isinstance(other, ExtFieldElement) or other.spec != self.spec:
            raise FieldMismatchError(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other: ExtFieldElement) -> ExtFieldElement:
        self._check(other)
        return ExtFieldElement(self.value ^ other.value, self.spec)

    __sub__ = __add__

    def __mul__(self, other: ExtFieldElement) -> ExtFieldElement:
        self._check(other)
        return ExtFieldElement(self.spec.mul_int(self.value, other.value), self.spec)

    def __truediv__(self, other: ExtFieldElement) -> ExtFieldElement:
        self._check(other)
        return ExtFieldElement(
            self.spec.mul_int(self.value, self.spec.inv_int(other.value)), self.spec
        )

    def __pow__(self, n: int) -> ExtFieldElement:
        return ExtFieldElement(self.spec.pow_int(self.value, n), self.spec)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"GF({self.spec.base.order}^{self.spec.extension_degree})({self.value:#x})"


def frob(a: ExtFieldElement, i: int) -> ExtFieldElement:
    """a^(q^i)."""
    return ExtFieldElement(a.spec.frob_int(a.value, i), a.spec)
