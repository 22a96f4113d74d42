"""Exact dense linear algebra over prime fields GF(p) and the rationals.

Matrices are plain 2-d numpy arrays.  Over GF(p) they hold canonical
representatives ``0..p-1`` (``int64`` for small primes, Python ints
otherwise); over Q they are object arrays of ``gmpy2.mpq`` in lowest terms.
A :class:`FieldSpec` carries the arithmetic, so every routine takes the
field as its first argument.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import gmpy2
import numpy as np

_SMALL_PRIME = 1 << 20


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class FieldSpec:
    kind: str
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not _is_prime(int(self.p)):
                raise ValueError(f"GF(p) needs a prime p, got {self.p!r}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no p")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def gf(cls, p: int) -> "FieldSpec":
        return cls("prime", int(p))

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        if obj.get("kind") == "prime":
            return cls.gf(obj["p"])
        return cls.rational()

    def to_json(self) -> dict:
        return {"kind": "prime", "p": self.p} if self.kind == "prime" else {"kind": "rational"}

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "prime" else 0

    @property
    def dtype(self):
        if self.kind == "prime" and self.p < _SMALL_PRIME:
            return np.int64
        return object

    def __str__(self):
        return f"GF({self.p})" if self.kind == "prime" else "QQ"

    # -- scalars ---------------------------------------------------------
    def scalar(self, x):
        if self.kind == "prime":
            if isinstance(x, str):
                x = Fraction(x)
            if isinstance(x, (Fraction, type(gmpy2.mpq()))):
                num, den = int(x.numerator), int(x.denominator)
                if den % self.p == 0:
                    raise ZeroDivisionError(f"{x} is not defined in GF({self.p})")
                return num * pow(den, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, str):
            return gmpy2.mpq(Fraction(x.strip()))
        return gmpy2.mpq(x)

    def inv(self, x):
        if self.kind == "prime":
            return pow(int(x), -1, self.p)
        return 1 / gmpy2.mpq(x)

    def to_str(self, x) -> str:
        if self.kind == "prime":
            return str(int(x))
        return str(gmpy2.mpq(x))

    # -- arrays ----------------------------------------------------------
    def norm(self, a):
        """Reduce an array to canonical representatives in place-free style."""
        if self.kind == "prime":
            return np.mod(a, self.p)
        return a

    def asarray(self, entries, shape=None) -> np.ndarray:
        if isinstance(entries, np.ndarray) and entries.dtype == self.dtype:
            out = np.mod(entries, self.p) if self.kind == "prime" else entries.copy()
        else:
            src = np.asarray(entries, dtype=object)
            out = np.empty(src.shape, dtype=self.dtype)
            flat_src, flat_out = src.reshape(-1), out.reshape(-1)
            for i, x in enumerate(flat_src):
                flat_out[i] = self.scalar(x)
        if shape is not None:
            out = out.reshape(shape)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            z = np.empty(shape, dtype=object)
            z.fill(gmpy2.mpq(0) if self.kind == "rational" else 0)
            return z
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        z = self.zeros((n, n))
        for i in range(n):
            z[i, i] = self.scalar(1)
        return z

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return self.norm(a @ b)

    def add(self, a, b):
        return self.norm(a + b)

    def sub(self, a, b):
        return self.norm(a - b)

    def neg(self, a):
        return self.norm(-a)

    def scale(self, c, a):
        return self.norm(self.scalar(c) * a)

    def is_zero(self, a) -> bool:
        return not np.any(a != 0)


class EchelonResult(NamedTuple):
    rank: int
    pivots: tuple
    reduced: np.ndarray
    transform: Optional[np.ndarray]


def rref(F: FieldSpec, m: np.ndarray, transform: bool = True) -> EchelonResult:
    """Reduced row-echelon form with the row operations recorded.

    ``transform @ m == reduced``; the transform is invertible.
    """
    a = F.asarray(m) if m.dtype != F.dtype else m.copy()
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    rows, cols = a.shape
    t = F.eye(rows) if transform else None
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
            if t is not None:
                t[[r, i]] = t[[i, r]]
        inv = F.inv(a[r, c])
        a[r] = F.norm(a[r] * inv)
        if t is not None:
            t[r] = F.norm(t[r] * inv)
        col = a[:, c].copy()
        col[r] = 0
        fix = np.flatnonzero(col != 0)
        if fix.size:
            a[fix] = F.norm(a[fix] - np.outer(col[fix], a[r]))
            if t is not None:
                t[fix] = F.norm(t[fix] - np.outer(col[fix], t[r]))
        pivots.append(c)
        r += 1
    return EchelonResult(r, tuple(pivots), a, t)


def rank(F: FieldSpec, m: np.ndarray) -> int:
    if m.size == 0:
        return 0
    return rref(F, m, transform=False).rank


def kernel(F: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Columns form a basis of the right null space of ``m``."""
    rows, cols = m.shape
    if rows == 0:
        return F.eye(cols)
    res = rref(F, m, transform=False)
    free = [c for c in range(cols) if c not in set(res.pivots)]
    k = F.zeros((cols, len(free)))
    red = res.reduced
    for j, f in enumerate(free):
        k[f, j] = F.scalar(1)
        for i, pc in enumerate(res.pivots):
            k[pc, j] = F.norm(-red[i, f])
    return k


def solve_right(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """Solve ``a @ X == b``; free variables are set to zero.  ``None`` if inconsistent."""
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    if a.shape[0] == 0:
        return F.zeros((n, b.shape[1]))
    aug = np.concatenate([F.asarray(a), F.asarray(b)], axis=1)
    res = rref(F, aug, transform=False)
    x = F.zeros((n, b.shape[1]))
    for i, pc in enumerate(res.pivots):
        if pc >= n:
            return None
        x[pc] = res.reduced[i, n:]
    return x


def int_det(m) -> int:
    """Exact determinant of a square integer matrix (Bareiss elimination)."""
    a = [[int(x) for x in row] for row in np.asarray(m, dtype=object).tolist()]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("int_det needs a square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# -- subspace helpers ------------------------------------------------------

def column_space(F: FieldSpec, m: np.ndarray) -> np.ndarray:
    """Basis (as columns, rref-canonical) of the column space of ``m``."""
    if m.shape[1] == 0:
        return F.zeros((m.shape[0], 0))
    res = rref(F, m.T, transform=False)
    return res.reduced[: res.rank].T.copy()


def independent_columns(F: FieldSpec, m: np.ndarray) -> list:
    """Indices of the first maximal independent set of columns."""
    if m.shape[1] == 0:
        return []
    return list(rref(F, m, transform=False).pivots)


def extend_to_basis(F: FieldSpec, sub: np.ndarray, n: int) -> list:
    """Indices of unit vectors completing the columns of ``sub`` to a basis of F^n."""
    m = np.concatenate([sub, F.eye(n)], axis=1)
    k = sub.shape[1]
    return [c - k for c in independent_columns(F, m) if c >= k]


def coordinates(F: FieldSpec, basis: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Coordinates of the columns of ``vecs`` in the (independent) columns of ``basis``."""
    x = solve_right(F, basis, vecs)
    if x is None:
        raise ValueError("vectors do not lie in the span of the basis")
    return x


def intersect(F: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Column basis of span(a) ∩ span(b)."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return F.zeros((a.shape[0], 0))
    k = kernel(F, np.concatenate([a, F.neg(b)], axis=1))
    return column_space(F, F.matmul(a, k[: a.shape[1]]))


def block_diag(F: FieldSpec, blocks: Sequence[np.ndarray]) -> np.ndarray:
    r = sum(b.shape[0] for b in blocks)
    c = sum(b.shape[1] for b in blocks)
    out = F.zeros((r, c))
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out
