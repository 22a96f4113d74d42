"""Finite-dimensional algebras given by structure constants, and their modules."""
from __future__ import annotations

import json
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from . import exactlin as el
from .exactlin import FieldSpec


def _contract(F: FieldSpec, a: np.ndarray, b: np.ndarray, table: np.ndarray) -> np.ndarray:
    if table.shape[0] == 0:
        return F.zeros(0)
    nz = np.flatnonzero(a != 0)
    if nz.size == 0:
        return F.zeros(table.shape[0])
    return F.norm(b @ np.tensordot(a[nz], table[nz], axes=(0, 0)))


class SCAlgebra:
    """Algebra with basis b_0..b_{n-1} and b_a * b_b = sum_c table[a, b, c] b_c."""

    def __init__(self, field: FieldSpec, table: np.ndarray, unit: np.ndarray,
                 labels: Optional[Sequence] = None, grading: Optional[Sequence[int]] = None):
        self.field = field
        self.table = table
        self.unit = unit
        n = table.shape[0]
        if table.shape != (n, n, n) or unit.shape != (n,):
            raise ValueError("inconsistent structure constant shapes")
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(n)]
        self.grading = list(grading) if grading is not None else [0] * n

    @property
    def dim(self) -> int:
        return self.table.shape[0]

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field.scalar(1)
        return v

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != (self.dim,) or b.shape != (self.dim,):
            raise ValueError("elements must belong to this algebra")
        return _contract(self.field, a, b, self.table)

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        """L with L @ x = a * x."""
        F = self.field
        if self.dim == 0:
            return F.zeros((0, 0))
        nz = np.flatnonzero(a != 0)
        if nz.size == 0:
            return F.zeros((self.dim, self.dim))
        return F.norm(np.tensordot(a[nz], self.table[nz], axes=(0, 0)).T.copy())

    def right_matrix(self, a: np.ndarray) -> np.ndarray:
        """R with R @ x = x * a."""
        F = self.field
        if self.dim == 0:
            return F.zeros((0, 0))
        nz = np.flatnonzero(a != 0)
        if nz.size == 0:
            return F.zeros((self.dim, self.dim))
        return F.norm(np.tensordot(a[nz], self.table[:, nz], axes=(0, 1)).T.copy())

    @cached_property
    def left_regular(self) -> List[np.ndarray]:
        return [self.table[i].T.copy() for i in range(self.dim)]

    @cached_property
    def right_regular(self) -> List[np.ndarray]:
        return [self.table[:, i].T.copy() for i in range(self.dim)]

    def is_associative(self) -> bool:
        F, T = self.field, self.table
        if self.dim == 0:
            return True
        # (b_a b_b) b_c versus b_a (b_b b_c)
        lhs = F.norm(np.tensordot(T, T, axes=(2, 0)))            # a b c d
        rhs = F.norm(np.tensordot(T, T, axes=(1, 2)))            # a d b c (first factor a, inner pair b c)
        rhs = np.transpose(rhs, (0, 2, 3, 1))
        return bool(np.array_equal(lhs, rhs))

    def is_unit(self, u: Optional[np.ndarray] = None) -> bool:
        u = self.unit if u is None else u
        for i in range(self.dim):
            b = self.basis_vector(i)
            if not (np.array_equal(self.multiply(u, b), b) and np.array_equal(self.multiply(b, u), b)):
                return False
        return True

    def is_idempotent(self, e: np.ndarray) -> bool:
        return bool(np.array_equal(self.multiply(e, e), e))

    def opposite(self) -> "SCAlgebra":
        return SCAlgebra(self.field, np.transpose(self.table, (1, 0, 2)).copy(), self.unit.copy(),
                         self.labels, self.grading)

    def span_products(self, left: Optional[np.ndarray], x: np.ndarray, right: Optional[np.ndarray]) -> np.ndarray:
        """Column basis of span{ l x r } with l, r ranging over the algebra (None = unit only)."""
        F = self.field
        cols = []
        ls = [self.basis_vector(i) for i in range(self.dim)] if left is None else [left]
        rs = [self.basis_vector(i) for i in range(self.dim)] if right is None else [right]
        for l in ls:
            lx = self.multiply(l, x)
            for r in rs:
                cols.append(self.multiply(lx, r))
        if not cols:
            return F.zeros((self.dim, 0))
        return el.column_space(F, np.stack(cols, axis=1))

    def corner_dim(self, e: np.ndarray, f: np.ndarray) -> int:
        """dim e A f."""
        F = self.field
        if self.dim == 0:
            return 0
        return el.rank(F, F.matmul(self.left_matrix(e), self.right_matrix(f)))

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        F = self.field
        triples = []
        for a, b, c in zip(*np.nonzero(self.table != 0)):
            triples.append([int(a), int(b), int(c), F.to_str(self.table[a, b, c])])
        return {
            "field": F.to_json(),
            "dim": self.dim,
            "basis": [str(l) for l in self.labels],
            "grading": [int(d) for d in self.grading],
            "unit": [F.to_str(x) for x in self.unit],
            "table": triples,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)

    @classmethod
    def from_json(cls, obj: dict, field: Optional[FieldSpec] = None) -> "SCAlgebra":
        F = field or FieldSpec.from_json(obj.get("field", {"kind": "rational"}))
        n = int(obj["dim"])
        t = F.zeros((n, n, n))
        for a, b, c, coeff in obj.get("table", []):
            t[a, b, c] = F.scalar(coeff)
        return cls(F, t, F.asarray(obj["unit"]) if n else F.zeros(0), obj.get("basis"), obj.get("grading"))

    def __repr__(self):
        return f"SCAlgebra(dim={self.dim}, field={self.field})"


def direct_product(algs: Sequence[SCAlgebra]) -> SCAlgebra:
    F = algs[0].field
    n = sum(a.dim for a in algs)
    t = F.zeros((n, n, n))
    unit = F.zeros(n)
    o = 0
    labels, grading = [], []
    for a in algs:
        d = a.dim
        t[o:o + d, o:o + d, o:o + d] = a.table
        unit[o:o + d] = a.unit
        labels += a.labels
        grading += a.grading
        o += d
    return SCAlgebra(F, t, unit, labels, grading)


def from_matrix_algebra(F: FieldSpec, mats: Sequence[np.ndarray], labels=None) -> SCAlgebra:
    """Structure constants of the algebra spanned by linearly independent square matrices
    (closed under product, containing the identity)."""
    n = len(mats)
    B = np.stack([m.reshape(-1) for m in mats], axis=1)
    t = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            t[i, j] = el.coordinates(F, B, F.matmul(mats[i], mats[j]).reshape(-1, 1))[:, 0]
    one = F.eye(mats[0].shape[0]).reshape(-1, 1)
    unit = el.coordinates(F, B, one)[:, 0]
    return SCAlgebra(F, t, unit, labels)


class SCModule:
    """Left module: ``action[i] @ m = b_i . m``."""

    def __init__(self, algebra: SCAlgebra, action: Sequence[np.ndarray]):
        self.algebra = algebra
        self.action = list(action)
        if len(self.action) != algebra.dim:
            raise ValueError("one action matrix per basis element")
        self.dim = self.action[0].shape[0] if self.action else 0

    def act(self, a: np.ndarray) -> np.ndarray:
        F = self.algebra.field
        out = F.zeros((self.dim, self.dim))
        for i in np.flatnonzero(a != 0):
            out = F.add(out, F.norm(a[i] * self.action[int(i)]))
        return out

    def is_module(self) -> bool:
        F, A = self.algebra.field, self.algebra
        if not np.array_equal(self.act(A.unit), F.eye(self.dim)):
            return False
        for i in range(A.dim):
            for j in range(A.dim):
                prod = self.act(A.table[i, j])
                if not np.array_equal(F.matmul(self.action[i], self.action[j]), prod):
                    return False
        return True

    @classmethod
    def regular(cls, A: SCAlgebra) -> "SCModule":
        return cls(A, A.left_regular)
