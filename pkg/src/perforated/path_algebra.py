"""Finite-dimensional quotients kQ/I of path algebras.

Paths compose left to right: ``ab`` means "first a, then b", so ``ab`` is
non-zero only when the target of ``a`` is the source of ``b``.  A basis of
normal-form paths is obtained by noncommutative Buchberger completion of the
relations under the length-then-lexicographic order (arrows compared by
declaration order), with overlaps processed up to ``max_len``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .exactlin import FieldSpec

Word = Tuple[int, ...]


class NotProvenFiniteDimensional(ValueError):
    def __init__(self, max_len: int, path: str = ""):
        self.max_len = max_len
        super().__init__(
            f"irreducible path {path} of length {max_len} survives; "
            f"finite-dimensionality not certified (raise max_path_length?)"
        )


class RelationError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("vertex labels must be unique")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("arrow names must be unique")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise ValueError(f"arrow {a.name} has an undeclared endpoint")

    @classmethod
    def build(cls, vertices: Sequence[str], arrows: Iterable[Tuple[str, str, str]]):
        return cls(tuple(str(v) for v in vertices),
                   tuple(Arrow(str(n), str(s), str(t)) for n, s, t in arrows))

    def vertex_index(self, v) -> int:
        try:
            return self.vertices.index(str(v))
        except ValueError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def arrow_index(self, name: str) -> int:
        for i, a in enumerate(self.arrows):
            if a.name == name:
                return i
        raise KeyError(f"unknown arrow {name!r}")

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.name, a.target, a.source) for a in self.arrows))


# A relation is a list of (coefficient, path) with path a sequence of arrow names.
Relation = List[Tuple[object, Sequence[str]]]


def _order_key(w: Word):
    return (len(w), w)


class PathAlgebra:
    """A = kQ/I with a normal-form path basis.

    Basis elements are pairs ``(start_vertex_index, word)``; the trivial path
    at vertex v is ``(v, ())``.
    """

    def __init__(self, quiver: Quiver, relations: Sequence[Relation], field: FieldSpec,
                 max_len: Optional[int] = None):
        self.quiver = quiver
        self.field = field
        self.max_len = max_len if max_len is not None else 2 * len(quiver.arrows) + 2
        self.relations = [[(c, tuple(p)) for c, p in r] for r in relations]
        self._src = [quiver.vertex_index(a.source) for a in quiver.arrows]
        self._tgt = [quiver.vertex_index(a.target) for a in quiver.arrows]
        self._rules = self._complete([self._relation_element(r) for r in self.relations])
        self.basis: List[Tuple[int, Word]] = self._enumerate_basis()
        self.index: Dict[Tuple[int, Word], int] = {b: i for i, b in enumerate(self.basis)}
        self._opposite: Optional[PathAlgebra] = None

    # -- scalar helpers --------------------------------------------------
    def _red(self, x):
        return x % self.field.p if self.field.kind == "prime" else x

    # -- relations and completion ---------------------------------------
    def _relation_element(self, rel) -> Dict[Word, object]:
        F = self.field
        elem: Dict[Word, object] = {}
        ends = set()
        for coeff, path in rel:
            if len(path) < 2:
                raise RelationError(f"relation path {list(path)} has length < 2 (not admissible)")
            w = tuple(self.quiver.arrow_index(a) for a in path)
            for x, y in zip(w, w[1:]):
                if self._tgt[x] != self._src[y]:
                    raise RelationError(f"path {list(path)} is not composable")
            ends.add((self._src[w[0]], self._tgt[w[-1]]))
            c = F.scalar(coeff)
            elem[w] = self._red(elem.get(w, 0) + c)
        if len(ends) > 1:
            raise RelationError("paths in one relation must share source and target")
        return {w: c for w, c in elem.items() if c != 0}

    def _monic(self, f: Dict[Word, object]) -> Dict[Word, object]:
        lead = max(f, key=_order_key)
        inv = self.field.inv(f[lead])
        return {w: self._red(c * inv) for w, c in f.items()}

    def _reduce(self, f: Dict[Word, object], rules) -> Dict[Word, object]:
        f = dict(f)
        out: Dict[Word, object] = {}
        while f:
            w = max(f, key=_order_key)
            c = f.pop(w)
            for lead, tail in rules:
                k = len(lead)
                pos = next((i for i in range(len(w) - k + 1) if w[i:i + k] == lead), None)
                if pos is None:
                    continue
                pre, post = w[:pos], w[pos + k:]
                for tw, tc in tail.items():
                    nw = pre + tw + post
                    v = self._red(f.get(nw, 0) - c * tc)
                    if v == 0:
                        f.pop(nw, None)
                    else:
                        f[nw] = v
                break
            else:
                out[w] = c
        return out

    def _complete(self, gens: List[Dict[Word, object]]):
        """Buchberger completion; rules are (lead word, tail) with element = lead - tail."""
        basis: List[Dict[Word, object]] = []

        def as_rules(elems):
            rules = []
            for g in elems:
                lead = max(g, key=_order_key)
                rules.append((lead, {w: self._red(-c) for w, c in g.items() if w != lead}))
            rules.sort(key=lambda r: _order_key(r[0]))
            return rules

        def interreduce(elems):
            elems = [self._monic(g) for g in elems if g]
            changed = True
            while changed:
                changed = False
                for i, g in enumerate(elems):
                    others = elems[:i] + elems[i + 1:]
                    r = self._reduce(g, as_rules(others))
                    if r != g:
                        changed = True
                        elems = others + ([self._monic(r)] if r else [])
                        break
            return sorted(elems, key=lambda g: _order_key(max(g, key=_order_key)))

        basis = interreduce([g for g in gens if g])
        done = set()
        while True:
            rules = as_rules(basis)
            new = None
            for (l1, t1) in rules:
                for (l2, t2) in rules:
                    for k in range(1, min(len(l1), len(l2))):
                        if l1[-k:] != l2[:k] or (l1, l2, k) in done:
                            continue
                        done.add((l1, l2, k))
                        if len(l1) + len(l2) - k > self.max_len:
                            continue
                        v1, v2 = l1[:-k], l2[k:]
                        # (l1 - t1) v2 - v1 (l2 - t2) = v1 t2 - t1 v2
                        s: Dict[Word, object] = {}
                        for w, c in t2.items():
                            s[v1 + w] = self._red(s.get(v1 + w, 0) + c)
                        for w, c in t1.items():
                            s[w + v2] = self._red(s.get(w + v2, 0) - c)
                        s = {w: c for w, c in s.items() if c != 0}
                        r = self._reduce(s, rules)
                        if r:
                            new = r
                            break
                    if new:
                        break
                if new:
                    break
            if new is None:
                return rules
            basis = interreduce(basis + [new])

    def _enumerate_basis(self) -> List[Tuple[int, Word]]:
        leads = [l for l, _ in self._rules]

        def irreducible(w):
            return not any(w[i:i + len(l)] == l for l in leads for i in range(len(w) - len(l) + 1))

        out = [(v, ()) for v in range(len(self.quiver.vertices))]
        frontier = [(self._src[a], (a,)) for a in range(len(self.quiver.arrows))]
        frontier = [b for b in frontier if irreducible(b[1])]
        while frontier:
            out.extend(frontier)
            nxt = []
            for v, w in frontier:
                if len(w) >= self.max_len:
                    raise NotProvenFiniteDimensional(self.max_len, self.path_name(w))
                for a in range(len(self.quiver.arrows)):
                    if self._src[a] == self._tgt[w[-1]] and irreducible(w + (a,)):
                        nxt.append((v, w + (a,)))
            frontier = nxt
        out.sort(key=lambda b: (len(b[1]), b[0], b[1]))
        return out

    # -- basic accessors -------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def num_vertices(self) -> int:
        return len(self.quiver.vertices)

    def start(self, b) -> int:
        return b[0]

    def end(self, b) -> int:
        return b[0] if not b[1] else self._tgt[b[1][-1]]

    def arrow_source(self, a: int) -> int:
        return self._src[a]

    def arrow_target(self, a: int) -> int:
        return self._tgt[a]

    def path_name(self, w: Word) -> str:
        return "*".join(self.quiver.arrows[a].name for a in w) if w else "e"

    def basis_label(self, i: int) -> str:
        v, w = self.basis[i]
        return self.path_name(w) if w else f"e{self.quiver.vertices[v]}"

    def paths_between(self, u: int, v: int) -> List[int]:
        """Indices of basis paths from u to v."""
        return [i for i, b in enumerate(self.basis) if b[0] == u and self.end(b) == v]

    # -- arithmetic ------------------------------------------------------
    def normal_form(self, word: Word, start: Optional[int] = None) -> np.ndarray:
        """Coordinate vector of a path (word of arrow indices)."""
        F = self.field
        vec = F.zeros(self.dim)
        if not word:
            vec[self.index[(start, ())]] = F.scalar(1)
            return vec
        for x, y in zip(word, word[1:]):
            if self._tgt[x] != self._src[y]:
                return vec
        for w, c in self._reduce({tuple(word): F.scalar(1)}, self._rules).items():
            vec[self.index[(self._src[w[0]], w)]] = F.norm(vec[self.index[(self._src[w[0]], w)]] + c)
        return vec

    def _concat(self, b1, b2):
        if self.end(b1) != b2[0]:
            return None
        return b1[1] + b2[1], b1[0]

    @cached_property
    def mult_table(self) -> np.ndarray:
        """T[i, j] = coordinates of basis_i * basis_j."""
        F = self.field
        n = self.dim
        t = F.zeros((n, n, n))
        for i, b1 in enumerate(self.basis):
            for j, b2 in enumerate(self.basis):
                c = self._concat(b1, b2)
                if c is not None:
                    t[i, j] = self.normal_form(c[0], c[1])
        return t

    def element(self, terms: Dict[str, object]) -> np.ndarray:
        """Element from ``{"a1*b2": coeff, "e1": coeff}``."""
        F = self.field
        vec = F.zeros(self.dim)
        for name, c in terms.items():
            if name.startswith("e") and name[1:] in self.quiver.vertices and name not in {a.name for a in self.quiver.arrows}:
                v = self.quiver.vertex_index(name[1:])
                vec = F.add(vec, F.scale(c, self.normal_form((), v)))
            else:
                w = tuple(self.quiver.arrow_index(a) for a in name.split("*"))
                vec = F.add(vec, F.scale(c, self.normal_form(w)))
        return vec

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != (self.dim,) or b.shape != (self.dim,):
            raise ValueError("elements must belong to this algebra")
        F = self.field
        return F.norm(np.einsum("i,j,ijk->k", a, b, self.mult_table)) if F.dtype is not object \
            else F.norm(np.tensordot(np.tensordot(a, self.mult_table, axes=(0, 0)), b, axes=(0, 0)))

    def idempotent(self, v: int) -> np.ndarray:
        return self.normal_form((), v)

    def one(self) -> np.ndarray:
        F = self.field
        out = F.zeros(self.dim)
        for v in range(self.num_vertices):
            out = F.add(out, self.idempotent(v))
        return out

    def opposite(self) -> "PathAlgebra":
        if self._opposite is None:
            rels = [[(c, tuple(reversed(p))) for c, p in r] for r in self.relations]
            op = PathAlgebra(self.quiver.opposite(), rels, self.field, self.max_len)
            op._opposite = self
            self._opposite = op
        return self._opposite

    def is_self_opposite(self) -> bool:
        return self._opposite is self

    def __repr__(self):
        return f"PathAlgebra(vertices={list(self.quiver.vertices)}, arrows={len(self.quiver.arrows)}, dim={self.dim}, field={self.field})"


def build_algebra(quiver: Quiver, relations: Sequence[Relation], field: FieldSpec,
                  max_len: Optional[int] = None) -> PathAlgebra:
    return PathAlgebra(quiver, relations, field, max_len)


def algebra_from_json(obj: dict) -> PathAlgebra:
    field = FieldSpec.from_json(obj.get("field", {"kind": "rational"}))
    q = obj["quiver"]
    quiver = Quiver.build(q["vertices"], [(a["name"], a["from"], a["to"]) for a in q.get("arrows", [])])
    rels = [[(t["coeff"], t["path"]) for t in rel] for rel in obj.get("relations", [])]
    return PathAlgebra(quiver, rels, field, obj.get("max_path_length"))


def load_algebra(path) -> PathAlgebra:
    with open(Path(path), encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))


def algebra_to_json(a: PathAlgebra) -> dict:
    return {
        "field": a.field.to_json(),
        "quiver": {
            "vertices": list(a.quiver.vertices),
            "arrows": [{"name": x.name, "from": x.source, "to": x.target} for x in a.quiver.arrows],
        },
        "relations": [[{"coeff": a.field.to_str(a.field.scalar(c)), "path": list(p)} for c, p in r]
                      for r in a.relations],
        "max_path_length": a.max_len,
    }
