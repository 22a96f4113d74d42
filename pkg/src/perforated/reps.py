"""Modules over a path algebra as quiver representations.

A module assigns a vector space to every vertex and to every arrow ``a: u -> w``
a matrix of shape ``(dim M_w, dim M_u)``.  A path ``a1 a2 ... an`` acts by
``M_an @ ... @ M_a1``.  A homomorphism ``f: M -> N`` is a list of vertex
matrices ``f_v`` of shape ``(dim N_v, dim M_v)``; ``f.then(g)`` is the
composite "f, then g".

The indecomposable projective ``P(v)`` has the standard paths starting at
``v`` as basis, so ``Hom(P(v), M) = M_v``.
"""
from __future__ import annotations

import json
import re
import threading
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from .path_algebra import PathAlgebra


class Rep:
    def __init__(self, algebra: PathAlgebra, dims: Sequence[int], maps: Sequence[np.ndarray],
                 check: bool = True):
        self.algebra = algebra
        F = algebra.field
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.num_vertices:
            raise ValueError("one dimension per vertex expected")
        self.maps = []
        for a, m in enumerate(maps):
            shape = (self.dims[algebra.arrow_target(a)], self.dims[algebra.arrow_source(a)])
            m = F.asarray(m) if not (isinstance(m, np.ndarray) and m.dtype == F.dtype) else m
            if m.size == 0:
                m = F.zeros(shape)
            if m.shape != shape:
                raise ValueError(f"arrow {algebra.quiver.arrows[a].name}: expected shape {shape}, got {m.shape}")
            self.maps.append(m)
        if len(self.maps) != len(algebra.quiver.arrows):
            raise ValueError("one matrix per arrow expected")
        # (summand vertex, algebra basis index) per coordinate, for sums of indecomposable projectives
        self.proj_coords: Optional[List[List[Tuple[int, int]]]] = None
        self.generators: Optional[List[Tuple[int, np.ndarray]]] = None
        self._cache: dict = {}
        self._lock = threading.Lock()
        if check:
            self.check_relations()

    @property
    def field(self) -> el.FieldSpec:
        return self.algebra.field

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def offsets(self) -> List[int]:
        out, s = [], 0
        for d in self.dims:
            out.append(s)
            s += d
        return out

    def is_zero(self) -> bool:
        return self.dim == 0

    def __repr__(self):
        return f"Rep(dims={self.dims})"

    def path_matrix(self, word, start: Optional[int] = None) -> np.ndarray:
        F = self.field
        if not word:
            return F.eye(self.dims[start])
        m = self.maps[word[0]]
        for a in word[1:]:
            m = F.matmul(self.maps[a], m)
        return m

    def basis_action(self, i: int) -> np.ndarray:
        """Action of the i-th algebra basis path on the total space."""
        F, A = self.field, self.algebra
        b = A.basis[i]
        off = self.offsets()
        t = F.zeros((self.dim, self.dim))
        u, w = A.start(b), A.end(b)
        t[off[w]:off[w] + self.dims[w], off[u]:off[u] + self.dims[u]] = self.path_matrix(b[1], u)
        return t

    def element_action(self, vec: np.ndarray) -> np.ndarray:
        F = self.field
        t = F.zeros((self.dim, self.dim))
        for i in np.flatnonzero(vec != 0):
            t = F.add(t, F.norm(vec[i] * self.basis_action(int(i))))
        return t

    def check_relations(self):
        F, A = self.field, self.algebra
        for rel in A.relations:
            acc = None
            for c, path in rel:
                w = [A.quiver.arrow_index(a) for a in path]
                term = F.scale(c, self.path_matrix(w))
                acc = term if acc is None else F.add(acc, term)
            if acc is not None and not F.is_zero(acc):
                raise ValueError("module does not satisfy the relations")

    # -- caching (used by homological computations) ----------------------
    def cached(self, key, build):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = build()
        with self._lock:
            return self._cache.setdefault(key, val)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        A, F = self.algebra, self.field
        return {
            "dims": {v: d for v, d in zip(A.quiver.vertices, self.dims)},
            "arrows": {a.name: [[F.to_str(x) for x in row] for row in m.tolist()]
                       for a, m in zip(A.quiver.arrows, self.maps)},
        }

    @classmethod
    def from_json(cls, algebra: PathAlgebra, obj: dict) -> "Rep":
        q = algebra.quiver
        dims = [int(obj["dims"].get(v, 0)) for v in q.vertices]
        maps = []
        for a in q.arrows:
            shape = (dims[q.vertex_index(a.target)], dims[q.vertex_index(a.source)])
            m = obj.get("arrows", {}).get(a.name)
            maps.append(algebra.field.asarray(m).reshape(shape) if m is not None and shape[0] * shape[1]
                        else algebra.field.zeros(shape))
        return cls(algebra, dims, maps)


class RepMap:
    def __init__(self, source: Rep, target: Rep, mats: Sequence[np.ndarray], check: bool = False):
        if source.algebra is not target.algebra:
            raise ValueError("modules over different algebras")
        self.source, self.target = source, target
        F = source.field
        self.mats = []
        for v, m in enumerate(mats):
            shape = (target.dims[v], source.dims[v])
            if m.size == 0:
                m = F.zeros(shape)
            if m.shape != shape:
                raise ValueError(f"vertex {v}: expected {shape}, got {m.shape}")
            self.mats.append(m)
        if check and not self.is_homomorphism():
            raise ValueError("not a module homomorphism")

    @property
    def field(self):
        return self.source.field

    def is_homomorphism(self) -> bool:
        F, A = self.field, self.source.algebra
        for a in range(len(A.quiver.arrows)):
            u, w = A.arrow_source(a), A.arrow_target(a)
            lhs = F.matmul(self.mats[w], self.source.maps[a])
            rhs = F.matmul(self.target.maps[a], self.mats[u])
            if not np.array_equal(lhs, rhs):
                return False
        return True

    def then(self, g: "RepMap") -> "RepMap":
        if g.source is not self.target and g.source.dims != self.target.dims:
            raise ValueError("maps are not composable")
        F = self.field
        return RepMap(self.source, g.target, [F.matmul(b, a) for a, b in zip(self.mats, g.mats)])

    def __add__(self, other: "RepMap") -> "RepMap":
        F = self.field
        return RepMap(self.source, self.target, [F.add(a, b) for a, b in zip(self.mats, other.mats)])

    def __sub__(self, other: "RepMap") -> "RepMap":
        F = self.field
        return RepMap(self.source, self.target, [F.sub(a, b) for a, b in zip(self.mats, other.mats)])

    def scaled(self, c) -> "RepMap":
        F = self.field
        return RepMap(self.source, self.target, [F.scale(c, a) for a in self.mats])

    def is_zero(self) -> bool:
        return all(self.field.is_zero(m) for m in self.mats)

    def total(self) -> np.ndarray:
        return el.block_diag(self.field, self.mats)

    def flat(self) -> np.ndarray:
        """All vertex matrices flattened row-major into one vector."""
        F = self.field
        parts = [m.reshape(-1) for m in self.mats]
        return np.concatenate(parts) if parts else F.zeros(0)

    def rank(self) -> int:
        return sum(el.rank(self.field, m) for m in self.mats)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dims == self.target.dims and self.is_injective()

    @classmethod
    def identity(cls, m: Rep) -> "RepMap":
        return cls(m, m, [m.field.eye(d) for d in m.dims])

    @classmethod
    def zero(cls, m: Rep, n: Rep) -> "RepMap":
        return cls(m, n, [m.field.zeros((dn, dm)) for dm, dn in zip(m.dims, n.dims)])

    @classmethod
    def from_flat(cls, m: Rep, n: Rep, vec: np.ndarray) -> "RepMap":
        mats, pos = [], 0
        for dm, dn in zip(m.dims, n.dims):
            mats.append(vec[pos:pos + dm * dn].reshape(dn, dm).copy())
            pos += dm * dn
        return cls(m, n, mats)


# -- constructions --------------------------------------------------------

def zero_module(A: PathAlgebra) -> Rep:
    F = A.field
    return Rep(A, [0] * A.num_vertices, [F.zeros((0, 0)) for _ in A.quiver.arrows], check=False)


def simple(A: PathAlgebra, v: int) -> Rep:
    dims = [1 if u == v else 0 for u in range(A.num_vertices)]
    F = A.field
    maps = [F.zeros((dims[A.arrow_target(a)], dims[A.arrow_source(a)])) for a in range(len(A.quiver.arrows))]
    return Rep(A, dims, maps, check=False)


def projective(A: PathAlgebra, v: int) -> Rep:
    F = A.field
    paths = [A.paths_between(v, w) for w in range(A.num_vertices)]
    maps = []
    for a in range(len(A.quiver.arrows)):
        u, w = A.arrow_source(a), A.arrow_target(a)
        m = F.zeros((len(paths[w]), len(paths[u])))
        for j, p in enumerate(paths[u]):
            nf = A.normal_form(A.basis[p][1] + (a,), v)
            m[:, j] = nf[paths[w]]
        maps.append(m)
    P = Rep(A, [len(p) for p in paths], maps, check=False)
    P.proj_coords = [[(0, p) for p in paths[w]] for w in range(A.num_vertices)]
    gen = F.zeros(P.dim)
    gen[P.offsets()[v] + paths[v].index(A.index[(v, ())])] = F.scalar(1)
    P.generators = [(v, gen)]
    return P


def dual(m: Rep) -> Rep:
    """D(M) = Hom_k(M, k) over the opposite algebra."""
    A = m.algebra
    op = A.opposite()
    return Rep(op, m.dims, [x.T.copy() for x in m.maps], check=False)


def dual_map(f: RepMap, dsource: Rep = None, dtarget: Rep = None) -> RepMap:
    """D(f): D(target) -> D(source)."""
    dt = dtarget if dtarget is not None else dual(f.target)
    ds = dsource if dsource is not None else dual(f.source)
    return RepMap(dt, ds, [x.T.copy() for x in f.mats])


def injective(A: PathAlgebra, v: int) -> Rep:
    return dual(projective(A.opposite(), v))


def standard_module(A: PathAlgebra, kind: str, v) -> Rep:
    vi = A.quiver.vertex_index(v) if not isinstance(v, int) else v
    if not 0 <= vi < A.num_vertices:
        raise KeyError(f"unknown vertex {v!r}")
    return {"simple": simple, "projective": projective, "injective": injective}[kind](A, vi)


def direct_sum(mods: Sequence[Rep]) -> Tuple[Rep, List[RepMap], List[RepMap]]:
    """Direct sum with canonical injections and projections."""
    if not mods:
        raise ValueError("empty direct sum")
    A = mods[0].algebra
    F = A.field
    dims = [sum(m.dims[v] for m in mods) for v in range(A.num_vertices)]
    maps = [el.block_diag(F, [m.maps[a] for m in mods]) for a in range(len(A.quiver.arrows))]
    S = Rep(A, dims, maps, check=False)
    incs, projs = [], []
    start = [0] * A.num_vertices
    for m in mods:
        inc, proj = [], []
        for v in range(A.num_vertices):
            i = F.zeros((dims[v], m.dims[v]))
            for k in range(m.dims[v]):
                i[start[v] + k, k] = F.scalar(1)
            inc.append(i)
            proj.append(i.T.copy())
            start[v] += m.dims[v]
        incs.append(RepMap(m, S, inc))
        projs.append(RepMap(S, m, proj))
    if all(m.proj_coords is not None and m.generators is not None for m in mods):
        shifted, base = [], 0
        for m in mods:
            shifted.append([[(g + base, p) for g, p in row] for row in m.proj_coords])
            base += len(m.generators)
        S.proj_coords = [sum((sh[v] for sh in shifted), []) for v in range(A.num_vertices)]
    if all(m.generators is not None for m in mods):
        gens = []
        for m, i in zip(mods, incs):
            T = i.total()
            gens.extend((v, F.matmul(T, g[:, None])[:, 0]) for v, g in m.generators)
        S.generators = gens
    return S, incs, projs


def sum_maps(maps: Sequence[RepMap], target: Rep, source: Rep) -> RepMap:
    """The map source = ⊕ sources -> target given by summing components."""
    F = target.field
    mats = [np.concatenate([f.mats[v] for f in maps], axis=1) if maps else F.zeros((target.dims[v], 0))
            for v in range(len(target.dims))]
    return RepMap(source, target, mats)


def stack_maps(maps: Sequence[RepMap], source: Rep, target: Rep) -> RepMap:
    """The map source -> ⊕ targets with the given components."""
    F = source.field
    mats = [np.concatenate([f.mats[v] for f in maps], axis=0) if maps else F.zeros((0, source.dims[v]))
            for v in range(len(source.dims))]
    return RepMap(source, target, mats)


def _vertex_blocks(m: Rep, vec: np.ndarray) -> List[np.ndarray]:
    off = m.offsets()
    return [vec[off[v]:off[v] + m.dims[v]] for v in range(len(m.dims))]


def submodule(m: Rep, spaces: Sequence[np.ndarray]) -> Tuple[Rep, RepMap]:
    """Submodule with per-vertex column bases ``spaces`` (must be arrow-stable)."""
    F, A = m.field, m.algebra
    maps = []
    for a in range(len(A.quiver.arrows)):
        u, w = A.arrow_source(a), A.arrow_target(a)
        img = F.matmul(m.maps[a], spaces[u])
        if spaces[w].shape[1] == 0:
            if not F.is_zero(img):
                raise ValueError("subspace is not a submodule")
            maps.append(F.zeros((0, spaces[u].shape[1])))
        else:
            maps.append(el.coordinates(F, spaces[w], img))
    sub = Rep(A, [s.shape[1] for s in spaces], maps, check=False)
    return sub, RepMap(sub, m, [s.copy() for s in spaces])


def quotient(m: Rep, spaces: Sequence[np.ndarray]) -> Tuple[Rep, RepMap]:
    """Quotient by the submodule with per-vertex column bases ``spaces``."""
    F, A = m.field, m.algebra
    comp, projs = [], []
    for v, s in enumerate(spaces):
        n = m.dims[v]
        idx = el.extend_to_basis(F, s, n)
        c = F.eye(n)[:, idx] if idx else F.zeros((n, 0))
        full = np.concatenate([s, c], axis=1)
        inv = el.solve_right(F, full, F.eye(n)) if n else F.zeros((0, 0))
        comp.append(c)
        projs.append(inv[s.shape[1]:] if n else F.zeros((0, 0)))
    maps = []
    for a in range(len(A.quiver.arrows)):
        u, w = A.arrow_source(a), A.arrow_target(a)
        maps.append(F.matmul(projs[w], F.matmul(m.maps[a], comp[u])))
    q = Rep(A, [c.shape[1] for c in comp], maps, check=False)
    return q, RepMap(m, q, projs)


def generated_submodule(m: Rep, gens: Sequence[Tuple[int, np.ndarray]]) -> Tuple[Rep, RepMap]:
    """Submodule generated by vectors ``(vertex, vector in M_vertex)``."""
    F, A = m.field, m.algebra
    cols: List[List[np.ndarray]] = [[] for _ in range(A.num_vertices)]
    for v, x in gens:
        for b in A.basis:
            if b[0] != v:
                continue
            cols[A.end(b)].append(F.matmul(m.path_matrix(b[1], v), x.reshape(-1, 1)))
    spaces = []
    for v in range(A.num_vertices):
        if cols[v]:
            spaces.append(el.column_space(F, np.concatenate(cols[v], axis=1)))
        else:
            spaces.append(F.zeros((m.dims[v], 0)))
    return submodule(m, spaces)


def kernel(f: RepMap) -> Tuple[Rep, RepMap]:
    F = f.field
    return submodule(f.source, [el.kernel(F, x) if x.shape[1] else F.zeros((0, 0)) for x in f.mats])


def image(f: RepMap) -> Tuple[Rep, RepMap]:
    F = f.field
    return submodule(f.target, [el.column_space(F, x) for x in f.mats])


def cokernel(f: RepMap) -> Tuple[Rep, RepMap]:
    F = f.field
    return quotient(f.target, [el.column_space(F, x) for x in f.mats])


def radical(m: Rep) -> Tuple[Rep, RepMap]:
    F, A = m.field, m.algebra
    spaces = []
    for w in range(A.num_vertices):
        ins = [m.maps[a] for a in range(len(A.quiver.arrows)) if A.arrow_target(a) == w]
        spaces.append(el.column_space(F, np.concatenate(ins, axis=1)) if ins else F.zeros((m.dims[w], 0)))
    return submodule(m, spaces)


def socle(m: Rep) -> Tuple[Rep, RepMap]:
    F, A = m.field, m.algebra
    spaces = []
    for v in range(A.num_vertices):
        outs = [m.maps[a] for a in range(len(A.quiver.arrows)) if A.arrow_source(a) == v]
        if outs and m.dims[v]:
            spaces.append(el.kernel(F, np.concatenate(outs, axis=0)))
        else:
            spaces.append(F.eye(m.dims[v]))
    return submodule(m, spaces)


def top_radical_socle(m: Rep):
    rad, inc = radical(m)
    top, _ = quotient(m, [inc.mats[v] for v in range(len(m.dims))])
    return top, (rad, inc), socle(m)


def hom_from_projective(P: Rep, n: Rep, images: Sequence[np.ndarray]) -> RepMap:
    """The map from a sum of indecomposable projectives sending generator g to ``images[g]``."""
    F, A = n.field, n.algebra
    mats = []
    for w in range(A.num_vertices):
        cols = []
        for j, (g, p) in enumerate(P.proj_coords[w]):
            b = A.basis[p]
            cols.append(F.matmul(n.path_matrix(b[1], b[0]), images[g].reshape(-1, 1)))
        mats.append(np.concatenate(cols, axis=1) if cols else F.zeros((n.dims[w], 0)))
    return RepMap(P, n, mats)


def projective_sum(A: PathAlgebra, vertices: Sequence[int]) -> Rep:
    """⊕ P(v) with proj_coords labelled by summand position."""
    if not vertices:
        P = zero_module(A)
        P.proj_coords = [[] for _ in range(A.num_vertices)]
        P.generators = []
        return P
    S, _, _ = direct_sum([projective(A, v) for v in vertices])
    return S


def projective_cover(m: Rep) -> Tuple[Rep, RepMap]:
    """Minimal projective cover; ``P.generators`` map onto a basis of top(m)."""
    if m.is_zero():
        raise ValueError("zero module has no projective cover")
    return _cover(m)


def _cover(m: Rep) -> Tuple[Rep, RepMap]:
    F, A = m.field, m.algebra
    _, inc = radical(m)
    verts, images = [], []
    for v in range(A.num_vertices):
        for k in el.extend_to_basis(F, inc.mats[v], m.dims[v]):
            x = F.zeros(m.dims[v])
            x[k] = F.scalar(1)
            verts.append(v)
            images.append(x)
    P = projective_sum(A, verts)
    if not verts:
        return P, RepMap.zero(P, m)
    return P, hom_from_projective(P, m, images)


def generator_images(f: RepMap) -> List[np.ndarray]:
    """Images of the generators of a projective-sum source."""
    F = f.field
    out = []
    for v, g in f.source.generators:
        gv = _vertex_blocks(f.source, g)[v]
        out.append(F.matmul(f.mats[v], gv.reshape(-1, 1))[:, 0])
    return out


def syzygy(n: int, m: Rep) -> Rep:
    for _ in range(n):
        if m.is_zero():
            return m
        P, pi = _cover(m)
        m, _ = kernel(pi)
    return m


def injective_hull(m: Rep) -> Tuple[Rep, RepMap]:
    """Minimal injective envelope ``m -> I``."""
    dm = dual(m)
    P, pi = _cover(dm)
    I = dual(P)
    return I, RepMap(m, I, [x.T.copy() for x in pi.mats])


def cosyzygy(n: int, m: Rep) -> Rep:
    for _ in range(n):
        if m.is_zero():
            return m
        _, iota = injective_hull(m)
        m, _ = cokernel(iota)
    return m


def is_projective(m: Rep) -> bool:
    if m.is_zero():
        return True
    P, _ = _cover(m)
    return P.dim == m.dim


def is_injective_module(m: Rep) -> bool:
    return is_projective(dual(m))


def _reverse_element(A: PathAlgebra, vec: np.ndarray) -> np.ndarray:
    """The element of A^op obtained by reversing every path."""
    F, op = A.field, A.opposite()
    out = F.zeros(op.dim)
    for i in np.flatnonzero(vec != 0):
        v, w = A.basis[int(i)]
        start = A.end((v, w))
        out = F.add(out, F.norm(vec[i] * op.normal_form(tuple(reversed(w)), start)))
    return out


def transpose(m: Rep) -> Rep:
    """Auslander-Bridger transpose, a module over the opposite algebra."""
    A = m.algebra
    op = A.opposite()
    F = A.field
    if m.is_zero():
        return zero_module(op)
    P0, pi = _cover(m)
    K, kin = kernel(pi)
    if K.is_zero():
        return zero_module(op)
    P1, pi1 = _cover(K)
    d1 = pi1.then(kin)
    v0 = [v for v, _ in P0.generators]
    v1 = [v for v, _ in P1.generators]
    Q0 = projective_sum(op, v0)
    Q1 = projective_sum(op, v1)
    # generator i of Q0 goes to sum_j rev(x_ij) in summand j of Q1
    images = [F.zeros(Q1.dims[v]) for v in v0]
    off1 = [0] * A.num_vertices
    for j, img in enumerate(generator_images(d1)):
        u = v1[j]
        coords = P0.proj_coords[u]
        for c, (g, p) in enumerate(coords):
            if img[c] == 0:
                continue
            x = F.zeros(A.dim)
            x[p] = img[c]
            rev = _reverse_element(A, x)
            # rev is an op-path from u to v0[g]: place it in summand j of Q1 at vertex v0[g]
            w = v0[g]
            for cc, (gg, pp) in enumerate(Q1.proj_coords[w]):
                if gg == j and rev[pp] != 0:
                    images[g][cc] = F.norm(images[g][cc] + rev[pp])
    dual_map_ = hom_from_projective(Q0, Q1, images)
    T, _ = cokernel(dual_map_)
    return T


def ar_translate(m: Rep) -> Rep:
    return dual(transpose(m))


# -- Hom spaces -----------------------------------------------------------

def _kron(F, a, b):
    if a.size == 0 or b.size == 0:
        return F.zeros((a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]))
    return F.norm(np.kron(a, b))


def hom_equations(m: Rep, n: Rep) -> np.ndarray:
    """Linear system whose kernel is Hom(m, n) in row-major flattened coordinates."""
    F, A = m.field, m.algebra
    sizes = [m.dims[v] * n.dims[v] for v in range(A.num_vertices)]
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    blocks = []
    for a in range(len(A.quiver.arrows)):
        u, w = A.arrow_source(a), A.arrow_target(a)
        rows = n.dims[w] * m.dims[u]
        if rows == 0:
            continue
        eq = F.zeros((rows, int(offs[-1])))
        # f_w @ M_a - N_a @ f_u = 0
        eq[:, offs[w]:offs[w + 1]] = F.add(eq[:, offs[w]:offs[w + 1]], _kron(F, F.eye(n.dims[w]), m.maps[a].T))
        eq[:, offs[u]:offs[u + 1]] = F.sub(eq[:, offs[u]:offs[u + 1]], _kron(F, n.maps[a], F.eye(m.dims[u])))
        blocks.append(eq)
    if not blocks:
        return F.zeros((0, int(offs[-1])))
    return np.concatenate(blocks, axis=0)


class HomSpace:
    """Basis of Hom(m, n) with coordinate extraction."""

    def __init__(self, m: Rep, n: Rep):
        if m.algebra is not n.algebra:
            raise ValueError("modules over different algebras")
        self.source, self.target = m, n
        F = m.field
        eq = hom_equations(m, n)
        self.matrix = el.kernel(F, eq)   # columns are flattened maps
        self.basis = [RepMap.from_flat(m, n, self.matrix[:, j]) for j in range(self.matrix.shape[1])]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, f: RepMap) -> np.ndarray:
        return el.coordinates(self.source.field, self.matrix, f.flat().reshape(-1, 1))[:, 0]

    def combine(self, coeffs) -> RepMap:
        F = self.source.field
        vec = F.matmul(self.matrix, F.asarray(coeffs).reshape(-1, 1))[:, 0]
        return RepMap.from_flat(self.source, self.target, vec)


def hom_space(m: Rep, n: Rep) -> HomSpace:
    return HomSpace(m, n)


def hom_basis(m: Rep, n: Rep) -> List[RepMap]:
    return HomSpace(m, n).basis


def hom_dim(m: Rep, n: Rep) -> int:
    eq = hom_equations(m, n)
    return eq.shape[1] - el.rank(m.field, eq)


def projectively_trivial_maps(m: Rep, n: Rep) -> np.ndarray:
    """Column basis (flattened) of maps m -> n factoring through a projective."""
    F = m.field
    if n.is_zero() or m.is_zero():
        return F.zeros((sum(a * b for a, b in zip(m.dims, n.dims)), 0))
    P, pi = _cover(n)
    cols = [f.then(pi).flat().reshape(-1, 1) for f in hom_basis(m, P)]
    if not cols:
        return F.zeros((sum(a * b for a, b in zip(m.dims, n.dims)), 0))
    return el.column_space(F, np.concatenate(cols, axis=1))


def stable_hom_dim(m: Rep, n: Rep) -> int:
    """dim of Hom(m, n) modulo maps factoring through projectives.

    Any map through a projective factors through the projective cover of n.
    """
    if m.algebra is not n.algebra:
        raise ValueError("modules over different algebras")
    return hom_dim(m, n) - projectively_trivial_maps(m, n).shape[1]


def find_isomorphism(m: Rep, n: Rep, tries: int = 64, seed: int = 0) -> Optional[RepMap]:
    """Search for an isomorphism m -> n among basis maps and seeded random combinations."""
    if m.dims != n.dims:
        return None
    if m.dim == 0:
        return RepMap.zero(m, n)
    H = HomSpace(m, n)
    for f in H.basis:
        if f.is_iso():
            return f
    if H.dim == 0:
        return None
    F = m.field
    rng = np.random.default_rng(seed)
    bound = F.p if F.kind == "prime" else 7
    for _ in range(tries):
        f = H.combine(rng.integers(0, bound, H.dim).tolist())
        if f.is_iso():
            return f
    return None


def is_isomorphic(m: Rep, n: Rep) -> bool:
    return find_isomorphism(m, n) is not None


# -- module expressions ---------------------------------------------------

class ExpressionError(ValueError):
    pass


def _split_args(s: str) -> List[str]:
    out, depth, cur, in_str = [], 0, "", False
    for ch in s:
        if ch == '"':
            in_str = not in_str
        if not in_str:
            if ch in "([{":
                depth += 1
            elif ch in ")]}":
                depth -= 1
            elif ch == "," and depth == 0:
                out.append(cur.strip())
                cur = ""
                continue
        cur += ch
    if cur.strip():
        out.append(cur.strip())
    return out


def parse_module(A: PathAlgebra, expr: str) -> Rep:
    """Evaluate a module expression such as ``sum(omega(2,S(3)), P(1))``."""
    expr = expr.strip()
    if expr.startswith("{"):
        try:
            return Rep.from_json(A, json.loads(expr))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ExpressionError(f"bad module literal: {exc}") from None
    mt = re.fullmatch(r"([A-Za-z_]+)\s*\((.*)\)", expr, flags=re.S)
    if not mt:
        raise ExpressionError(f"cannot parse module expression {expr!r}")
    head, args = mt.group(1).lower(), _split_args(mt.group(2))

    def vertex(s):
        try:
            return A.quiver.vertex_index(s.strip().strip('"'))
        except KeyError as exc:
            raise ExpressionError(str(exc)) from None

    def count(s):
        try:
            n = int(s)
        except ValueError:
            raise ExpressionError(f"expected a natural number, got {s!r}") from None
        if n < 0:
            raise ExpressionError("negative count")
        return n

    kinds = {"s": "simple", "p": "projective", "i": "injective"}
    if head in kinds and len(args) == 1:
        return standard_module(A, kinds[head], vertex(args[0]))
    if head == "sum" and args:
        return direct_sum([parse_module(A, a) for a in args])[0]
    if head == "omega" and len(args) == 2:
        return syzygy(count(args[0]), parse_module(A, args[1]))
    if head == "cosyzygy" and len(args) == 2:
        return cosyzygy(count(args[0]), parse_module(A, args[1]))
    if head == "quotient" and len(args) == 2:
        m = parse_module(A, args[0])
        v = vertex(args[1])
        _, sinc = socle(m)
        spaces = [sinc.mats[u] if u == v else m.field.zeros((m.dims[u], 0)) for u in range(A.num_vertices)]
        return quotient(m, spaces)[0]
    if head in ("dual", "transpose") and len(args) == 1:
        # the argument is read over the opposite algebra, so the result lives over A
        inner = parse_module(A.opposite(), args[0])
        return dual(inner) if head == "dual" else transpose(inner)
    if head == "dtr" and len(args) == 1:
        return ar_translate(parse_module(A, args[0]))
    raise ExpressionError(f"unknown constructor or arity: {head}({', '.join(args)})")
