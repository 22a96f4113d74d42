"""Projective resolutions, Ext groups and Yoneda products.

An element of Ext^i(M, N) is stored as a cocycle on the minimal projective
resolution P(M): the images in N of the generators of P_i.  Products are
computed by lifting a cocycle to a chain map and composing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from . import exactlin as el
from . import reps as R
from .path_algebra import PathAlgebra
from .reps import Rep, RepMap


class LiftError(RuntimeError):
    """A lifting problem through a projective had no solution (internal error)."""


@dataclass(frozen=True)
class Bounded:
    """An exact value, or a lower bound when the computation was capped."""
    value: int
    exact: bool = True

    def __str__(self):
        return str(self.value) if self.exact else f"≥{self.value}"

    def to_json(self):
        return self.value if self.exact else f"≥{self.value}"


class ProjResolution:
    """Minimal projective resolution, extended lazily."""

    def __init__(self, module: Rep):
        self.module = module
        self.terms: List[Rep] = []
        self.diffs: List[Optional[RepMap]] = [None]   # diffs[i]: P_i -> P_{i-1}
        self.aug: Optional[RepMap] = None
        self._kernel = (module, None)   # next module to cover, with its inclusion

    @property
    def length(self) -> int:
        return len(self.terms) - 1

    def extend(self, n: int) -> "ProjResolution":
        A = self.module.algebra
        while len(self.terms) <= n:
            K, inc = self._kernel
            if K.is_zero():
                P = R.projective_sum(A, [])
                pi = RepMap.zero(P, K)
            else:
                P, pi = R.projective_cover(K)
            if inc is None:
                self.aug = pi
            else:
                self.diffs.append(pi.then(inc))
            self.terms.append(P)
            self._kernel = R.kernel(pi)
        return self

    def gen_vertices(self, i: int) -> List[int]:
        self.extend(i)
        return [v for v, _ in self.terms[i].generators]

    def is_finite_at(self, i: int) -> bool:
        """True when P_i = 0."""
        self.extend(i)
        return self.terms[i].is_zero()


def min_proj_resolution(m: Rep, n: int) -> ProjResolution:
    res = m.cached("resolution", lambda: ProjResolution(m))
    return res.extend(n)


def projective_dimension(m: Rep, bound: int) -> Bounded:
    res = min_proj_resolution(m, 0)
    for i in range(bound + 1):
        if res.is_finite_at(i):
            return Bounded(max(i - 1, 0))
    return Bounded(bound, exact=False)


# -- cocycle coordinates ---------------------------------------------------

def cochain_dim(P: Rep, n: Rep) -> int:
    return sum(n.dims[v] for v, _ in P.generators)


def _cochain_offsets(P: Rep, n: Rep) -> List[int]:
    out, s = [], 0
    for v, _ in P.generators:
        out.append(s)
        s += n.dims[v]
    return out


def eval_matrix(P: Rep, n: Rep, u: int, x: np.ndarray) -> np.ndarray:
    """Matrix E with phi(x) = E @ cochain(phi) for x in P at vertex u."""
    F, A = n.field, n.algebra
    offs = _cochain_offsets(P, n)
    E = F.zeros((n.dims[u], cochain_dim(P, n)))
    for c, (g, p) in enumerate(P.proj_coords[u]):
        if x[c] == 0:
            continue
        v = P.generators[g][0]
        b = A.basis[p]
        blk = F.norm(x[c] * n.path_matrix(b[1], b[0]))
        E[:, offs[g]:offs[g] + n.dims[v]] = F.add(E[:, offs[g]:offs[g] + n.dims[v]], blk)
    return E


def precompose_matrix(d: RepMap, n: Rep) -> np.ndarray:
    """Matrix of Hom(P, n) -> Hom(P', n), phi -> (d then phi), for d: P' -> P."""
    F = n.field
    Pp, P = d.source, d.target
    imgs = R.generator_images(d)
    rows = [eval_matrix(P, n, v, imgs[g]) for g, (v, _) in enumerate(Pp.generators)]
    if not rows:
        return F.zeros((0, cochain_dim(P, n)))
    return np.concatenate(rows, axis=0)


def cochain_to_map(P: Rep, n: Rep, vec: np.ndarray) -> RepMap:
    offs = _cochain_offsets(P, n)
    imgs = [vec[o:o + n.dims[v]] for o, (v, _) in zip(offs, P.generators)]
    return R.hom_from_projective(P, n, imgs)


def map_to_cochain(f: RepMap) -> np.ndarray:
    F = f.field
    imgs = R.generator_images(f)
    return np.concatenate(imgs) if imgs else F.zeros(0)


# -- Ext -------------------------------------------------------------------

class ExtElement:
    def __init__(self, space: "ExtSpace", cocycle: np.ndarray):
        self.space = space
        self.cocycle = cocycle
        self._lifts: List[List[np.ndarray]] = []

    @property
    def source(self) -> Rep:
        return self.space.source

    @property
    def target(self) -> Rep:
        return self.space.target

    @property
    def degree(self) -> int:
        return self.space.degree

    def coords(self) -> np.ndarray:
        return self.space.coords(self.cocycle)

    def is_zero(self) -> bool:
        return self.space.field.is_zero(self.coords())

    def lift(self, depth: int) -> List[List[np.ndarray]]:
        """Generator images of chain maps P_{i+k}(M) -> P_k(N), k = 0..depth."""
        F = self.space.field
        i = self.degree
        M, N = self.source, self.target
        resM = min_proj_resolution(M, i + depth)
        resN = min_proj_resolution(N, depth)
        while len(self._lifts) <= depth:
            k = len(self._lifts)
            Pm, Pn = resM.terms[i + k], resN.terms[k]
            images = []
            if k == 0:
                targets = [self.cocycle[o:o + N.dims[v]] for o, (v, _) in
                           zip(_cochain_offsets(Pm, N), Pm.generators)]
                through = resN.aug
            else:
                prev = R.hom_from_projective(resM.terms[i + k - 1], resN.terms[k - 1], self._lifts[k - 1])
                dimg = R.generator_images(resM.diffs[i + k])
                targets = [F.matmul(prev.mats[v], dimg[g].reshape(-1, 1))[:, 0]
                           for g, (v, _) in enumerate(Pm.generators)]
                through = resN.diffs[k]
            for (v, _), y in zip(Pm.generators, targets):
                x = el.solve_right(F, through.mats[v], y.reshape(-1, 1)) if through.mats[v].shape[0] \
                    else F.zeros((Pn.dims[v], 1))
                if x is None:
                    raise LiftError(f"no lift at stage {k}")
                images.append(x[:, 0])
            self._lifts.append(images)
        return self._lifts[: depth + 1]

    def then(self, other: "ExtElement", space: "ExtSpace" = None) -> "ExtElement":
        return yoneda_compose(self, other, space)

    def __repr__(self):
        return f"ExtElement(deg={self.degree}, coords={self.coords().tolist()})"


class ExtSpace:
    """Ext^i(source, target) with a basis of cocycles independent modulo coboundaries."""

    def __init__(self, m: Rep, n: Rep, i: int):
        if i < 0:
            raise ValueError("negative degree")
        if m.algebra is not n.algebra:
            raise ValueError("modules over different algebras")
        self.source, self.target, self.degree = m, n, i
        F = self.field
        res = min_proj_resolution(m, i + 1)
        P = res.terms[i]
        self.dim_cochains = cochain_dim(P, n)
        Dn = precompose_matrix(res.diffs[i + 1], n)
        Z = el.kernel(F, Dn) if Dn.shape[0] else F.eye(self.dim_cochains)
        if i >= 1:
            B = el.column_space(F, precompose_matrix(res.diffs[i], n))
        else:
            B = F.zeros((self.dim_cochains, 0))
        cols = [c - B.shape[1] for c in el.independent_columns(F, np.concatenate([B, Z], axis=1))
                if c >= B.shape[1]]
        self.cocycles = Z
        self.coboundaries = B
        self.Q = Z[:, cols] if cols else F.zeros((self.dim_cochains, 0))
        self._QB = np.concatenate([self.Q, B], axis=1)

    @property
    def field(self) -> el.FieldSpec:
        return self.source.field

    @property
    def dim(self) -> int:
        return self.Q.shape[1]

    @cached_property
    def basis(self) -> List[ExtElement]:
        return [ExtElement(self, self.Q[:, j].copy()) for j in range(self.dim)]

    def coords(self, cocycle: np.ndarray) -> np.ndarray:
        F = self.field
        if self.dim == 0:
            return F.zeros(0)
        x = el.solve_right(F, self._QB, cocycle.reshape(-1, 1))
        if x is None:
            raise ValueError("not a cocycle")
        return x[: self.dim, 0]

    def element(self, coeffs) -> ExtElement:
        F = self.field
        c = F.asarray(coeffs).reshape(-1, 1)
        return ExtElement(self, F.matmul(self.Q, c)[:, 0] if self.dim else F.zeros(self.dim_cochains))

    def from_hom(self, f: RepMap) -> ExtElement:
        if self.degree != 0:
            raise ValueError("maps are degree-0 classes")
        res = min_proj_resolution(self.source, 0)
        return ExtElement(self, map_to_cochain(res.aug.then(f)))

    def to_hom(self, x: ExtElement) -> RepMap:
        """The module map M -> N represented by a degree-0 class."""
        if self.degree != 0:
            raise ValueError("only degree-0 classes are maps")
        F = self.field
        res = min_proj_resolution(self.source, 0)
        phi = cochain_to_map(res.terms[0], self.target, x.cocycle)
        mats = []
        for v, (e, p) in enumerate(zip(res.aug.mats, phi.mats)):
            if e.shape[0] == 0:
                mats.append(F.zeros((self.target.dims[v], 0)))
                continue
            h = el.solve_right(F, e.T, p.T)
            if h is None:
                raise LiftError("cocycle does not factor through the augmentation")
            mats.append(h.T.copy())
        return RepMap(self.source, self.target, mats)

    def __repr__(self):
        return f"ExtSpace(deg={self.degree}, dim={self.dim})"


def ext_space(m: Rep, n: Rep, i: int) -> ExtSpace:
    key = ("ext", id(n), i)
    return m.cached(key, lambda: (n, ExtSpace(m, n, i)))[1]


def ext_dim(m: Rep, n: Rep, i: int) -> int:
    return ext_space(m, n, i).dim


def yoneda_compose(f: ExtElement, g: ExtElement, space: ExtSpace = None) -> ExtElement:
    """The product "f, then g" in Ext^{i+j}(M, L) for f in Ext^i(M,N), g in Ext^j(N,L)."""
    if f.target is not g.source:
        raise ValueError("middle modules differ")
    F = f.space.field
    i, j = f.degree, g.degree
    M, L = f.source, g.target
    out_space = space if space is not None else ext_space(M, L, i + j)
    lam = f.lift(j)[j]
    resM = min_proj_resolution(M, i + j)
    resN = min_proj_resolution(g.source, j)
    gmap = cochain_to_map(resN.terms[j], L, g.cocycle)
    parts = [F.matmul(gmap.mats[v], lam[k].reshape(-1, 1))[:, 0]
             for k, (v, _) in enumerate(resM.terms[i + j].generators)]
    return ExtElement(out_space, np.concatenate(parts) if parts else F.zeros(0))


def ext_functorial(f_or_m, n_or_g, i: int, side: str = "left") -> np.ndarray:
    """Matrix of Ext^i(f, N): Ext^i(X', N) -> Ext^i(X, N) (side='left'),
    or of Ext^i(M, g): Ext^i(M, N) -> Ext^i(M, N') (side='right'),
    columns indexed by the source basis."""
    if side == "left":
        f, n = f_or_m, n_or_g
        X, Xp = f.source, f.target
        src, dst = ext_space(Xp, n, i), ext_space(X, n, i)
        fx = ext_space(X, Xp, 0).from_hom(f)
        cols = [yoneda_compose(fx, b, dst).coords() for b in src.basis]
    elif side == "right":
        m, g = f_or_m, n_or_g
        src, dst = ext_space(m, g.source, i), ext_space(m, g.target, i)
        P = min_proj_resolution(m, i).terms[i]
        cols = [dst.coords(map_to_cochain(cochain_to_map(P, g.source, b.cocycle).then(g))) for b in src.basis]
    else:
        raise ValueError("side must be 'left' or 'right'")
    F = src.field
    if not cols:
        return F.zeros((dst.dim, 0))
    return np.stack(cols, axis=1)


def extension_class(alpha: RepMap, beta: RepMap) -> ExtElement:
    """Class in Ext^1(W, X) of a short exact sequence 0 -> X -> E -> W -> 0."""
    F = alpha.field
    X, E, W = alpha.source, alpha.target, beta.target
    res = min_proj_resolution(W, 1)
    # lift the augmentation through beta, then restrict along d_1; the result lands in im(alpha)
    aug_imgs = R.generator_images(res.aug)
    lifts = []
    for (v, _), y in zip(res.terms[0].generators, aug_imgs):
        x = el.solve_right(F, beta.mats[v], y.reshape(-1, 1))
        if x is None:
            raise LiftError("beta is not surjective")
        lifts.append(x[:, 0])
    lift = R.hom_from_projective(res.terms[0], E, lifts)
    restricted = res.diffs[1].then(lift)
    parts = []
    for (v, _), y in zip(res.terms[1].generators, R.generator_images(restricted)):
        x = el.solve_right(F, alpha.mats[v], y.reshape(-1, 1))
        if x is None:
            raise LiftError("sequence is not exact")
        parts.append(x[:, 0])
    sp = ext_space(W, X, 1)
    return ExtElement(sp, np.concatenate(parts) if parts else F.zeros(0))


# -- dominant dimension ----------------------------------------------------

def regular_module(A: PathAlgebra) -> Rep:
    return R.projective_sum(A, list(range(A.num_vertices)))


def domdim_bounded(A: PathAlgebra, bound: int) -> Bounded:
    """Number of leading projective terms in the minimal injective resolution of A."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    m = regular_module(A)
    for k in range(bound):
        if m.is_zero():
            return Bounded(bound, exact=False)
        I, iota = R.injective_hull(m)
        if not R.is_projective(I):
            return Bounded(k)
        m, _ = R.cokernel(iota)
    return Bounded(bound, exact=False)
