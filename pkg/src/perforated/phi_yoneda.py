"""Perforated Yoneda algebras: sums of Ext groups in a set of degrees Φ
with the Yoneda product cut off outside Φ."""
from __future__ import annotations

from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import homological as H
from .reps import Rep, RepMap
from .scalgebra import SCAlgebra, SCModule


class NonAdmissiblePhi(ValueError):
    def __init__(self, phi, witness):
        self.phi, self.witness = tuple(phi), witness
        i, j, k = witness
        super().__init__(f"{sorted(phi)} is not admissible: witness (i,j,k)=({i},{j},{k})")


def parse_phi(text) -> Tuple[int, ...]:
    if isinstance(text, str):
        items = [t for t in text.replace(" ", "").split(",") if t]
        vals = [int(t) for t in items]
    else:
        vals = [int(t) for t in text]
    if any(v < 0 for v in vals):
        raise ValueError("degrees must be natural numbers")
    if 0 not in vals:
        raise ValueError("the degree set must contain 0")
    return tuple(sorted(set(vals)))


def is_admissible(phi) -> Tuple[bool, Optional[Tuple[int, int, int]]]:
    """Check i+j ∈ Φ ⇔ j+k ∈ Φ for all i, j, k ∈ Φ with i+j+k ∈ Φ."""
    s = set(int(x) for x in phi)
    if 0 not in s:
        raise ValueError("the degree set must contain 0")
    for i, j, k in product(sorted(s), repeat=3):
        if i + j + k in s and ((i + j in s) != (j + k in s)):
            return False, (i, j, k)
    return True, None


Label = Tuple[str, str, int, int]


class PhiYoneda(SCAlgebra):
    """E^Φ(V) for V = ⊕ summands, with blocks indexed by (source, target, degree).

    A basis element labelled (s, t, d, k) is the k-th basis class of
    Ext^d(V_s, V_t).  The product ``x * y`` is "x, then y".
    """

    def __init__(self, summands: Sequence[Tuple[str, Rep]], phi: Sequence[int], check_admissible: bool = True):
        phi = parse_phi(phi)
        if check_admissible:
            ok, w = is_admissible(phi)
            if not ok:
                raise NonAdmissiblePhi(phi, w)
        if not summands:
            raise ValueError("no summands")
        self.phi = phi
        self.names = [n for n, _ in summands]
        if len(set(self.names)) != len(self.names):
            raise ValueError("summand labels must be unique")
        self.mods = [m for _, m in summands]
        for m in self.mods:
            if m.is_zero():
                raise ValueError("summands must be nonzero")
        F = self.mods[0].field
        self.spaces: Dict[Tuple[int, int, int], H.ExtSpace] = {}
        self.blocks: Dict[Tuple[int, int, int], List[int]] = {}
        labels: List[Label] = []
        grading: List[int] = []
        r = len(self.mods)
        for d in phi:
            for s in range(r):
                for t in range(r):
                    sp = H.ext_space(self.mods[s], self.mods[t], d)
                    self.spaces[(s, t, d)] = sp
                    self.blocks[(s, t, d)] = list(range(len(labels), len(labels) + sp.dim))
                    labels += [(self.names[s], self.names[t], d, k) for k in range(sp.dim)]
                    grading += [d] * sp.dim
        self.label_tuples = labels
        n = len(labels)
        where = {}
        for key, idx in self.blocks.items():
            for k, i in enumerate(idx):
                where[i] = (key, k)
        self._where = where
        table = F.zeros((n, n, n))
        for (s, t, d1), ia in self.blocks.items():
            for (t2, u, d2), ib in self.blocks.items():
                if t2 != t or d1 + d2 not in phi or not ia or not ib:
                    continue
                out = self.spaces[(s, u, d1 + d2)]
                ic = self.blocks[(s, u, d1 + d2)]
                if not ic:
                    continue
                A_ = self.spaces[(s, t, d1)].basis
                B_ = self.spaces[(t, u, d2)].basis
                for a, x in zip(ia, A_):
                    for b, y in zip(ib, B_):
                        table[a, b, ic] = H.yoneda_compose(x, y, out).coords()
        unit = F.zeros(n)
        for s in range(r):
            sp = self.spaces[(s, s, 0)]
            unit[self.blocks[(s, s, 0)]] = sp.from_hom(RepMap.identity(self.mods[s])).coords()
        super().__init__(F, table, unit, [f"{a}->{b}[{d}]#{k}" for a, b, d, k in labels], grading)

    def summand_idempotent(self, names) -> np.ndarray:
        """The idempotent projecting onto the given summands."""
        if isinstance(names, str):
            names = [names]
        e = self.field.zeros(self.dim)
        for nm in names:
            s = self.names.index(nm)
            idx = self.blocks[(s, s, 0)]
            e[idx] = self.unit[idx]
        return e

    def element_of(self, s: int, t: int, d: int, coords: np.ndarray) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[self.blocks[(s, t, d)]] = coords
        return v

    def block_coords(self, x: np.ndarray, s: int, t: int, d: int) -> np.ndarray:
        return x[self.blocks[(s, t, d)]]

    def hom_element(self, s: int, t: int, f: RepMap) -> np.ndarray:
        sp = self.spaces[(s, t, 0)]
        return self.element_of(s, t, 0, sp.from_hom(f).coords())

    def ext_class(self, x: np.ndarray, s: int, t: int, d: int) -> H.ExtElement:
        sp = self.spaces[(s, t, d)]
        return sp.element(self.block_coords(x, s, t, d))


def build_phi_yoneda(summands: Sequence[Tuple[str, Rep]], phi, check_admissible: bool = True) -> PhiYoneda:
    return PhiYoneda(summands, phi, check_admissible)


class PhiModule(SCModule):
    """E^Φ(V, Z) = ⊕_{d ∈ Φ} Ext^d(V, Z) as a left E^Φ(V)-module (x . z = "x, then z")."""

    def __init__(self, alg: PhiYoneda, z: Rep):
        F = alg.field
        self.alg, self.z = alg, z
        self.spaces: Dict[Tuple[int, int], H.ExtSpace] = {}
        self.blocks: Dict[Tuple[int, int], List[int]] = {}
        n = 0
        for d in alg.phi:
            for s, m in enumerate(alg.mods):
                sp = H.ext_space(m, z, d)
                self.spaces[(s, d)] = sp
                self.blocks[(s, d)] = list(range(n, n + sp.dim))
                n += sp.dim
        action = [F.zeros((n, n)) for _ in range(alg.dim)]
        for (s, t, d1), ia in alg.blocks.items():
            for (t2, d2), iz in self.blocks.items():
                if t2 != t or d1 + d2 not in alg.phi or not ia or not iz:
                    continue
                out = self.spaces[(s, d1 + d2)]
                ic = self.blocks[(s, d1 + d2)]
                if not ic:
                    continue
                for a, x in zip(ia, alg.spaces[(s, t, d1)].basis):
                    for b, y in zip(iz, self.spaces[(t, d2)].basis):
                        action[a][ic, b] = H.yoneda_compose(x, y, out).coords()
        super().__init__(alg, action)


def build_phi_module(alg: PhiYoneda, z: Rep) -> PhiModule:
    return PhiModule(alg, z)


def phi_module_map(mod_src: PhiModule, mod_tgt: PhiModule, g: H.ExtElement) -> np.ndarray:
    """μ(g): E^Φ(V, Z) -> E^Φ(V, Z'), z -> "z, then g", for g ∈ Ext^d(Z, Z')."""
    F = mod_src.alg.field
    phi = mod_src.alg.phi
    out = F.zeros((mod_tgt.dim, mod_src.dim))
    d = g.degree
    for (s, d1), iz in mod_src.blocks.items():
        if d1 + d not in phi or not iz:
            continue
        ic = mod_tgt.blocks[(s, d1 + d)]
        if not ic:
            continue
        sp = mod_tgt.spaces[(s, d1 + d)]
        for b, y in zip(iz, mod_src.spaces[(s, d1)].basis):
            out[ic, b] = H.yoneda_compose(y, g, sp).coords()
    return out
