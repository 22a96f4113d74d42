"""Two-term tilting complexes over a structure-constant algebra and the
explicit isomorphism from their endomorphism algebra.

Projective modules are row vectors over Λ fixed by an idempotent matrix E
(``v = v E``).  A morphism P_E -> P_F is a Λ-matrix Z with ``Z = E Z F``,
acting by ``v -> v Z``; composing "Z, then Z'" is the matrix product Z Z'.
Λ-matrices are arrays of shape (rows, cols, dim Λ).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin as el
from . import homological as H
from .phi_yoneda import PhiYoneda
from .reps import Rep, RepMap
from .scalgebra import SCAlgebra


class ThetaSolveFailed(RuntimeError):
    pass


class ThetaNotMultiplicative(RuntimeError):
    pass


def lam_matmul(lam: SCAlgebra, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Product of Λ-matrices, using left-regular blocks of the nonzero entries of X."""
    F = lam.field
    n, m, d = X.shape[0], X.shape[1], lam.dim
    k = Y.shape[1]
    out = F.zeros((n, k, d))
    if n == 0 or m == 0 or k == 0:
        return out
    Yt = np.transpose(Y, (0, 2, 1))                 # j, b, k
    Lreg = lam.left_regular
    for i in range(n):
        acc = None
        for j in range(m):
            nz = np.flatnonzero(X[i, j] != 0)
            if nz.size == 0:
                continue
            L = Lreg[int(nz[0])] * X[i, j, nz[0]]
            for a in nz[1:]:
                L = L + Lreg[int(a)] * X[i, j, a]
            term = L @ Yt[j]
            acc = term if acc is None else acc + term
        if acc is not None:
            out[i] = F.norm(acc).T
    return out


@dataclass
class SCProjective:
    lam: SCAlgebra
    E: np.ndarray

    def __post_init__(self):
        if not np.array_equal(lam_matmul(self.lam, self.E, self.E), self.E):
            raise ValueError("presentation matrix is not idempotent")

    @property
    def size(self) -> int:
        return self.E.shape[0]

    def dim(self) -> int:
        """Dimension over the ground field."""
        F = self.lam.field
        n, d = self.size, self.lam.dim
        rows = []
        for i in range(n):
            for a in range(d):
                v = F.zeros((1, n, d))
                v[0, i, a] = F.scalar(1)
                rows.append(lam_matmul(self.lam, v, self.E).reshape(-1))
        return el.rank(F, np.stack(rows, axis=1)) if rows else 0


def hom_projectives(P: SCProjective, Q: SCProjective) -> np.ndarray:
    """Column basis (flattened Λ-matrices) of Hom(P, Q) = {Z = E_P Z E_Q}."""
    lam, F = P.lam, P.lam.field
    n, m, d = P.size, Q.size, lam.dim
    big = F.zeros((n * m * d, n * m * d))
    L = [[lam.left_matrix(P.E[i, j]) for j in range(n)] for i in range(n)]
    Rm = [[lam.right_matrix(Q.E[l, k]) for k in range(m)] for l in range(m)]
    for i in range(n):
        for k in range(m):
            r0 = (i * m + k) * d
            for j in range(n):
                for l in range(m):
                    c0 = (j * m + l) * d
                    blk = F.matmul(Rm[l][k], L[i][j])
                    big[r0:r0 + d, c0:c0 + d] = F.add(big[r0:r0 + d, c0:c0 + d], blk)
    return el.column_space(F, big)


@dataclass
class TwoTermComplex:
    """0 -> T0 --q--> T1 -> 0 with T0 in degree 0."""
    lam: SCAlgebra
    T0: SCProjective
    T1: SCProjective
    q: np.ndarray
    inventory: List[str] = field(default_factory=list)
    row_summands: List[int] = field(default_factory=list)   # Λ summand index per T1 coordinate

    def __post_init__(self):
        lam = self.lam
        chk = lam_matmul(lam, lam_matmul(lam, self.T0.E, self.q), self.T1.E)
        if not np.array_equal(chk, self.q):
            raise ValueError("differential is not a morphism between the terms")


def build_tilting_complex(lam: SCAlgebra, E0: np.ndarray, E1: np.ndarray, q: np.ndarray,
                          inventory: Sequence[str] = (), row_summands: Sequence[int] = ()) -> TwoTermComplex:
    return TwoTermComplex(lam, SCProjective(lam, E0), SCProjective(lam, E1), q,
                          list(inventory), list(row_summands))


def tilting_complex_for(lam: PhiYoneda, seq, witness, parts: Sequence[Rep]) -> TwoTermComplex:
    """T0 = E(V, X), T1 = E(V, M1 ⊕ M), differential induced by (alpha, 0).

    Λ summands are X (index 0) and the parts of M (indices 1..t).  M1 is
    realized inside ⊕ copies of the parts through the add(M) witness.
    """
    F = lam.field
    d = lam.dim
    h, t = len(witness.kinds), len(parts)
    n1 = h + t
    E1 = F.zeros((n1, n1, d))
    retract = [inc.then(witness.retraction) for inc in witness.injections]     # copy j -> M1
    section = [witness.section.then(pr) for pr in witness.projections]        # M1 -> copy k
    for j in range(h):
        for k in range(h):
            f = retract[j].then(section[k])
            E1[j, k] = lam.hom_element(witness.kinds[j] + 1, witness.kinds[k] + 1,
                                       RepMap(parts[witness.kinds[j]], parts[witness.kinds[k]], f.mats))
    for c in range(t):
        E1[h + c, h + c] = lam.summand_idempotent(lam.names[c + 1])
    E0 = lam.summand_idempotent("X").reshape(1, 1, d)
    q = F.zeros((1, n1, d))
    for k in range(h):
        f = seq.alpha.then(section[k])
        q[0, k] = lam.hom_element(0, witness.kinds[k] + 1, RepMap(seq.X, parts[witness.kinds[k]], f.mats))
    inventory = [f"T0 = E(V, X)", f"T1 = E(V, M1 ⊕ M) with M1 a summand of {h} copies of M-parts"]
    inventory += [f"summand {lam.names[c + 1]} of V appears in T1 as a stalk" for c in range(t)]
    inventory.append("the cone of T0 -> T1 recovers E(V, X) up to homotopy, so add(T) generates")
    rows = [k + 1 for k in witness.kinds] + [c + 1 for c in range(t)]
    return build_tilting_complex(lam, E0, E1, q, inventory, rows)


# -- Hom in the homotopy category -------------------------------------------

class _HomData:
    def __init__(self, t: TwoTermComplex):
        self.t = t
        lam = t.lam
        self.B00 = hom_projectives(t.T0, t.T0)
        self.B11 = hom_projectives(t.T1, t.T1)
        self.B01 = hom_projectives(t.T0, t.T1)
        self.B10 = hom_projectives(t.T1, t.T0)

    def mat(self, B, j, P, Q):
        return B[:, j].reshape(P.size, Q.size, self.t.lam.dim)


def _vec(x):
    return x.reshape(-1)


def _chain_maps(D: _HomData):
    t, lam, F = D.t, D.t.lam, D.t.lam.field
    n00, n11 = D.B00.shape[1], D.B11.shape[1]
    cols = []
    for j in range(n00):
        f0 = D.mat(D.B00, j, t.T0, t.T0)
        cols.append(F.neg(_vec(lam_matmul(lam, f0, t.q))))
    for j in range(n11):
        f1 = D.mat(D.B11, j, t.T1, t.T1)
        cols.append(_vec(lam_matmul(lam, t.q, f1)))
    if not cols:
        return F.zeros((0, 0))
    eq = np.stack(cols, axis=1)
    return el.kernel(F, eq)     # columns: (coords in B00, coords in B11)


def _homotopies(D: _HomData):
    t, lam, F = D.t, D.t.lam, D.t.lam.field
    cols = []
    for j in range(D.B10.shape[1]):
        r = D.mat(D.B10, j, t.T1, t.T0)
        f0 = lam_matmul(lam, t.q, r)
        f1 = lam_matmul(lam, r, t.q)
        a = el.coordinates(F, D.B00, _vec(f0).reshape(-1, 1))[:, 0] if D.B00.shape[1] else F.zeros(0)
        b = el.coordinates(F, D.B11, _vec(f1).reshape(-1, 1))[:, 0] if D.B11.shape[1] else F.zeros(0)
        cols.append(np.concatenate([a, b]))
    n = D.B00.shape[1] + D.B11.shape[1]
    if not cols:
        return F.zeros((n, 0))
    return el.column_space(F, np.stack(cols, axis=1))


def hom_complex_dim(t: TwoTermComplex, shift: int, data: Optional[_HomData] = None) -> Tuple[int, int, int]:
    """(dim chain maps, dim null-homotopic maps, dim Hom) for Hom(T, T[shift])."""
    if shift not in (-1, 0, 1):
        return (0, 0, 0)
    D = data or _HomData(t)
    lam, F = t.lam, t.lam.field
    if shift == 0:
        C = _chain_maps(D)
        Hs = _homotopies(D)
        return (C.shape[1], Hs.shape[1], C.shape[1] - Hs.shape[1])
    if shift == 1:
        # Hom(T0, T1) modulo q End(T1) + End(T0) q
        chain = D.B01.shape[1]
        cols = [_vec(lam_matmul(lam, t.q, D.mat(D.B11, j, t.T1, t.T1))) for j in range(D.B11.shape[1])]
        cols += [_vec(lam_matmul(lam, D.mat(D.B00, j, t.T0, t.T0), t.q)) for j in range(D.B00.shape[1])]
        r = el.rank(F, np.stack(cols, axis=1)) if cols else 0
        return (chain, r, chain - r)
    # shift -1: r: T1 -> T0 with q r = 0 and r q = 0; no homotopies
    cols = []
    for j in range(D.B10.shape[1]):
        r = D.mat(D.B10, j, t.T1, t.T0)
        cols.append(np.concatenate([_vec(lam_matmul(lam, t.q, r)), _vec(lam_matmul(lam, r, t.q))]))
    if not cols:
        return (0, 0, 0)
    k = el.kernel(F, np.stack(cols, axis=1)).shape[1]
    return (k, 0, k)


class EndAlgebra(SCAlgebra):
    """End of T in the homotopy category; basis = chain maps modulo homotopy."""

    def __init__(self, t: TwoTermComplex, data: Optional[_HomData] = None):
        D = data or _HomData(t)
        self.t, self.data = t, D
        lam, F = t.lam, t.lam.field
        C = _chain_maps(D)
        Hs = _homotopies(D)
        cols = [c - Hs.shape[1] for c in el.independent_columns(F, np.concatenate([Hs, C], axis=1))
                if c >= Hs.shape[1]]
        self.reps = C[:, cols]
        self.homotopy = Hs
        self._QH = np.concatenate([self.reps, Hs], axis=1)
        n = self.reps.shape[1]
        pairs = [self.components(j) for j in range(n)]
        table = F.zeros((n, n, n))
        for a in range(n):
            for b in range(n):
                f0 = lam_matmul(lam, pairs[a][0], pairs[b][0])
                f1 = lam_matmul(lam, pairs[a][1], pairs[b][1])
                table[a, b] = self.coords_of(f0, f1)
        unit = self.coords_of(t.T0.E, t.T1.E)
        super().__init__(F, table, unit, [f"chain#{j}" for j in range(n)])

    def components(self, j: int) -> Tuple[np.ndarray, np.ndarray]:
        D, t = self.data, self.t
        n00 = D.B00.shape[1]
        v = self.reps[:, j]
        F = t.lam.field
        f0 = F.matmul(D.B00, v[:n00].reshape(-1, 1)).reshape(t.T0.size, t.T0.size, t.lam.dim) if n00 \
            else F.zeros((t.T0.size, t.T0.size, t.lam.dim))
        f1 = F.matmul(D.B11, v[n00:].reshape(-1, 1)).reshape(t.T1.size, t.T1.size, t.lam.dim)
        return f0, f1

    def coords_of(self, f0: np.ndarray, f1: np.ndarray) -> np.ndarray:
        D, F = self.data, self.t.lam.field
        a = el.coordinates(F, D.B00, _vec(f0).reshape(-1, 1))[:, 0] if D.B00.shape[1] else F.zeros(0)
        b = el.coordinates(F, D.B11, _vec(f1).reshape(-1, 1))[:, 0]
        x = el.coordinates(F, self._QH, np.concatenate([a, b]).reshape(-1, 1))
        return x[: self.reps.shape[1], 0]


def end_algebra(t: TwoTermComplex) -> EndAlgebra:
    return EndAlgebra(t)


# -- Θ -----------------------------------------------------------------------

def _sign(F, i: int):
    """Sign relating the connecting class to the shifted degree-i component."""
    return F.scalar((-1) ** i)


@dataclass
class ThetaMap:
    matrix: np.ndarray                  # dim Γ x dim End
    bijective: bool
    multiplicative: bool
    unital: bool
    witnesses: List[dict] = field(default_factory=list)


def build_theta(end: EndAlgebra, gam: PhiYoneda, lam: PhiYoneda, seq, witness, parts: Sequence[Rep]) -> ThetaMap:
    """Solve, for each basis chain map (f0, f1), the element h of Γ with

    beta_hat * h_i = y_i * beta_hat   in Ext^i(U, W), and
    h_i * wbar = (-1)^i wbar * x_i    in Ext^{i+1}(W, X),

    where U = (copies of M-parts) ⊕ M, W = M ⊕ Y, x = f0, y = f1, beta_hat
    is (retraction ⊕ 1) followed by (beta ⊕ 1) and wbar is the class of the
    sequence on the Y summand."""
    F = gam.field
    phi = gam.phi
    t = len(parts)
    h = len(witness.kinds)
    Umods = [parts[k] for k in witness.kinds] + list(parts)
    Uidx = [k + 1 for k in witness.kinds] + [c + 1 for c in range(t)]   # Λ summand index
    Wmods = list(parts) + [seq.Y]
    Yi = t
    X = seq.X
    wclass = H.extension_class(seq.alpha, seq.beta)

    # beta_hat[j][w] as degree-0 classes (None = 0)
    bh: List[List[Optional[H.ExtElement]]] = [[None] * len(Wmods) for _ in Umods]
    for j in range(h):
        f = witness.injections[j].then(witness.retraction).then(seq.beta)
        f = RepMap(Umods[j], seq.Y, f.mats)
        bh[j][Yi] = H.ext_space(Umods[j], seq.Y, 0).from_hom(f)
    for c in range(t):
        bh[h + c][c] = H.ext_space(parts[c], parts[c], 0).from_hom(RepMap.identity(parts[c]))

    # equation blocks
    blocks = []
    for i in phi:
        for j in range(len(Umods)):
            for w in range(len(Wmods)):
                blocks.append(("a", i, j, w, H.ext_space(Umods[j], Wmods[w], i)))
        for w in range(len(Wmods)):
            blocks.append(("b", i, w, None, H.ext_space(Wmods[w], X, i + 1)))
    offs, pos = {}, 0
    for b in blocks:
        offs[b[:4]] = pos
        pos += b[4].dim
    neq = pos

    # coefficient matrix: one column per Γ basis element
    cols = []
    for g in range(gam.dim):
        (s, tt, i, k) = gam._where[g][0] + (gam._where[g][1],)
        cls = gam.spaces[(s, tt, i)].basis[k]
        col = F.zeros(neq)
        for j in range(len(Umods)):
            if bh[j][s] is None:
                continue
            sp = H.ext_space(Umods[j], Wmods[tt], i)
            if sp.dim == 0:
                continue
            o = offs[("a", i, j, tt)]
            col[o:o + sp.dim] = F.add(col[o:o + sp.dim], H.yoneda_compose(bh[j][s], cls, sp).coords())
        if tt == Yi:
            sp = H.ext_space(Wmods[s], X, i + 1)
            if sp.dim:
                o = offs[("b", i, s, None)]
                col[o:o + sp.dim] = F.add(col[o:o + sp.dim], H.yoneda_compose(cls, wclass, sp).coords())
        cols.append(col)
    Amat = np.stack(cols, axis=1) if cols else F.zeros((neq, 0))

    thetas, wits = [], []
    for e in range(end.dim):
        f0, f1 = end.components(e)
        rhs = F.zeros(neq)
        for i in phi:
            # y_i * beta_hat
            for j in range(len(Umods)):
                for w in range(len(Wmods)):
                    sp = H.ext_space(Umods[j], Wmods[w], i)
                    if sp.dim == 0:
                        continue
                    o = offs[("a", i, j, w)]
                    for k in range(len(Umods)):
                        if bh[k][w] is None:
                            continue
                        yk = lam.ext_class(f1[j, k], Uidx[j], Uidx[k], i)
                        rhs[o:o + sp.dim] = F.add(rhs[o:o + sp.dim], H.yoneda_compose(yk, bh[k][w], sp).coords())
            # (-1)^i wbar * x_i on the Y row
            sp = H.ext_space(seq.Y, X, i + 1)
            if sp.dim:
                xi = lam.ext_class(f0[0, 0], 0, 0, i)
                o = offs[("b", i, Yi, None)]
                val = F.norm(_sign(F, i) * H.yoneda_compose(wclass, xi, sp).coords())
                rhs[o:o + sp.dim] = F.add(rhs[o:o + sp.dim], val)
        sol = el.solve_right(F, Amat, rhs.reshape(-1, 1))
        if sol is None:
            raise ThetaSolveFailed(f"no solution for basis chain map {e}")
        thetas.append(sol[:, 0])
        wits.append({"chain_map": e, "x_degrees": [i for i in phi], "h": [F.to_str(v) for v in sol[:, 0]]})
    Th = np.stack(thetas, axis=1) if thetas else F.zeros((gam.dim, 0))
    bij = Th.shape[0] == Th.shape[1] and el.rank(F, Th) == Th.shape[0]
    mult = True
    for a in range(end.dim):
        for b in range(end.dim):
            lhs = F.matmul(Th, end.table[a, b].reshape(-1, 1))[:, 0]
            rhs = gam.multiply(Th[:, a], Th[:, b])
            if not np.array_equal(lhs, rhs):
                mult = False
                break
        if not mult:
            break
    unital = bool(np.array_equal(F.matmul(Th, end.unit.reshape(-1, 1))[:, 0], gam.unit))
    return ThetaMap(Th, bij, mult, unital, wits)


@dataclass
class Certificate:
    hom_minus1: int
    hom_plus1: int
    hom_zero: int
    end_dim: int
    gamma_dim: int
    theta_bijective: bool
    theta_multiplicative: bool
    theta_unital: bool
    inventory: List[str]
    reasons: List[str] = field(default_factory=list)
    end: Optional[EndAlgebra] = None
    theta: Optional[ThetaMap] = None

    @property
    def verdict(self) -> str:
        return "PASS" if not self.reasons else "FAIL"

    def to_json(self) -> dict:
        return {
            "hom_minus1": self.hom_minus1,
            "hom_plus1": self.hom_plus1,
            "end_dim": self.end_dim,
            "gamma_dim": self.gamma_dim,
            "theta_bijective": self.theta_bijective,
            "theta_multiplicative": self.theta_multiplicative,
            "verdict": self.verdict,
            "theta_unital": self.theta_unital,
            "generation": self.inventory,
            "reasons": list(self.reasons),
        }


def verify_equivalence(lam: PhiYoneda, gam: PhiYoneda, seq, witness, parts: Sequence[Rep]) -> Certificate:
    t = tilting_complex_for(lam, seq, witness, parts)
    D = _HomData(t)
    hm = hom_complex_dim(t, -1, D)[2]
    hp = hom_complex_dim(t, 1, D)[2]
    end = EndAlgebra(t, D)
    reasons = []
    if hm:
        reasons.append(f"Hom(T, T[-1]) has dimension {hm}")
    if hp:
        reasons.append(f"Hom(T, T[1]) has dimension {hp}")
    if end.dim != gam.dim:
        reasons.append(f"dim End(T) = {end.dim} differs from dim Γ = {gam.dim}")
    theta = None
    bij = mult = unital = False
    try:
        theta = build_theta(end, gam, lam, seq, witness, parts)
        bij, mult, unital = theta.bijective, theta.multiplicative, theta.unital
        if not bij:
            reasons.append("Θ is not bijective")
        if not mult:
            reasons.append("Θ is not multiplicative")
        if not unital:
            reasons.append("Θ does not preserve the unit")
    except ThetaSolveFailed as exc:
        reasons.append(f"Θ could not be solved: {exc}")
    return Certificate(hm, hp, end.dim, end.dim, gam.dim, bij, mult, unital, t.inventory, reasons, end, theta)
