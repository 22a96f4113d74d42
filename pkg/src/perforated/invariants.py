"""Invariants of structure-constant algebras used to refute (or corroborate)
derived equivalence: radical, simples, Cartan matrix, center, loops,
and bounded global and dominant dimensions."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2
import numpy as np
import sympy

from . import exactlin as el
from .homological import Bounded
from .scalgebra import SCAlgebra, SCModule


class RadicalVerificationError(RuntimeError):
    pass


# -- radical -----------------------------------------------------------------

def _trace_vector(A: SCAlgebra) -> np.ndarray:
    F = A.field
    return F.asarray([sum(A.left_regular[c][i, i] for i in range(A.dim)) for c in range(A.dim)])


def _p_trace(A: SCAlgebra, z: np.ndarray, i: int) -> int:
    """Tr(lift(L_z)^(p^i)) / p^i mod p."""
    p, n = A.field.p, A.dim
    mod = p ** (i + 1)
    small = n * mod * mod < 2 ** 62
    m = A.left_matrix(z).astype(np.int64 if small else object) % mod
    for _ in range(i):
        acc, base, e = None, m, p
        while e:
            if e & 1:
                acc = base if acc is None else (acc @ base) % mod
            e >>= 1
            if e:
                base = (base @ base) % mod
        m = acc
    tr = int(np.trace(m)) % mod
    if tr % p ** i:
        raise RadicalVerificationError("p-trace not divisible; ideal chain broken")
    return (tr // p ** i) % p


def radical(A: SCAlgebra) -> np.ndarray:
    """Column basis of the Jacobson radical.

    Characteristic 0 uses the trace form; characteristic p refines the
    ideal chain with p-power traces of lifted matrices.  The result is
    checked to be a nilpotent two-sided ideal.
    """
    F, n = A.field, A.dim
    if n == 0:
        return F.zeros((0, 0))
    tau = _trace_vector(A)
    gram = F.norm(np.tensordot(A.table, tau, axes=(2, 0)))     # gram[k, j] = Tr(L_{b_k b_j})
    I = el.kernel(F, gram.T.copy())
    if F.characteristic:
        p = F.characteristic
        l = 0
        while p ** (l + 1) <= n:
            l += 1
        for i in range(1, l + 1):
            if I.shape[1] == 0:
                break
            g = F.zeros((n, I.shape[1]))
            for k in range(I.shape[1]):
                for j in range(n):
                    z = A.multiply(I[:, k], A.basis_vector(j))
                    g[j, k] = _p_trace(A, z, i)
            K = el.kernel(F, g)
            I = el.column_space(F, F.matmul(I, K)) if K.shape[1] else F.zeros((n, 0))
    nilpotency_index(A, I)
    return I


def _products(A: SCAlgebra, S: np.ndarray, T: np.ndarray) -> np.ndarray:
    F = A.field
    cols = [A.multiply(S[:, a], T[:, b]) for a in range(S.shape[1]) for b in range(T.shape[1])]
    if not cols:
        return F.zeros((A.dim, 0))
    return el.column_space(F, np.stack(cols, axis=1))


def radical_powers(A: SCAlgebra, rad: np.ndarray) -> List[np.ndarray]:
    """[rad, rad^2, ...] ending with the zero space."""
    out = [rad]
    while out[-1].shape[1]:
        nxt = _products(A, out[-1], rad)
        if nxt.shape[1] == out[-1].shape[1]:
            raise RadicalVerificationError("computed radical is not nilpotent")
        out.append(nxt)
    return out


def nilpotency_index(A: SCAlgebra, rad: np.ndarray) -> int:
    """Least k with rad^k = 0; also checks that rad is a two-sided ideal."""
    F = A.field
    if rad.shape[1]:
        cols = [rad]
        for j in range(A.dim):
            cols.append(F.matmul(A.left_matrix(A.basis_vector(j)), rad))
            cols.append(F.matmul(A.right_matrix(A.basis_vector(j)), rad))
        if el.rank(F, np.concatenate(cols, axis=1)) != rad.shape[1]:
            raise RadicalVerificationError("computed radical is not an ideal")
        return len(radical_powers(A, rad))
    return 1 if A.dim else 0


# -- semisimple quotient and idempotents --------------------------------------

def _poly_to_sympy(F, coeffs, x):
    if F.characteristic:
        return sympy.Poly([int(c) for c in reversed(coeffs)], x, modulus=F.characteristic)
    return sympy.Poly([sympy.Rational(int(gmpy2.mpq(c).numerator), int(gmpy2.mpq(c).denominator))
                       for c in reversed(coeffs)], x, domain="QQ")


def _sympy_coeff(F, c):
    if F.characteristic:
        return F.scalar(int(c))
    r = sympy.Rational(c)
    return F.scalar(Fraction(int(r.p), int(r.q)))


def _min_poly(A: SCAlgebra, z: np.ndarray, one: np.ndarray) -> List:
    """Coefficients (constant first, monic) of the minimal polynomial of z in the unital corner."""
    F = A.field
    pows = [one]
    while True:
        nxt = A.multiply(pows[-1], z)
        B = np.stack(pows, axis=1)
        sol = el.solve_right(F, B, nxt.reshape(-1, 1))
        if sol is not None:
            return [F.neg(c) for c in sol[:, 0]] + [F.scalar(1)]
        pows.append(nxt)


def _evaluate(A: SCAlgebra, poly: sympy.Poly, z: np.ndarray, one: np.ndarray) -> np.ndarray:
    F = A.field
    acc = F.zeros(A.dim)
    for c in poly.all_coeffs():          # Horner, leading coefficient first
        acc = F.add(A.multiply(acc, z), F.norm(_sympy_coeff(F, c) * one))
    return acc


def _split(A: SCAlgebra, z: np.ndarray, one: np.ndarray) -> Optional[np.ndarray]:
    """An idempotent strictly between 0 and ``one`` in the subalgebra generated by z, if any."""
    F = A.field
    x = sympy.Symbol("x")
    mp = _poly_to_sympy(F, _min_poly(A, z, one), x)
    _, facs = mp.factor_list()
    if len(facs) < 2:
        return None
    g = facs[0][0] ** facs[0][1]
    h = sympy.Poly(1, x, modulus=F.characteristic) if F.characteristic else sympy.Poly(1, x, domain="QQ")
    for f, e in facs[1:]:
        h = h * f ** e
    s, t, _ = g.gcdex(h)
    return _evaluate(A, t * h, z, one)


def _corner(A: SCAlgebra, e: np.ndarray) -> np.ndarray:
    F = A.field
    return el.column_space(F, F.matmul(A.left_matrix(e), A.right_matrix(e)))


def primitive_decomposition(A: SCAlgebra, seed: int = 0, tries: int = 64) -> List[np.ndarray]:
    """Complete set of primitive orthogonal idempotents of a semisimple algebra."""
    F = A.field
    rng = np.random.default_rng(seed)
    out, todo = [], [A.unit.copy()]
    while todo:
        e = todo.pop(0)
        C = _corner(A, e)
        if C.shape[1] <= 1:
            out.append(e)
            continue
        found = None
        cands = [C[:, k] for k in range(C.shape[1])]
        for _ in range(tries):
            coeffs = F.asarray([int(c) for c in rng.integers(-3, 4, size=C.shape[1])])
            cands.append(F.matmul(C, coeffs.reshape(-1, 1))[:, 0])
        for z in cands:
            found = _split(A, z, e)
            if found is not None:
                break
        if found is None:
            out.append(e)           # local corner: a division algebra
            continue
        todo = [found, F.sub(e, found)] + todo
    return out


def quotient_algebra(A: SCAlgebra, ideal: np.ndarray) -> Tuple[SCAlgebra, np.ndarray, np.ndarray]:
    """(A/I, projection matrix, section columns)."""
    F, n = A.field, A.dim
    idx = [c - ideal.shape[1] for c in el.independent_columns(F, np.concatenate([ideal, F.eye(n)], axis=1))
           if c >= ideal.shape[1]]
    S = F.eye(n)[:, idx]
    basis = np.concatenate([ideal, S], axis=1)
    proj_full = el.coordinates(F, basis, F.eye(n))
    proj = proj_full[ideal.shape[1]:]
    m = len(idx)
    table = F.zeros((m, m, m))
    for a in range(m):
        for b in range(m):
            table[a, b] = F.matmul(proj, A.multiply(S[:, a], S[:, b]).reshape(-1, 1))[:, 0]
    unit = F.matmul(proj, A.unit.reshape(-1, 1))[:, 0]
    return SCAlgebra(F, table, unit), proj, S


def lift_idempotent(A: SCAlgebra, x: np.ndarray) -> np.ndarray:
    F = A.field
    for _ in range(4 * A.dim + 4):
        x2 = A.multiply(x, x)
        if np.array_equal(x2, x):
            return x
        x3 = A.multiply(x2, x)
        x = F.sub(F.scale(3, x2), F.scale(2, x3))
    raise RadicalVerificationError("idempotent lifting did not converge")


def lift_orthogonal(A: SCAlgebra, reps: Sequence[np.ndarray]) -> List[np.ndarray]:
    """Lift orthogonal idempotents of A/rad (given as preimages) to orthogonal idempotents of A."""
    F = A.field
    f = A.unit.copy()
    out = []
    for k, x in enumerate(reps):
        if k == len(reps) - 1:
            out.append(f)
            break
        y = A.multiply(A.multiply(f, x), f)
        eps = lift_idempotent(A, y)
        out.append(eps)
        f = F.sub(f, eps)
    return out


# -- analysis ------------------------------------------------------------------

def center_dim(A: SCAlgebra) -> int:
    F = A.field
    if A.dim == 0:
        return 0
    rows = [F.sub(A.left_matrix(A.basis_vector(b)), A.right_matrix(A.basis_vector(b))) for b in range(A.dim)]
    return el.kernel(F, np.concatenate(rows, axis=0)).shape[1]


def _corner_subspace_dim(A: SCAlgebra, e: np.ndarray, S: np.ndarray, f: np.ndarray) -> int:
    F = A.field
    if S.shape[1] == 0:
        return 0
    return el.rank(F, F.matmul(F.matmul(A.left_matrix(e), A.right_matrix(f)), S))


@dataclass
class AlgebraAnalysis:
    algebra: SCAlgebra
    rad: np.ndarray
    nilpotency: int
    idempotents: List[np.ndarray]          # complete primitive orthogonal set in A
    classes: List[List[int]]               # idempotent indices per isomorphism class of simples
    division_dims: List[int]
    simple_dims: List[int]
    cartan: List[List[int]]
    cartan_det: int
    center: int
    arrows: List[List[int]]
    split: bool
    rad_powers: List[np.ndarray] = field(default_factory=list)
    gldim: Optional[Bounded] = None

    @property
    def num_simples(self) -> int:
        return len(self.classes)

    def representative(self, i: int) -> np.ndarray:
        return self.idempotents[self.classes[i][0]]

    @property
    def loops(self) -> List[int]:
        return [self.arrows[i][i] for i in range(self.num_simples)]

    def to_json(self) -> dict:
        out = {
            "dim": self.algebra.dim,
            "radical_dim": int(self.rad.shape[1]),
            "nilpotency_index": self.nilpotency,
            "num_simples": self.num_simples,
            "simple_dims": self.simple_dims,
            "cartan": self.cartan,
            "cartan_det": self.cartan_det,
            "center_dim": self.center,
            "quiver_arrows": self.arrows,
            "split": self.split,
        }
        if self.gldim is not None:
            out["gldim"] = self.gldim.to_json()
        return out


def analyze(A: SCAlgebra, gldim_bound: Optional[int] = None) -> AlgebraAnalysis:
    F = A.field
    rad = radical(A)
    powers = radical_powers(A, rad)
    B, proj, S = quotient_algebra(A, rad)
    prims = primitive_decomposition(B)
    lifted = lift_orthogonal(A, [F.matmul(S, e.reshape(-1, 1))[:, 0] for e in prims])
    # same block of A/rad <=> isomorphic simple modules
    classes: List[List[int]] = []
    for i, e in enumerate(prims):
        for cl in classes:
            if B.corner_dim(prims[cl[0]], e):
                cl.append(i)
                break
        else:
            classes.append([i])
    ddims = [B.corner_dim(prims[cl[0]], prims[cl[0]]) for cl in classes]
    sdims = [len(cl) * d for cl, d in zip(classes, ddims)]
    reps = [lifted[cl[0]] for cl in classes]
    r = len(classes)
    cartan = [[A.corner_dim(reps[j], reps[i]) // ddims[j] for j in range(r)] for i in range(r)]
    rad2 = powers[1] if len(powers) > 1 else F.zeros((A.dim, 0))
    arrows = [[_corner_subspace_dim(A, reps[i], rad, reps[j]) - _corner_subspace_dim(A, reps[i], rad2, reps[j])
               for j in range(r)] for i in range(r)]
    out = AlgebraAnalysis(A, rad, len(powers) if rad.shape[1] else 1, lifted, classes, ddims, sdims, cartan,
                          el.int_det(cartan) if r else 1, center_dim(A), arrows, all(d == 1 for d in ddims),
                          powers)
    if gldim_bound is not None:
        out.gldim = gldim_bounded(A, gldim_bound, out)
    return out


def wedderburn(A: SCAlgebra) -> Tuple[int, List[int]]:
    an = analyze(A)
    return an.num_simples, an.simple_dims


def cartan(A: SCAlgebra) -> List[List[int]]:
    return analyze(A).cartan


def quiver_loops(A: SCAlgebra) -> List[int]:
    return analyze(A).loops


def loops_at(A: SCAlgebra, e: np.ndarray, analysis: Optional[AlgebraAnalysis] = None) -> int:
    """dim e (rad/rad^2) e for an idempotent e."""
    an = analysis or analyze(A)
    F = A.field
    rad2 = an.rad_powers[1] if len(an.rad_powers) > 1 else F.zeros((A.dim, 0))
    return _corner_subspace_dim(A, e, an.rad, e) - _corner_subspace_dim(A, e, rad2, e)


# -- modules over SC algebras ---------------------------------------------------

def _sub(M: SCModule, K: np.ndarray) -> SCModule:
    F = M.algebra.field
    if K.shape[1] == 0:
        return SCModule(M.algebra, [F.zeros((0, 0)) for _ in M.action])
    return SCModule(M.algebra, _restricted_action(F, K, M.action))


def _restricted_action(F, K: np.ndarray, action) -> List[np.ndarray]:
    """Matrices of the action on the invariant subspace spanned by K (one solve for all)."""
    m = K.shape[1]
    big = el.coordinates(F, K, np.concatenate([F.matmul(a, K) for a in action], axis=1))
    return [big[:, i * m:(i + 1) * m] for i in range(len(action))]


def _regular_corner(A: SCAlgebra, e: np.ndarray) -> Tuple[SCModule, np.ndarray]:
    """A e as a left module, with its basis inside A."""
    F = A.field
    Bk = el.column_space(F, A.right_matrix(e))
    return SCModule(A, _restricted_action(F, Bk, A.left_regular)), Bk


def _radical_of_module(M: SCModule, rad: np.ndarray) -> np.ndarray:
    F = M.algebra.field
    cols = [M.act(rad[:, k]) for k in range(rad.shape[1])]
    if not cols or M.dim == 0:
        return F.zeros((M.dim, 0))
    return el.column_space(F, np.concatenate(cols, axis=1))


def projective_cover(M: SCModule, an: AlgebraAnalysis) -> Tuple[SCModule, np.ndarray]:
    """Minimal projective cover P -> M, returned with the matrix of the map."""
    A, F = M.algebra, M.algebra.field
    acc = _radical_of_module(M, an.rad)
    pieces, maps = [], []
    for e in an.idempotents:
        Ee = el.column_space(F, M.act(e)) if M.dim else F.zeros((0, 0))
        for c in range(Ee.shape[1]):
            v = Ee[:, c].reshape(-1, 1)
            if el.rank(F, np.concatenate([acc, v], axis=1)) == acc.shape[1]:
                continue
            ev = np.stack([F.matmul(a, v)[:, 0] for a in M.action], axis=1)   # a -> a.v
            # the whole submodule A.v is covered, not just v
            acc = el.column_space(F, np.concatenate([acc, ev], axis=1))
            Pk, Bk = _regular_corner(A, e)
            pieces.append(Pk)
            maps.append(F.matmul(ev, Bk))
    if not pieces:
        return SCModule(A, [F.zeros((0, 0)) for _ in range(A.dim)]), F.zeros((M.dim, 0))
    action = [el.block_diag(F, [P.action[i] for P in pieces]) for i in range(A.dim)]
    return SCModule(A, action), np.concatenate(maps, axis=1)


def syzygy_module(M: SCModule, an: AlgebraAnalysis) -> SCModule:
    P, phi = projective_cover(M, an)
    return _sub(P, el.kernel(M.algebra.field, phi) if P.dim else phi[:0, :0])


def simple_module(an: AlgebraAnalysis, i: int) -> SCModule:
    A, F = an.algebra, an.algebra.field
    P, Bk = _regular_corner(A, an.representative(i))
    R = _radical_of_module(P, an.rad)
    n = P.dim
    idx = [c - R.shape[1] for c in el.independent_columns(F, np.concatenate([R, F.eye(n)], axis=1))
           if c >= R.shape[1]]
    basis = np.concatenate([R, F.eye(n)[:, idx]], axis=1)
    act = []
    for a in P.action:
        co = el.coordinates(F, basis, F.matmul(a, basis[:, R.shape[1]:]))
        act.append(co[R.shape[1]:])
    return SCModule(A, act)


def is_projective_module(M: SCModule, an: AlgebraAnalysis) -> bool:
    P, _ = projective_cover(M, an)
    return P.dim == M.dim


def dual_module(M: SCModule, opposite: SCAlgebra) -> SCModule:
    return SCModule(opposite, [a.T.copy() for a in M.action])


def opposite_analysis(an: AlgebraAnalysis) -> AlgebraAnalysis:
    """The same radical and idempotents serve the opposite algebra."""
    op = an.algebra.opposite()
    return AlgebraAnalysis(op, an.rad, an.nilpotency, an.idempotents, an.classes, an.division_dims,
                           an.simple_dims, [list(r) for r in zip(*an.cartan)], an.cartan_det, an.center,
                           [list(r) for r in zip(*an.arrows)], an.split, an.rad_powers)


def projective_dimension_sc(M: SCModule, an: AlgebraAnalysis, bound: int, max_dim: int = 150) -> Bounded:
    """Exact projective dimension, or a lower bound once the bound (or the
    syzygy size cap) is reached: Ω^k M ≠ 0 already forces pd ≥ k."""
    F = M.algebra.field
    cur = M
    for k in range(bound):
        P, phi = projective_cover(cur, an)
        if P.dim == cur.dim:
            return Bounded(k)
        if k + 1 >= bound or P.dim - cur.dim > max_dim:
            return Bounded(k + 1, exact=False)
        cur = _sub(P, el.kernel(F, phi))
    return Bounded(bound, exact=False)


def gldim_bounded(A: SCAlgebra, bound: int, analysis: Optional[AlgebraAnalysis] = None,
                  max_dim: int = 150) -> Bounded:
    """Maximum projective dimension of the simple modules, or a lower bound."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    an = analysis or analyze(A)
    pds = [projective_dimension_sc(simple_module(an, i), an, bound, max_dim) for i in range(an.num_simples)]
    best = max((pd.value for pd in pds), default=0)
    if all(pd.exact for pd in pds):
        return Bounded(best)
    return Bounded(best, exact=False)


def domdim_sc(A: SCAlgebra, bound: int, analysis: Optional[AlgebraAnalysis] = None) -> Bounded:
    """Dominant dimension: the minimal injective coresolution of A is the
    dual of the minimal projective resolution of D(A) over the opposite algebra."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    an = analysis or analyze(A)
    op_an = opposite_analysis(an)
    cur = dual_module(SCModule.regular(A), op_an.algebra)
    for k in range(bound):
        if cur.dim == 0:
            return Bounded(bound, exact=False)
        P, phi = projective_cover(cur, op_an)
        if not is_projective_module(dual_module(P, A), an):
            return Bounded(k)
        cur = _sub(P, el.kernel(A.field, phi))
    return Bounded(bound, exact=False)


# -- comparison ----------------------------------------------------------------

def _gldim_status(an: AlgebraAnalysis) -> str:
    if an.gldim is not None and an.gldim.exact:
        return "finite"
    if an.split and any(an.loops):
        return "infinite"        # a loop forbids finite global dimension
    return "unknown"


def compare_invariants(a: SCAlgebra, b: SCAlgebra, gldim_bound: int = 10) -> dict:
    """Side-by-side derived invariants; ``mismatch`` lists the refuting ones."""
    A = analyze(a, gldim_bound)
    B = analyze(b, gldim_bound)
    rows = {
        "num_simples": [A.num_simples, B.num_simples],
        "cartan_det_abs": [abs(A.cartan_det), abs(B.cartan_det)],
        "center_dim": [A.center, B.center],
        "gldim": [A.gldim.to_json(), B.gldim.to_json()],
        "loops": [A.loops, B.loops],
        "gldim_finiteness": [_gldim_status(A), _gldim_status(B)],
    }
    mismatch = [k for k in ("num_simples", "cartan_det_abs", "center_dim") if rows[k][0] != rows[k][1]]
    fa, fb = rows["gldim_finiteness"]
    if {fa, fb} == {"finite", "infinite"}:
        mismatch.append("gldim_finiteness")
    rows["mismatch"] = mismatch
    rows["left"] = A.to_json()
    rows["right"] = B.to_json()
    return rows
