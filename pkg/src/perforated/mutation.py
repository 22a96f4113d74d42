"""Approximation sequences, the hypotheses a mutation must satisfy, the
ideals I and J, and the end-to-end mutation pipeline."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import exactlin as el
from . import homological as H
from . import reps as R
from .phi_yoneda import PhiYoneda, is_admissible, NonAdmissiblePhi, parse_phi
from .reps import HomSpace, Rep, RepMap
from .scalgebra import SCAlgebra

Summands = Union[Rep, Sequence[Rep]]


class HypothesisFailed(RuntimeError):
    def __init__(self, report: "HypothesisReport"):
        self.report = report
        super().__init__("hypotheses failed: " + ", ".join(report.reasons))


class ApproximationNotInjective(RuntimeError):
    pass


class ApproximationNotSurjective(RuntimeError):
    pass


def as_summands(m: Summands) -> List[Rep]:
    return [m] if isinstance(m, Rep) else list(m)


def total_module(m: Summands) -> Rep:
    parts = as_summands(m)
    return parts[0] if len(parts) == 1 else R.direct_sum(parts)[0]


@dataclass
class ShortExactSeq:
    X: Rep
    M1: Rep
    Y: Rep
    alpha: RepMap
    beta: RepMap

    def is_exact(self) -> bool:
        F = self.alpha.field
        if not (self.alpha.is_injective() and self.beta.is_surjective()):
            return False
        if not self.alpha.then(self.beta).is_zero():
            return False
        return self.alpha.rank() + self.beta.rank() == self.M1.dim


# -- approximations --------------------------------------------------------

def universal_left_approx(x: Rep, m: Summands) -> Tuple[Rep, RepMap, List[int]]:
    """x -> ⊕ copies of the summands of m, one copy per Hom basis element.

    Returns (M1, alpha, summand index of each copy)."""
    parts = as_summands(m)
    maps, targets, kinds = [], [], []
    for c, mc in enumerate(parts):
        for f in R.hom_basis(x, mc):
            maps.append(f)
            targets.append(mc)
            kinds.append(c)
    if not maps:
        Z = R.zero_module(x.algebra)
        return Z, RepMap.zero(x, Z), []
    U = R.direct_sum(targets)[0]
    return U, R.stack_maps(maps, x, U), kinds


def universal_right_approx(y: Rep, m: Summands) -> Tuple[Rep, RepMap, List[int]]:
    """⊕ copies of the summands of m -> y, one copy per Hom basis element."""
    parts = as_summands(m)
    maps, sources, kinds = [], [], []
    for c, mc in enumerate(parts):
        for f in R.hom_basis(mc, y):
            maps.append(f)
            sources.append(mc)
            kinds.append(c)
    if not maps:
        Z = R.zero_module(y.algebra)
        return Z, RepMap.zero(Z, y), []
    U = R.direct_sum(sources)[0]
    return U, R.sum_maps(maps, y, U), kinds


def _power(F, m: np.ndarray, k: int) -> np.ndarray:
    out = F.eye(m.shape[0])
    base = m
    while k:
        if k & 1:
            out = F.matmul(out, base)
        base = F.matmul(base, base)
        k >>= 1
    return out


def _fitting_power(g: RepMap) -> RepMap:
    F = g.field
    k = max(g.source.dim, 1)
    return RepMap(g.source, g.source, [_power(F, x, k) for x in g.mats])


def _non_nilpotent_in(E: HomSpace, N: np.ndarray, seed: int = 0, tries: int = 200) -> Optional[RepMap]:
    """A non-nilpotent endomorphism in the left ideal spanned by columns of N (coords in E),
    or None when that ideal is nilpotent."""
    F = E.source.field
    cand = [E.combine(N[:, j]) for j in range(N.shape[1])]
    for n in cand:
        if not _fitting_power(n).is_zero():
            return n
    # decide nilpotency of the ideal: iterate span(L * N) until it stops shrinking
    L = N
    for _ in range(E.source.dim + 1):
        prods = []
        for j in range(L.shape[1]):
            x = E.combine(L[:, j])
            for n in cand:
                prods.append(E.coords(x.then(n)).reshape(-1, 1))
        newL = el.column_space(F, np.concatenate(prods, axis=1)) if prods else F.zeros((E.dim, 0))
        if newL.shape[1] == 0:
            return None
        if newL.shape[1] == L.shape[1]:
            L = newL
            break
        L = newL
    rng = np.random.default_rng(seed)
    bound = F.p if F.kind == "prime" else 5
    for _ in range(tries):
        n = E.combine(F.matmul(L, F.asarray(rng.integers(0, bound, (L.shape[1], 1)).tolist()))[:, 0])
        if not _fitting_power(n).is_zero():
            return n
    raise RuntimeError("could not find a non-nilpotent element in a non-nilpotent ideal")


def minimal_right_approx(y: Rep, m: Summands) -> Tuple[Rep, RepMap]:
    """Right-minimal right add(m)-approximation M1 -> y."""
    U, beta, _ = universal_right_approx(y, m)
    F = y.field
    while not U.is_zero():
        E = HomSpace(U, U)
        if E.dim == 0:
            break
        cols = np.stack([n.then(beta).flat() for n in E.basis], axis=1)
        N = el.kernel(F, cols) if cols.shape[0] else F.eye(E.dim)
        if N.shape[1] == 0:
            break
        n = _non_nilpotent_in(E, N)
        if n is None:
            break
        U2, inc = R.kernel(_fitting_power(n))
        U, beta = U2, inc.then(beta)
    return U, beta


def minimal_left_approx(x: Rep, m: Summands) -> Tuple[Rep, RepMap]:
    """Left-minimal left add(m)-approximation x -> M1."""
    U, alpha, _ = universal_left_approx(x, m)
    F = x.field
    while not U.is_zero():
        E = HomSpace(U, U)
        if E.dim == 0:
            break
        cols = np.stack([alpha.then(n).flat() for n in E.basis], axis=1)
        N = el.kernel(F, cols) if cols.shape[0] else F.eye(E.dim)
        if N.shape[1] == 0:
            break
        n = _non_nilpotent_in(E, N)
        if n is None:
            break
        U2, inc = R.kernel(_fitting_power(n))
        # alpha lands in the kernel of the Fitting power; corestrict
        mats = [el.coordinates(F, i, a) if i.shape[1] else F.zeros((0, a.shape[1]))
                for i, a in zip(inc.mats, alpha.mats)]
        U, alpha = U2, RepMap(x, U2, mats)
    return U, alpha


def right_approx_sequence(y: Rep, m: Summands) -> ShortExactSeq:
    M1, beta = minimal_right_approx(y, m)
    if not beta.is_surjective():
        raise ApproximationNotSurjective("the add(M)-approximation of Y is not surjective")
    X, alpha = R.kernel(beta)
    return ShortExactSeq(X, M1, y, alpha, beta)


def left_approx_sequence(x: Rep, m: Summands) -> ShortExactSeq:
    M1, alpha = minimal_left_approx(x, m)
    if not alpha.is_injective():
        raise ApproximationNotInjective("the add(M)-approximation of X is not injective")
    Y, beta = R.cokernel(alpha)
    return ShortExactSeq(x, M1, Y, alpha, beta)


def is_left_phi_approx(alpha: RepMap, m: Summands, phi) -> Dict[int, bool]:
    """Ext^i(alpha, m) surjective for each i in Φ (checking each summand of m suffices)."""
    out = {}
    F = alpha.field
    for i in parse_phi(phi):
        ok = True
        for mc in as_summands(m):
            mat = H.ext_functorial(alpha, mc, i, "left")
            ok &= el.rank(F, mat) == mat.shape[0]
        out[i] = ok
    return out


def is_right_phi_approx(beta: RepMap, m: Summands, phi) -> Dict[int, bool]:
    """Ext^i(m, beta) surjective for each i in Φ."""
    out = {}
    F = beta.field
    for i in parse_phi(phi):
        ok = True
        for mc in as_summands(m):
            mat = H.ext_functorial(mc, beta, i, "right")
            ok &= el.rank(F, mat) == mat.shape[0]
        out[i] = ok
    return out


@dataclass
class AddWitness:
    """m1 is a summand of ⊕ copies: ``section`` then ``retraction`` is the identity of m1."""
    section: RepMap
    retraction: RepMap
    kinds: List[int]
    copies: List[Rep]
    injections: List[RepMap] = field(default_factory=list)
    projections: List[RepMap] = field(default_factory=list)


def check_in_add(m1: Rep, m: Summands) -> Tuple[bool, Optional[AddWitness]]:
    F = m1.field
    parts = as_summands(m)
    if m1.is_zero():
        return True, AddWitness(RepMap.zero(m1, m1), RepMap.zero(m1, m1), [], [])
    maps, kinds = [], []
    for c, mc in enumerate(parts):
        for f in R.hom_basis(mc, m1):
            maps.append(f)
            kinds.append(c)

    def solve(keep):
        if not keep:
            return None
        U, incs, projs = R.direct_sum([parts[kinds[j]] for j in keep])
        ev = R.sum_maps([maps[j] for j in keep], m1, U)
        S = HomSpace(m1, U)
        if S.dim == 0:
            return None
        cols = np.stack([s.then(ev).flat() for s in S.basis], axis=1)
        x = el.solve_right(F, cols, RepMap.identity(m1).flat().reshape(-1, 1))
        if x is None:
            return None
        return AddWitness(S.combine(x[:, 0]), ev, [kinds[j] for j in keep], [parts[kinds[j]] for j in keep],
                          incs, projs)

    keep = list(range(len(maps)))
    w = solve(keep)
    if w is None:
        return False, None
    # drop redundant copies greedily, keeping the witness small
    for j in list(keep):
        trial = [k for k in keep if k != j]
        w2 = solve(trial)
        if w2 is not None:
            keep, w = trial, w2
    return True, w


# -- hypotheses --------------------------------------------------------------

@dataclass
class HypothesisReport:
    m1_in_addM: bool
    left_approx: Dict[int, bool]
    right_approx: Dict[int, bool]
    orthogonality: Dict[int, Dict[str, int]]
    reasons: List[str] = field(default_factory=list)
    witness: Optional[AddWitness] = None

    @property
    def verdict(self) -> bool:
        return not self.reasons

    def to_json(self) -> dict:
        return {
            "m1_in_addM": self.m1_in_addM,
            "left_approx": {str(k): v for k, v in self.left_approx.items()},
            "right_approx": {str(k): v for k, v in self.right_approx.items()},
            "orthogonality": {str(k): v for k, v in self.orthogonality.items()},
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def orthogonality_table(seq: ShortExactSeq, m: Summands, degrees) -> Dict[int, Dict[str, int]]:
    M = total_module(m)
    out = {}
    for i in degrees:
        out[i] = {
            "Ext(M,X)": H.ext_dim(M, seq.X, i),
            "Ext(Y,M)": H.ext_dim(seq.Y, M, i),
            "Ext(X,M)": H.ext_dim(seq.X, M, i),
            "Ext(M,Y)": H.ext_dim(M, seq.Y, i),
        }
    return out


def check_hypotheses(seq: ShortExactSeq, m: Summands, phi) -> HypothesisReport:
    phi = parse_phi(phi)
    ok, w = is_admissible(phi)
    if not ok:
        raise NonAdmissiblePhi(phi, w)
    inadd, wit = check_in_add(seq.M1, m)
    left = is_left_phi_approx(seq.alpha, m, phi)
    right = is_right_phi_approx(seq.beta, m, phi)
    orth = orthogonality_table(seq, m, [d for d in phi if d])
    reasons = []
    if not inadd:
        reasons.append("M1 not in add(M)")
    for d, good in left.items():
        if not good:
            reasons.append(f"left approximation fails in degree {d}: Ext^{d}(M1,M) -> Ext^{d}(X,M) not onto")
    for d, good in right.items():
        if not good:
            extra = ""
            if d and orth[d]["Ext(M,Y)"]:
                extra = f" [dim Ext^{d}(M,Y) = {orth[d]['Ext(M,Y)']}, dim Ext^{d}(M,M1) = " \
                        f"{H.ext_dim(total_module(m), seq.M1, d)}]"
            reasons.append(f"right approximation fails in degree {d}: Ext^{d}(M,M1) -> Ext^{d}(M,Y) not onto" + extra)
    for d, row in orth.items():
        if row["Ext(M,X)"]:
            reasons.append(f"orthogonality: Ext^{d}(M,X) != 0")
        if row["Ext(Y,M)"]:
            reasons.append(f"orthogonality: Ext^{d}(Y,M) != 0")
    return HypothesisReport(inadd, left, right, orth, reasons, wit)


# -- ideals ------------------------------------------------------------------

@dataclass
class IdealBasis:
    ambient: SCAlgebra
    basis: np.ndarray   # columns

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def is_two_sided(self) -> bool:
        A, F = self.ambient, self.ambient.field
        if self.dim == 0:
            return True
        cols = []
        for j in range(self.dim):
            x = self.basis[:, j]
            for i in range(A.dim):
                b = A.basis_vector(i)
                cols.append(A.multiply(b, x))
                cols.append(A.multiply(x, b))
        big = np.concatenate([self.basis, np.stack(cols, axis=1)], axis=1)
        return el.rank(F, big) == self.dim


def degree_zero_basis(A: SCAlgebra) -> List[int]:
    return [i for i, d in enumerate(A.grading) if d == 0]


def _check_idempotent(A: SCAlgebra, e: np.ndarray):
    if not A.is_idempotent(e):
        raise ValueError("not an idempotent")


def compute_ideal_I(lam: SCAlgebra, f: np.ndarray) -> IdealBasis:
    """I = {x in Λ0 f Λ0 : x Λ0 f = 0}, inside the degree-0 part."""
    _check_idempotent(lam, f)
    F = lam.field
    zero = degree_zero_basis(lam)
    gens = []
    for a in zero:
        af = lam.multiply(lam.basis_vector(a), f)
        for b in zero:
            gens.append(lam.multiply(af, lam.basis_vector(b)))
    S = el.column_space(F, np.stack(gens, axis=1)) if gens else F.zeros((lam.dim, 0))
    # x * (b f) = 0 for all degree-0 basis b
    conds = [F.matmul(lam.right_matrix(lam.multiply(lam.basis_vector(b), f)), S) for b in zero]
    return _restricted(lam, S, conds)


def compute_ideal_J(gam: SCAlgebra, e: np.ndarray) -> IdealBasis:
    """J = {x in Γ0 e Γ0 : e Γ0 x = 0}, inside the degree-0 part."""
    _check_idempotent(gam, e)
    F = gam.field
    zero = degree_zero_basis(gam)
    gens = []
    for a in zero:
        ae = gam.multiply(gam.basis_vector(a), e)
        for b in zero:
            gens.append(gam.multiply(ae, gam.basis_vector(b)))
    S = el.column_space(F, np.stack(gens, axis=1)) if gens else F.zeros((gam.dim, 0))
    conds = [F.matmul(gam.left_matrix(gam.multiply(e, gam.basis_vector(b))), S) for b in zero]
    return _restricted(gam, S, conds)


def _restricted(A: SCAlgebra, S: np.ndarray, conds) -> IdealBasis:
    F = A.field
    if S.shape[1] == 0:
        return IdealBasis(A, S)
    K = el.kernel(F, np.concatenate(conds, axis=0))
    return IdealBasis(A, el.column_space(F, F.matmul(S, K)) if K.shape[1] else F.zeros((A.dim, 0)))


# -- pipeline ----------------------------------------------------------------

@dataclass
class MutationReport:
    direction: str
    phi: Tuple[int, ...]
    sequence: ShortExactSeq
    hypotheses: HypothesisReport
    lam: Optional[PhiYoneda] = None
    gam: Optional[PhiYoneda] = None
    ideal_I: Optional[IdealBasis] = None
    ideal_J: Optional[IdealBasis] = None
    certificate: Optional[dict] = None
    equivalence: Optional[object] = None        # tilting.Certificate with End(T) and Θ
    invariants: Optional[dict] = None
    reasons: List[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "PASS" if not self.reasons else "FAIL"

    def to_json(self) -> dict:
        s = self.sequence
        return {
            "direction": self.direction,
            "phi": list(self.phi),
            "modules": {"X": list(s.X.dims), "M1": list(s.M1.dims), "Y": list(s.Y.dims)},
            "hypotheses": self.hypotheses.to_json(),
            "dims": {
                "Lambda": self.lam.dim if self.lam is not None else None,
                "Gamma": self.gam.dim if self.gam is not None else None,
                "I": self.ideal_I.dim if self.ideal_I is not None else None,
                "J": self.ideal_J.dim if self.ideal_J is not None else None,
            },
            "certificate": self.certificate,
            "invariants": self.invariants,
            "verdict": self.verdict,
            "reasons": list(self.reasons),
        }


def mutate(start: Rep, m: Summands, phi, direction: str = "right", force: bool = False,
           gldim_bound: int = 10, raise_on_failure: bool = False) -> MutationReport:
    """Run the mutation pipeline.

    direction="left": ``start`` is X, Y is the cokernel of a minimal left approximation.
    direction="right": ``start`` is Y, X is the kernel of a minimal right approximation.
    """
    from . import invariants as inv
    from . import tilting as T

    phi = parse_phi(phi)
    ok, w = is_admissible(phi)
    if not ok:
        raise NonAdmissiblePhi(phi, w)
    parts = as_summands(m)
    if direction == "left":
        seq = left_approx_sequence(start, parts)
    elif direction == "right":
        seq = right_approx_sequence(start, parts)
    else:
        raise ValueError("direction must be 'left' or 'right'")
    hyp = check_hypotheses(seq, parts, phi)
    report = MutationReport(direction, phi, seq, hyp)
    report.reasons.extend(hyp.reasons)
    if not hyp.verdict and not force:
        if raise_on_failure:
            raise HypothesisFailed(hyp)
        return report
    if seq.X.is_zero() or seq.Y.is_zero():
        report.reasons.append("degenerate sequence (X or Y is zero)")
        return report

    mnames = [f"M.{c + 1}" for c in range(len(parts))]
    lam = PhiYoneda([("X", seq.X)] + list(zip(mnames, parts)), phi)
    gam = PhiYoneda(list(zip(mnames, parts)) + [("Y", seq.Y)], phi)
    report.lam, report.gam = lam, gam
    report.ideal_I = compute_ideal_I(lam, lam.summand_idempotent(mnames))
    report.ideal_J = compute_ideal_J(gam, gam.summand_idempotent(mnames))
    if report.ideal_I.dim or report.ideal_J.dim:
        report.reasons.append("ideals I, J are not zero")
    if hyp.witness is None:
        report.reasons.append("no add(M) witness for M1; tilting complex not built")
        return report
    cert = T.verify_equivalence(lam, gam, seq, hyp.witness, parts)
    report.certificate = cert.to_json()
    report.equivalence = cert
    if cert.verdict != "PASS":
        report.reasons.extend(cert.reasons)
    table = inv.compare_invariants(lam, gam, gldim_bound=gldim_bound)
    report.invariants = table
    if table["mismatch"] and report.verdict == "PASS":
        report.reasons.append("derived invariants differ: " + ", ".join(table["mismatch"]))
    return report
