"""Shared builders and independent oracles for the test-suite."""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import sympy

import perforated
from perforated import reps as R
from perforated.path_algebra import load_algebra

DATA = Path(perforated.__file__).parent / "data"


def algebra(name: str):
    return load_algebra(DATA / f"{name}.json")


def algebra_json(name: str) -> dict:
    return json.loads((DATA / f"{name}.json").read_text(encoding="utf-8"))


def example1_modules(A):
    """M = Ω²(k) ⊕ Ω²(ω̄), X = Ω³(ω), Y = Ω(ω) with ω, ω̄, k at vertices 1, 2, 3."""
    w, wb, k = (R.simple(A, v) for v in range(3))
    return [R.syzygy(2, k), R.syzygy(2, wb)], R.syzygy(3, w), R.syzygy(1, w)


def example2_modules(A):
    M = [R.parse_module(A, "quotient(P(2),1)"), R.parse_module(A, "quotient(P(2),2)")]
    return M, R.parse_module(A, "P(2)"), R.parse_module(A, "S(2)")


def random_module(A, rng, max_gens: int = 2):
    """Quotient of a sum of projectives by a submodule generated by random elements."""
    F = A.field
    verts = [int(v) for v in rng.integers(0, A.num_vertices, size=int(rng.integers(1, 3)))]
    P = R.projective_sum(A, verts)
    gens = []
    for _ in range(int(rng.integers(0, max_gens + 1))):
        v = int(rng.integers(0, A.num_vertices))
        if P.dims[v] == 0:
            continue
        vec = F.asarray([int(c) for c in rng.integers(0, max(2, min(F.characteristic or 3, 3)), size=P.dims[v])])
        gens.append((v, vec))
    if not gens:
        return P
    _, inc = R.generated_submodule(P, gens)
    return R.cokernel(inc)[0]


# -- oracles that share no code with the package ---------------------------------

def gf_rank(rows, p: int) -> int:
    """Plain Gaussian elimination over GF(p) on lists of ints."""
    m = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        m[rank] = [x * inv % p for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [(a - c * b) % p for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def cofactor_det(m) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * cofactor_det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(n) if m[0][j])


def graded_dim(obj: dict, max_len: int = 8) -> int:
    """dim kQ/I for homogeneous relations, counted degree by degree from the raw JSON.

    Paths of each length minus the rank of the ideal in that length; stops at the
    first length where nothing survives.
    """
    arrows = {a["name"]: (a["from"], a["to"]) for a in obj["quiver"].get("arrows", [])}
    rels = [{tuple(t["path"]): Fraction(t["coeff"]) for t in r} for r in obj.get("relations", [])]
    p = obj["field"].get("p") if obj["field"]["kind"] == "prime" else None

    def paths(length):
        if length == 0:
            return [()]
        return [w for w in itertools.product(arrows, repeat=length)
                if all(arrows[w[i]][1] == arrows[w[i + 1]][0] for i in range(length - 1))]

    def joins(u, w):
        return not u or not w or arrows[u[-1]][1] == arrows[w[0]][0]

    def rank(rows):
        if not rows:
            return 0
        if p:
            return gf_rank([[int(x.numerator * pow(x.denominator, -1, p)) for x in r] for r in rows], p)
        return sympy.Matrix(rows).rank()

    total = len(obj["quiver"]["vertices"])
    for length in range(1, max_len + 1):
        ps = paths(length)
        idx = {w: i for i, w in enumerate(ps)}
        rows = []
        for rel in rels:
            rl = len(next(iter(rel)))
            for a in range(length - rl + 1):
                for u in paths(a):
                    for v in paths(length - rl - a):
                        row = [Fraction(0)] * len(ps)
                        for w, c in rel.items():
                            if joins(u, w) and joins(w, v):
                                row[idx[u + w + v]] += c
                        if any(row):
                            rows.append(row)
        surviving = len(ps) - rank(rows)
        if surviving == 0:
            return total
        total += surviving
    raise AssertionError("oracle did not terminate; raise max_len")


def brute_hom_dim_gf2(m, n) -> int:
    """Count intertwiners over GF(2) by enumeration; returns log2 of the count."""
    A = m.algebra
    shapes = [(n.dims[v], m.dims[v]) for v in range(A.num_vertices)]
    sizes = [a * b for a, b in shapes]
    count = 0
    for bits in itertools.product((0, 1), repeat=sum(sizes)):
        mats, o = [], 0
        for (a, b), s in zip(shapes, sizes):
            mats.append(np.array(bits[o:o + s], dtype=np.int64).reshape(a, b))
            o += s
        ok = True
        for ai, arrow in enumerate(A.quiver.arrows):
            u, w = A.arrow_source(ai), A.arrow_target(ai)
            if np.any((mats[w] @ m.maps[ai] - n.maps[ai] @ mats[u]) % 2):
                ok = False
                break
        count += ok
    return count.bit_length() - 1


def admissible_oracle(phi) -> bool:
    s = set(phi)
    return all(((i + j) in s) == ((j + k) in s)
               for i in s for j in s for k in s if i + j + k in s)
