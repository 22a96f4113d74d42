"""Left mutation over the mod-2 group algebra of A4, with Φ = {0, 1}.

Run:  python3 demos/a4_mutation.py
"""
from pathlib import Path

import perforated
from perforated import homological as H
from perforated import mutation as MU
from perforated import reps as R
from perforated.path_algebra import load_algebra

A = load_algebra(Path(perforated.__file__).parent / "data" / "a4_char2.json")
print("algebra dim:", A.dim)

w, wb, k = (R.simple(A, v) for v in range(3))
M = [R.syzygy(2, k), R.syzygy(2, wb)]
X = R.syzygy(3, w)
for name, m in [("M.1", M[0]), ("M.2", M[1]), ("X", X)]:
    print(f"{name:4s} dim vector {m.dims}")

Mt = MU.total_module(M)
print("Ext^1(M,M) =", H.ext_dim(Mt, Mt, 1), " Ext^1(M,X) =", H.ext_dim(Mt, X, 1))

report = MU.mutate(X, M, [0, 1], "left")
print("Y dim vector", report.sequence.Y.dims)
print("Λ dim", report.lam.dim, " Γ dim", report.gam.dim)
print("verdict:", report.verdict)
table = dict(report.invariants)
mismatch = table.pop("mismatch")
for k in ("left", "right"):
    table.pop(k)
for key, (a, b) in table.items():
    print(f"  {key:20s} {a!s:>10} {b!s:>10}")
print("refuting invariants:", mismatch or "none")
