"""A right approximation sequence that is not split by Hom(M, -) in degree 1.

The pipeline reports the failed hypothesis; forcing it shows that
End(X ⊕ M) and the perforated algebra of M ⊕ Y differ.

Run:  python3 demos/failed_hypothesis.py
"""
from pathlib import Path

import perforated
from perforated import mutation as MU
from perforated import reps as R
from perforated.path_algebra import load_algebra

A = load_algebra(Path(perforated.__file__).parent / "data" / "small.json")
M = [R.parse_module(A, "quotient(P(2),1)"), R.parse_module(A, "quotient(P(2),2)")]
Y = R.parse_module(A, "S(2)")

seq = MU.right_approx_sequence(Y, M)
print("X dim vector", seq.X.dims, " M1 dim vector", seq.M1.dims)
hyp = MU.check_hypotheses(seq, M, [0, 1])
for reason in hyp.reasons:
    print("hypothesis failed:", reason)

forced = MU.mutate(Y, M, [0, 1], "right", force=True)
print("forced verdict:", forced.verdict)
for reason in forced.reasons:
    print("  ", reason)
print("gldim finiteness:", forced.invariants.get("gldim_finiteness"))
