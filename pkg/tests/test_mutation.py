import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from helpers import algebra, random_module
from perforated import homological as H
from perforated import mutation as MU
from perforated import reps as R
from perforated.exactlin import FieldSpec
from perforated.phi_yoneda import NonAdmissiblePhi
from perforated.scalgebra import SCAlgebra, direct_product


def test_universal_left_approx_trivial_cases(ex1, a4):
    m = ex1["M"][0]
    seq = MU.left_approx_sequence(m, [m])
    assert seq.Y.is_zero() and seq.alpha.is_iso()
    M1, alpha, kinds = MU.universal_left_approx(m, [m])
    assert len(kinds) == R.hom_dim(m, m) and alpha.is_injective()
    s1 = R.simple(a4, 0)
    M1, alpha, kinds = MU.universal_left_approx(s1, [R.simple(a4, 1)])
    assert M1.is_zero() and not kinds


def test_example1_left_sequence(ex1):
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    assert seq.is_exact() and seq.alpha.is_injective()
    assert seq.Y.dims == ex1["Y"].dims and R.is_isomorphic(seq.Y, ex1["Y"])
    assert seq.M1.dims == ex1["Mt"].dims


def test_example1_right_sequence(ex1):
    seq = MU.right_approx_sequence(ex1["Y"], ex1["M"])
    assert seq.is_exact()
    assert R.is_isomorphic(seq.X, ex1["X"])


def test_minimal_right_approx_trivial(ex1, a4):
    y = ex1["M"][1]
    M1, beta = MU.minimal_right_approx(y, ex1["M"])
    assert beta.is_iso()
    M1, beta = MU.minimal_right_approx(R.simple(a4, 0), [R.simple(a4, 2)])
    assert M1.is_zero()


def test_example1_phi_approximations(ex1):
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    assert MU.is_left_phi_approx(seq.alpha, ex1["M"], [0, 1]) == {0: True, 1: True}
    assert MU.is_right_phi_approx(seq.beta, ex1["M"], [0, 1]) == {0: True, 1: True}


def test_checking_summands_equals_checking_the_sum(ex1):
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    doubled = ex1["M"] + ex1["M"]
    for phi in ([0, 1], [0, 2], [0, 1, 2]):
        assert MU.is_left_phi_approx(seq.alpha, ex1["M"], phi) == MU.is_left_phi_approx(seq.alpha, doubled, phi)
        assert MU.is_left_phi_approx(seq.alpha, ex1["M"], phi) == MU.is_left_phi_approx(seq.alpha, [ex1["Mt"]], phi)


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(st.integers(0, 10_000))
def test_universal_approx_is_degree_zero_approx(seed):
    A = algebra("nakayama_a3")
    rng = np.random.default_rng(seed)
    x, m = random_module(A, rng), random_module(A, rng)
    _, alpha, _ = MU.universal_left_approx(x, [m])
    assert MU.is_left_phi_approx(alpha, [m], [0])[0]
    _, beta, _ = MU.universal_right_approx(x, [m])
    assert MU.is_right_phi_approx(beta, [m], [0])[0]


def test_check_in_add(ex1, a4):
    m = ex1["M"][0]
    ok, w = MU.check_in_add(R.direct_sum([m, m])[0], [m])
    assert ok and w.section.then(w.retraction).is_iso()
    ok, _ = MU.check_in_add(R.simple(a4, 0), ex1["M"])
    assert not ok
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    ok, w = MU.check_in_add(seq.M1, ex1["M"])
    assert ok
    ident = w.section.then(w.retraction)
    assert np.array_equal(ident.flat(), R.RepMap.identity(seq.M1).flat())


def test_hypotheses_example1(ex1):
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    rep = MU.check_hypotheses(seq, ex1["M"], [0, 1])
    assert rep.verdict and rep.m1_in_addM
    assert rep.orthogonality[1]["Ext(M,X)"] == 0 and rep.orthogonality[1]["Ext(Y,M)"] == 0


def test_hypotheses_example2_fail_at_ext1_m_y(ex2):
    seq = MU.right_approx_sequence(ex2["Y"], ex2["M"])
    rep = MU.check_hypotheses(seq, ex2["M"], [0, 1])
    assert not rep.verdict
    assert rep.orthogonality[1]["Ext(M,Y)"] != 0
    assert rep.right_approx == {0: True, 1: False}
    assert rep.left_approx == {0: True, 1: True}
    assert len(rep.reasons) == 1 and "Ext^1(M,Y)" in rep.reasons[0]


def test_syzygy_sequence_over_self_injective(a4):
    regular = [R.projective(a4, v) for v in range(3)]
    seq = MU.right_approx_sequence(R.simple(a4, 0), regular)
    assert R.is_isomorphic(seq.X, R.syzygy(1, R.simple(a4, 0)))
    assert MU.check_hypotheses(seq, regular, [0, 1, 2]).verdict


def test_non_admissible_refused(ex1):
    seq = MU.left_approx_sequence(ex1["X"], ex1["M"])
    with pytest.raises(NonAdmissiblePhi):
        MU.check_hypotheses(seq, ex1["M"], [0, 1, 2, 4])
    with pytest.raises(NonAdmissiblePhi):
        MU.mutate(ex1["X"], ex1["M"], [0, 1, 2, 4], "left")


def _kk():
    F = FieldSpec.gf(3)
    t = F.zeros((1, 1, 1))
    t[0, 0, 0] = 1
    k = SCAlgebra(F, t, F.asarray([1]))
    return direct_product([k, k])


def test_ideal_in_semisimple_product_vanishes():
    A = _kk()
    e = A.basis_vector(0)
    assert MU.compute_ideal_J(A, e).dim == 0
    assert MU.compute_ideal_I(A, e).dim == 0
    with pytest.raises(ValueError):
        MU.compute_ideal_J(A, A.field.asarray([2, 0]))


def test_example1_ideals(ex1_report):
    r = ex1_report
    assert r.ideal_I.dim == 0 and r.ideal_J.dim == 0
    assert r.ideal_I.is_two_sided() and r.ideal_J.is_two_sided()


def test_ext_of_end_terms_agree_under_hypotheses(ex1_report):
    s = ex1_report.sequence
    for i in (1, 2):
        assert H.ext_dim(s.X, s.X, i) == H.ext_dim(s.Y, s.Y, i)


def test_mutate_example2_raises(ex2):
    with pytest.raises(MU.HypothesisFailed):
        MU.mutate(ex2["Y"], ex2["M"], [0, 1], "right", raise_on_failure=True)
    r = MU.mutate(ex2["Y"], ex2["M"], [0, 1], "right")
    assert r.verdict == "FAIL" and r.lam is None


def test_mutate_syzygy_dual_numbers(dual_numbers):
    k = R.simple(dual_numbers, 0)
    r = MU.mutate(k, [R.projective(dual_numbers, 0)], [0, 1], "left")
    assert r.verdict == "PASS"
    assert R.is_isomorphic(r.sequence.Y, k)
    assert r.lam.dim == r.gam.dim


def test_mutate_bad_direction(ex1):
    with pytest.raises(ValueError):
        MU.mutate(ex1["X"], ex1["M"], [0], "sideways")


def test_report_json(ex1_report):
    obj = ex1_report.to_json()
    assert obj["verdict"] == "PASS"
    assert obj["dims"] == {"Lambda": 33, "Gamma": 21, "I": 0, "J": 0}
    assert obj["modules"]["X"] == [3, 2, 2] and obj["modules"]["M1"] == [4, 3, 3]
    assert obj["hypotheses"]["verdict"] is True
