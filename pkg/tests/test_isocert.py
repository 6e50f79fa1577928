import pytest

from matpres.freealg import parse_poly
from matpres.isocert import (BUDGET, CERTIFIED, FAILED, NOT_CERTIFIED, VERIFIED, certify_isomorphism, in_span,
                             lemma1_erratum_witness, matrix_units, verify_lemma1, verify_matrix_unit_relations,
                             verify_modN, verify_span_closure, verify_units_and_basis)
from matpres.matrep import Matrix, eval_poly, shift_assignment
from matpres.presentations import Presentation, kassabov
from matpres.replay import replay_certificate
from matpres.rewrite import normal_form
from matpres.rings import ZZ, IntegerModRing


def P(s, ring=ZZ):
    return parse_poly(s, ("x", "y"), ring)


def test_matrix_unit_examples():
    a2 = matrix_units(2)
    assert a2(0, 0) == P("1 - y*x") and a2(0, 1) == P("x - y*x^2")
    assert eval_poly(a2(0, 0), shift_assignment(2)) == Matrix.unit(2, 0, 0)
    assert eval_poly(a2(0, 1), shift_assignment(2)) == Matrix.unit(2, 0, 1)
    a3 = matrix_units(3)
    assert a3(2, 2) == P("y^2*x^2 - y^3*x^3")
    assert eval_poly(a3(2, 2), shift_assignment(3)) == Matrix.unit(3, 2, 2)
    assert a3(3, 0).is_zero() and a3(0, -1).is_zero()
    with pytest.raises(ValueError):
        matrix_units(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_units_evaluate_to_elementary(n):
    a, s = matrix_units(n), shift_assignment(n)
    for i in range(n):
        for j in range(n):
            assert eval_poly(a(i, j), s) == Matrix.unit(n, i, j)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_units_and_basis(n):
    assert verify_units_and_basis(n).verdict == VERIFIED
    assert verify_units_and_basis(n, IntegerModRing(5)).verdict == VERIFIED


@pytest.mark.parametrize("n,k,l,m,nf", [(2, 1, 1, 1, "x"), (3, 1, 2, 2, "y*x^2"), (3, 2, 1, 1, "x^2")])
def test_lemma1_examples(n, k, l, m, nf):
    assert normal_form(P(f"x^{k}*y^{l}*x^{m}"), kassabov(n).rewrite_system()) == P(nf)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lemma1(n):
    rep = verify_lemma1(n)
    assert rep.verdict == VERIFIED
    assert rep.instances and all(i["verdict"] == VERIFIED for i in rep.instances)
    # both the identity and its sigma image are traced
    assert any(t.system == "sigma.K" for t in rep.traces)


def test_lemma1_erratum():
    w = lemma1_erratum_witness(3)
    assert (w["k"], w["l"], w["m"]) == (1, 2, 2)
    rep = verify_lemma1(3)
    assert rep.errata and rep.errata[0]["witness"] == {"n": 3, "k": 1, "l": 2, "m": 2}
    assert rep.errata[0]["normal_form"] == "y*x^2"
    assert lemma1_erratum_witness(2) is not None


def test_lemma1_budget():
    assert verify_lemma1(3, 3, budget=1).verdict == BUDGET


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_span_closure(n):
    rep = verify_span_closure(n)
    assert rep.verdict == VERIFIED and len(rep.traces) == 4 * n * n
    assert all(in_span(t.trace.end, n) for t in rep.traces)


def test_span_closure_examples():
    K2, K3 = kassabov(2).rewrite_system(), kassabov(3).rewrite_system()
    assert normal_form(P("x*y*x"), K2) == P("x")
    # x*y^2*x = (xy)yx = yx - y^2 x^2 y x = yx - y^2 x^2; the shift matrices agree (e11)
    assert normal_form(P("x*y^2*x"), K3) == P("y*x - y^2*x^2")
    assert eval_poly(P("x*y^2*x"), shift_assignment(3)) == Matrix.unit(3, 1, 1)
    assert normal_form(P("y*x*y"), K2) == P("y")


def test_lemma2_erratum_recorded():
    rep = verify_span_closure(3)
    assert rep.errata and rep.errata[0]["witness"]["i"] >= 1


@pytest.mark.parametrize("n", [2, 3])
def test_matrix_unit_relations(n):
    rep, mirror = verify_matrix_unit_relations(n)
    assert rep.verdict == VERIFIED and mirror.verdict == VERIFIED
    # all n^4 products present
    assert sum(1 for i in rep.instances if "product" in str(i["instance"])) >= n ** 4


def test_matrix_unit_examples():
    K2, K3 = kassabov(2).rewrite_system(), kassabov(3).rewrite_system()
    a2, a3 = matrix_units(2), matrix_units(3)
    assert normal_form(a2(0, 0) * P("y"), K2).is_zero()
    assert normal_form(a2(0, 1) * a2(1, 0) - a2(0, 0), K2).is_zero()
    assert normal_form(a3(0, 0) + a3(1, 1) + a3(2, 2) - P("1"), K3).is_zero()


@pytest.mark.parametrize("n", [2, 3, 5])
def test_certify(n):
    cert = certify_isomorphism(n)
    assert cert.verdict == CERTIFIED and not cert.failing()
    names = [c.name for c in cert.components]
    for required in ("relations_at_shift", "generation", "span_closure", "matrix_units", "basis_correspondence"):
        assert required in names


def test_certificate_replays():
    cert = certify_isomorphism(3)
    rep = replay_certificate(cert.to_json(include_traces=True))
    assert rep.ok and len(rep.results) == len(cert.traces())


def test_certify_sabotage():
    pr = Presentation(ZZ, ("x", "y"), (P("x^2"), P("y^2"), P("x*y - 1")), "sabotage",
                      leads=((0, 0), (1, 1), (0, 1)))
    cert = certify_isomorphism(2, budget=10_000, presentation=pr)
    assert cert.verdict == NOT_CERTIFIED
    assert "relations_at_shift" in cert.failing() and "span_closure" in cert.failing()


def test_certify_budget_starved():
    cert = certify_isomorphism(3, budget=5)
    assert cert.verdict == BUDGET
    assert all(c.verdict != FAILED for c in cert.components)


def test_certify_jobs_same_verdict():
    a = certify_isomorphism(2).to_json(include_traces=True)
    b = certify_isomorphism(2, jobs=2).to_json(include_traces=True)
    assert a["traces"] == b["traces"] and a["components"] == b["components"]


@pytest.mark.parametrize("n,N", [(2, 3), (3, 2), (2, 6)])
def test_modN(n, N):
    cert = verify_modN(n, N)
    assert cert.verdict == CERTIFIED and cert.modulus == N
    assert replay_certificate(cert.to_json(include_traces=True)).ok


def test_modN_display():
    cert = verify_modN(2, 3)
    js = cert.to_json(include_traces=True)
    disp = next(t for t in js["traces"] if t["label"].startswith("sum a[i][i]"))
    assert disp["expect"] == "-3*y*x"
    labels = {t["label"] for t in js["traces"]}
    assert {"N*1 -> 0", "N*a[1][1] -> 0", "N*x^(n-1) -> 0"} <= labels


def test_modN_relations_over_zn():
    from matpres.matrep import check_relations
    from matpres.presentations import kassabov_mod
    pr = kassabov_mod(2, 6)
    R = IntegerModRing(6)
    rels = tuple(r.change_ring(R) for r in pr.relations)
    assert check_relations(Presentation(R, pr.names, rels), shift_assignment(2, R)).ok


def test_modN_errors():
    with pytest.raises(ValueError):
        verify_modN(2, 1)
    with pytest.raises(ValueError):
        certify_isomorphism(1)
