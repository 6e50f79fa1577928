import random

import pytest
from hypothesis import given, settings, strategies as st

from matpres.freealg import FreePoly, parse_poly, sigma
from matpres.matrep import eval_poly, shift_assignment
from matpres.presentations import guralnick, kassabov
from matpres.replay import RuleTable, replay_text
from matpres.rewrite import (BudgetExceeded, NonMonicLeadingTerm, RewriteRule, RewriteSystem, RuleCapExceeded,
                             TrivialQuotient,
                             build_trace, check_local_confluence, complete, critical_pairs, find_redex,
                             irreducible_words, join_witness, normal_form, normalize)
from matpres.rings import ZZ, IntegerModRing

from .strategies import polys

X, Y = 0, 1


def P(s, ring=ZZ):
    return parse_poly(s, ("x", "y"), ring)


def K(n):
    return kassabov(n).rewrite_system()


def system(rules, ring=ZZ):
    return RewriteSystem([RewriteRule(P(l, ring).leading_word(), P(r, ring), str(i + 1))
                          for i, (l, r) in enumerate(rules)], ring)


def test_kassabov_rules():
    s = K(3)
    assert [s.format_rule(r) for r in s] == ["x^3 -> 0", "y^3 -> 0", "x*y -> -y^2*x^2 + 1"]
    assert all(r.is_reduced() for r in s)


def test_find_redex_examples():
    s = K(2)
    w, pos, rule = find_redex(P("x*y"), s)
    assert (w, pos, rule.id) == ((X, Y), 0, "3")
    assert find_redex(P("1 - y*x"), s) is None
    w, pos, rule = find_redex(P("x^3 + x*y"), s)
    assert (w, pos, rule.id) == ((X, X, X), 0, "1")


@pytest.mark.parametrize("n,src,dst", [
    (2, "x*y*x", "x"),
    (3, "x*y^2*x^2", "y*x^2"),
    (2, "x^2", "0"),
    (5, "x^5", "0"),
])
def test_normalize_examples(n, src, dst):
    q, tr = normalize(P(src), K(n))
    assert q == P(dst)
    assert tr.start == P(src) and tr.end == q


def test_zero_budget():
    with pytest.raises(BudgetExceeded) as e:
        normalize(P("x*y"), K(2), budget=0)
    assert e.value.trace.end == P("x*y") and len(e.value.trace) == 0
    # already normal: no step needed, so budget 0 succeeds
    assert normalize(P("y*x"), K(2), budget=0)[0] == P("y*x")
    with pytest.raises(ValueError):
        normalize(P("x"), K(2), budget=-1)


def test_partial_trace_on_budget():
    with pytest.raises(BudgetExceeded) as e:
        normalize(P("x*y^2*x^2"), K(3), budget=2)
    tr = e.value.trace
    assert len(tr) == 2
    assert build_trace(tr.start, tr.specs(), K(3)).end == tr.end


def test_rule_validation():
    with pytest.raises(ValueError):
        RewriteRule((), P("1"), "a")
    r = RewriteRule((X,), P("1"), "a")
    with pytest.raises(ValueError):
        RewriteSystem([r, r], ZZ)
    with pytest.raises(NonMonicLeadingTerm):
        RewriteSystem.from_relations([P("2*x - 1")])
    # over Z/5 the coefficient 2 is a unit
    s = RewriteSystem.from_relations([P("2*x - 1", IntegerModRing(5))])
    assert s.rules[0].rhs == P("3", IntegerModRing(5))


def test_unreduced_rule_reported():
    assert not RewriteRule((X,), P("x*y"), "a").is_reduced()


@pytest.mark.parametrize("rules,words", [
    ([("x^2", "0"), ("y^2", "0"), ("x*y", "1 - y*x")], {"x^3", "y^3", "x^2*y", "x*y^2"}),
    ([("x*y", "0")], set()),
    ([("x^2", "0")], {"x^3"}),
])
def test_critical_pair_examples(rules, words):
    cps = critical_pairs(system(rules))
    assert len(cps) == len(words)
    assert {FreePoly({cp.word: 1}).format(("x", "y")) for cp in cps} == words


def test_inclusion_pair():
    cps = critical_pairs(system([("x*y*x", "0"), ("y", "x")]))
    kinds = {cp.kind for cp in cps}
    assert "inclusion" in kinds


@pytest.mark.parametrize("n", [2, 3, 4])
def test_kassabov_locally_confluent(n):
    rep = check_local_confluence(K(n))
    assert rep.all_joined and rep.summary()["joined"] == len(critical_pairs(K(n)))


def test_not_joined_example():
    s = system([("x*y", "1"), ("y*x", "0")])
    rep = check_local_confluence(s)
    bad = [o for o in rep.outcomes if o.status == "not-joined"]
    at = {FreePoly({o.pair.word: 1}).format(("x", "y")): o for o in bad}
    assert "x*y*x" in at
    o = at["x*y*x"]
    assert {o.normal_a, o.normal_b} == {P("x"), P("0")}


def test_budget_exceeded_pairs():
    rep = check_local_confluence(K(3), budget=0)
    assert rep.summary()["budget-exceeded"] > 0 and not rep.all_joined


def test_branch_traces_replay():
    s = K(2)
    table = RuleTable.from_json(s.to_dict())
    for o in check_local_confluence(s).outcomes:
        ta, tb = o.branch_traces(s)
        assert ta.end == tb.end
        for t in (ta, tb):
            replay_text(t.to_text(s), table)


def test_complete_guralnick():
    for p, size in ((2, 16), (3, 19683)):
        pr = guralnick(p)
        done = complete(pr.rewrite_system(), letter_order=pr.letter_order)
        words, finite = irreducible_words(done, 3 * p)
        assert finite and p ** len(words) == size
    done = complete(guralnick(2).rewrite_system(), letter_order=(Y, X))
    words, _ = irreducible_words(done, 6)
    assert {FreePoly({w: 1}).format(("x", "y")) for w in words} == {"1", "x", "y", "y*x"}


def test_complete_confluent_unchanged():
    assert complete(K(2)).same_rules(K(2))
    s = system([("x^2", "x + 1")])
    assert complete(s).same_rules(s)
    assert normal_form(P("x^3 + x^2"), s) == P("3*x + 2")


def test_complete_adds_rules_and_caps():
    # x = (xy)x = x(yx) = 0 and then 1 = xy = 0
    with pytest.raises(TrivialQuotient):
        complete(system([("x*y", "1"), ("y*x", "0")]))
    s = system([("x*y*x", "y")])
    done = complete(s, max_rules=10)
    assert len(done) > 1 and check_local_confluence(done).all_joined
    with pytest.raises(RuleCapExceeded):
        complete(s, max_rules=1)


def test_complete_non_monic():
    s = system([("x*y", "2"), ("y*x", "0")])
    with pytest.raises(NonMonicLeadingTerm):
        complete(s)


def _random_poly(rng, n):
    terms = {}
    for _ in range(rng.randint(1, 4)):
        w = tuple(rng.randint(0, 1) for _ in range(rng.randint(0, 2 * n + 2)))
        terms[w] = rng.randint(-4, 4)
    return FreePoly(terms)


def test_trace_replay_soundness_1000():
    rng = random.Random(20261018)
    systems = {n: (K(n), RuleTable.from_json(K(n).to_dict())) for n in (2, 3, 4)}
    checked = 0
    for _ in range(1000):
        n = rng.choice((2, 3, 4))
        s, table = systems[n]
        p = _random_poly(rng, n)
        q, tr = normalize(p, s)
        steps, end = replay_text(tr.to_text(s), table)
        assert steps == len(tr) and end == q
        checked += 1
    assert checked == 1000


def test_replay_of_handbuilt_trace_over_zn():
    R = IntegerModRing(6)
    s = RewriteSystem.from_relations([P("x^2 - 1", R)])
    tr = build_trace(P("x^3", R), [("1", (X,), (), 5)], s)
    assert tr.end == P("x^3 - 5*x^3 + 5*x", R)
    replay_text(tr.to_text(s), RuleTable.from_json(s.to_dict()))


@settings(max_examples=60)
@given(st.integers(2, 6), st.data())
def test_oracle_consistency(n, data):
    p = data.draw(polys(max_terms=4, max_len=2 * n + 2))
    a = shift_assignment(n)
    assert eval_poly(normal_form(p, K(n)), a) == eval_poly(p, a)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_normal_forms_in_span(n):
    s = K(n)
    level = [()]
    for _ in range(2 * n):
        level = [w + (a,) for w in level for a in (X, Y)]
        for w in level:
            q = normal_form(FreePoly({w: 1}), s)
            for u in q:
                i = next((k for k, c in enumerate(u) if c == X), len(u))
                assert all(c == X for c in u[i:]) and i < n and len(u) - i < n


@given(polys())
def test_determinism(p):
    s = K(3)
    a, ta = normalize(p, s)
    b, tb = normalize(p, s)
    assert a == b and ta.steps == tb.steps


@given(polys(max_len=5))
def test_sigma_commutes_with_normal_form(p):
    # K_n is sigma-stable, and sigma maps K_n's span basis y^i x^j to itself
    s = K(3)
    assert normal_form(sigma(p), s) == sigma(normal_form(p, s))


def _one_step_reducts(w, s):
    for rule in s:
        L = len(rule.lhs)
        for pos in range(len(w) - L + 1):
            if w[pos:pos + L] == rule.lhs:
                yield build_trace(FreePoly({w: 1}), [(rule.id, w[:pos], w[pos + L:], 1)], s).end


def test_k2_strategy_independent():
    """Every single step on a word of length <= 6 preserves the engine's normal form.

    With linearity of the normal form (checked below) this gives the same
    result along any reduction path, whatever the strategy.
    """
    s = K(2)
    level, words = [()], []
    for _ in range(6):
        level = [w + (a,) for w in level for a in (X, Y)]
        words += level
    for w in words:
        nf = normal_form(FreePoly({w: 1}), s)
        for r in _one_step_reducts(w, s):
            assert normal_form(r, s) == nf


@given(st.lists(st.tuples(st.lists(st.integers(0, 1), max_size=6).map(tuple), st.integers(-3, 3)), max_size=5))
def test_k2_normal_form_linear(terms):
    s = K(2)
    p = FreePoly({})
    acc = FreePoly({})
    for w, c in terms:
        p = p + FreePoly({w: c})
        acc = acc + normal_form(FreePoly({w: 1}), s).scale(c)
    assert normal_form(p, s) == acc


def test_join_witness():
    s = K(2)
    p = P("x^2*y")
    ta = build_trace(p, [("1", (), (Y,), 1)], s)
    tb = build_trace(p, [("3", (X,), (), 1)], s)
    j = join_witness(ta, tb, s)
    assert j.start == ta.end - tb.end and j.end.is_zero()
