import pytest
from hypothesis import given, settings, strategies as st

from matpres.freealg import FreePoly, parse_poly, sigma
from matpres.matrep import (Assignment, Matrix, additive_closure, check_relations, cyclic_assignment,
                            dual_number_witness, eval_poly, generation_check, shift_assignment)
from matpres.presentations import guralnick, kassabov, two_relation_variant
from matpres.rings import ZZ, DualNumbers, IntegerModRing

from .strategies import polys


def P(s, ring=ZZ):
    return parse_poly(s, ("x", "y"), ring)


def E(n, i, j):
    return Matrix.unit(n, i, j)


def test_shift_examples():
    a = shift_assignment(2)
    assert a[0] == E(2, 0, 1) and a[1] == E(2, 1, 0)
    a = shift_assignment(3)
    assert a[0] == E(3, 0, 1) + E(3, 1, 2) and a[1] == E(3, 1, 0) + E(3, 2, 1)
    a = shift_assignment(4)
    assert (a[0] ** 4).is_zero() and (a[1] ** 4).is_zero() and not (a[0] ** 3).is_zero()
    with pytest.raises(ValueError):
        shift_assignment(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_eval_examples(n):
    a = shift_assignment(n)
    assert eval_poly(P(f"y^{n - 1}*x^{n - 1}"), a) == E(n, n - 1, n - 1)
    assert eval_poly(P(f"x^{n}"), a).is_zero()
    assert eval_poly(P("1"), a) == Matrix.identity(n)
    assert eval_poly(P("x*y + y*x"), shift_assignment(2)) == Matrix.identity(2)


def test_eval_errors():
    with pytest.raises(ValueError):
        eval_poly(parse_poly("a*b", ("a", "b", "c")), shift_assignment(2))
    with pytest.raises(ValueError):
        eval_poly(P("x", IntegerModRing(3)), shift_assignment(2))
    with pytest.raises(ValueError):
        Matrix([[1, 2]])
    with pytest.raises(ValueError):
        Matrix.identity(2) * Matrix.identity(3)


@pytest.mark.parametrize("n", range(2, 7))
def test_check_relations(n):
    a = shift_assignment(n)
    assert check_relations(kassabov(n), a).ok
    assert check_relations(kassabov(n), a.swapped()).ok


def test_check_relations_fails():
    X = shift_assignment(3)[0]
    v = check_relations(kassabov(3), Assignment((X, X)))
    assert v.zero == [True, True, False]
    assert v.residuals[2] == X * X + X ** 4 - Matrix.identity(3)


def test_additive_closure_examples():
    X, Y = shift_assignment(2).matrices
    assert additive_closure([X, Y]).is_full()
    assert additive_closure([X, Y]).basis == tuple(tuple(1 if i == j else 0 for j in range(4)) for i in range(4))
    assert additive_closure([X]).rank == 2
    assert additive_closure([E(2, 0, 0)]).rank == 2
    assert generation_check([X, Y], 2)
    assert not generation_check([X], 2)
    assert not generation_check([E(2, 0, 0)], 2)


@pytest.mark.parametrize("n", range(2, 7))
def test_shift_generates(n):
    assert generation_check(list(shift_assignment(n).matrices), n)


def test_closure_without_unit():
    X, _ = shift_assignment(3).matrices
    assert additive_closure([X], include_unit=False).rank == 2  # X, X^2


def _small_mats(n):
    return st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=n, max_size=n).map(Matrix)


@settings(max_examples=40)
@given(st.lists(_small_mats(2), min_size=1, max_size=3), st.lists(_small_mats(2), max_size=2))
def test_closure_monotone_idempotent(a, b):
    la = additive_closure(a)
    lab = additive_closure(a + b)
    assert la <= lab
    again = additive_closure([Matrix([[r[0], r[1]], [r[2], r[3]]]) for r in la.basis] or a)
    assert again == la


@settings(max_examples=60)
@given(st.integers(2, 5), st.data())
def test_eval_homomorphism(n, data):
    p = data.draw(polys(max_terms=3, max_len=5))
    q = data.draw(polys(max_terms=3, max_len=5))
    a = shift_assignment(n)
    assert eval_poly(p * q, a) == eval_poly(p, a) * eval_poly(q, a)
    assert eval_poly(p + q, a) == eval_poly(p, a) + eval_poly(q, a)


@settings(max_examples=60)
@given(st.integers(2, 5), st.data())
def test_sigma_anti_homomorphism(n, data):
    p = data.draw(polys(max_terms=3, max_len=5))
    q = data.draw(polys(max_terms=3, max_len=5))
    a = shift_assignment(n)
    assert eval_poly(sigma(p * q), a) == eval_poly(sigma(q), a) * eval_poly(sigma(p), a)
    # at the shift pair, swapping X and Y is transposition, so sigma is transpose
    assert eval_poly(sigma(p), a) == eval_poly(p, a).transpose()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cyclic_assignment(p):
    a = cyclic_assignment(p)
    assert check_relations(guralnick(p), a).ok
    assert generation_check(list(a.matrices), p)


def test_cyclic_p2_example():
    a = cyclic_assignment(2)
    F = IntegerModRing(2)
    assert a[0] == Matrix([[0, 0], [0, 1]], F)
    assert a[1] == Matrix([[0, 1], [1, 0]], F)
    with pytest.raises(ValueError):
        cyclic_assignment(4)


def test_dual_witness_n2():
    w = dual_number_witness(2)
    D = DualNumbers(ZZ)
    X, Y = shift_assignment(2).matrices
    assert w.assignment[0] == Matrix([[(X[i, j], E(2, 1, 0)[i, j]) for j in range(2)] for i in range(2)], D)
    assert w.assignment[1] == Matrix([[(Y[i, j], E(2, 0, 1)[i, j]) for j in range(2)] for i in range(2)], D)
    tI = Matrix([[(0, 1), (0, 0)], [(0, 0), (0, 1)]], D)
    assert w.x_power == tI and w.y_power == tI
    assert w.verdict.ok and w.generates


@pytest.mark.parametrize("n", [2, 3, 4])
def test_dual_witness(n):
    w = dual_number_witness(n)
    assert w.verdict.ok and not w.x_power.is_zero() and w.x_power == w.y_power
    assert check_relations(two_relation_variant(n), w.assignment).ok


def test_dual_witness_strictness_needs_t_parts():
    D = DualNumbers(ZZ)
    a = shift_assignment(2)
    flat = Assignment(tuple(Matrix([[(m[i, j], 0) for j in range(2)] for i in range(2)], D) for m in a.matrices))
    assert check_relations(two_relation_variant(2), flat).ok
    assert eval_poly(P("x^2"), flat).is_zero()


def test_matrix_json_round_trip():
    m = Matrix([[1, -2], [3, 40]])
    assert Matrix.from_json(m.to_json()) == m
    assert m.to_json() == [["1", "-2"], ["3", "40"]]
    D = DualNumbers(ZZ)
    d = Matrix([[(1, 2), (0, 0)], [(0, -1), (3, 0)]], D)
    assert Matrix.from_json(d.to_json(), D) == d
