import random

import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, strategies as st

from matpres.lattice import IntegerLattice, LatticeBuilder, integer_kernel

ints = st.integers(-20, 20)


def gensets(m=None):
    dim = st.just(m) if m else st.integers(1, 5)
    return dim.flatmap(lambda d: st.tuples(st.just(d), st.lists(st.lists(ints, min_size=d, max_size=d), max_size=7)))


def _is_hnf(lat):
    prev = -1
    for r, p in zip(lat.basis, lat.pivots):
        assert p > prev and r[p] > 0 and not any(r[:p])
        prev = p
    for i, p in enumerate(lat.pivots):
        for r in lat.basis[:i]:
            assert 0 <= r[p] < lat.basis[i][p]
    return True


def test_examples():
    lat = IntegerLattice(2, [[2, 0], [0, 3], [2, 3]])
    assert lat.basis == ((2, 0), (0, 3))
    assert lat.index_in_full() == 6 and not lat.is_full()
    assert [4, -3] in lat and [1, 0] not in lat
    assert IntegerLattice(2, [[2, 0], [0, 3], [1, 1]]).is_full()
    assert IntegerLattice(3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]).is_full()
    assert IntegerLattice(3).rank == 0


@given(gensets())
def test_hnf_shape_and_rank(data):
    m, gens = data
    lat = IntegerLattice(m, gens)
    assert _is_hnf(lat)
    assert lat.rank == (sympy.Matrix(gens).rank() if gens else 0)
    for g in gens:
        assert g in lat


@given(gensets(), st.randoms(use_true_random=False))
def test_canonical_under_unimodular_change(data, rnd):
    m, gens = data
    mixed = [list(g) for g in gens]
    for _ in range(10):
        if len(mixed) < 2:
            break
        i, j = rnd.sample(range(len(mixed)), 2)
        c = rnd.randint(-3, 3)
        mixed[i] = [a + c * b for a, b in zip(mixed[i], mixed[j])]
    rnd.shuffle(mixed)
    mixed = [[-a for a in v] if rnd.random() < .5 else v for v in mixed]
    assert IntegerLattice(m, gens) == IntegerLattice(m, mixed)


@given(gensets(3))
def test_index_matches_determinant(data):
    m, gens = data
    lat = IntegerLattice(m, gens)
    if lat.rank == m:
        assert lat.index_in_full() == abs(sympy.Matrix(lat.basis).det())
        invariants = smith_normal_form(sympy.Matrix(gens), domain=sympy.ZZ)
        prod = 1
        for i in range(m):
            prod *= invariants[i, i]
        assert lat.index_in_full() == abs(prod)
    else:
        assert lat.index_in_full() == 0


@given(gensets(4), st.lists(st.integers(-4, 4), min_size=7, max_size=7))
def test_witness(data, coeffs):
    m, gens = data
    b = LatticeBuilder(m, track=True)
    b.extend(gens)
    target = [sum(c * g[j] for c, g in zip(coeffs, gens)) for j in range(m)]
    w = b.witness(target)
    assert w is not None
    assert [sum(c * gens[k][j] for k, c in w.items()) for j in range(m)] == target
    off = [t + 1 for t in target]
    if not b.contains(off):
        assert b.witness(off) is None


@given(gensets(4), gensets(4))
def test_join_and_order(a, b):
    la, lb = IntegerLattice(4, a[1]), IntegerLattice(4, b[1])
    j = la.join(lb)
    assert la <= j and lb <= j
    assert j == IntegerLattice(4, a[1] + b[1])


@given(gensets(4), st.integers(0, 4))
def test_restrict_zero_prefix(data, k):
    m, gens = data
    lat = IntegerLattice(m, gens)
    sub = lat.restrict_zero_prefix(k)
    assert sub <= lat
    for r in sub.basis:
        assert not any(r[:k])
    # every lattice vector with zero prefix lies in sub: sample combinations
    rnd = random.Random(k)
    for _ in range(20):
        cs = [rnd.randint(-3, 3) for _ in lat.basis]
        v = [sum(c * r[j] for c, r in zip(cs, lat.basis)) for j in range(m)]
        if not any(v[:k]):
            assert v in sub


@given(st.integers(1, 4).flatmap(lambda r: st.lists(st.lists(ints, min_size=5, max_size=5), min_size=r, max_size=r)))
def test_integer_kernel(mat):
    ker = integer_kernel(mat, 5)
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in mat)
    assert len(ker) == 5 - sympy.Matrix(mat).rank()
    # saturated: kernel lattice equals Q-kernel intersected with Z^5
    lat = IntegerLattice(5, ker)
    for q in sympy.Matrix(mat).nullspace():
        den = sympy.ilcm(*[x.q for x in q]) if len(q) else 1
        assert [int(x * den) for x in q] in lat
