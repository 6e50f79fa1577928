import pytest
from hypothesis import given
from hypothesis import strategies as st

from matpres.rings import ZZ, DualNumbers, IntegerModRing, is_prime, ring_from_spec

RINGS = [ZZ, IntegerModRing(6), IntegerModRing(7), DualNumbers(ZZ), DualNumbers(IntegerModRing(4))]


def scalars(R):
    if isinstance(R, DualNumbers):
        return st.tuples(st.integers(-20, 20), st.integers(-20, 20)).map(R.coerce)
    return st.integers(-50, 50).map(R.coerce)


@pytest.mark.parametrize("R", RINGS, ids=lambda r: r.name)
@given(data=st.data())
def test_ring_axioms(R, data):
    a, b, c = (data.draw(scalars(R)) for _ in range(3))
    assert R.add(a, b) == R.add(b, a)
    assert R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.mul(R.one(), a) == a == R.add(a, R.zero())
    assert R.is_zero(R.add(a, R.neg(a)))


def test_canonical_representatives():
    R = IntegerModRing(6)
    assert R.coerce(-1) == 5 and R.coerce(13) == 1
    assert R.name == "Z/6" and IntegerModRing(5).name == "F5"


def test_dual_numbers_nilpotent_t():
    D = DualNumbers(ZZ)
    assert D.mul((0, 1), (0, 1)) == D.zero()
    assert D.unit_inverse((1, 3)) == (1, -3)
    assert D.unit_inverse((0, 1)) is None


def test_unit_inverse_mod():
    R = IntegerModRing(12)
    assert R.unit_inverse(5) == 5 and R.unit_inverse(4) is None
    assert ZZ.unit_inverse(-1) == -1 and ZZ.unit_inverse(2) is None


@pytest.mark.parametrize("spec,name", [("Z", "Z"), ("Z/6", "Z/6"), ("F5", "F5"), ("Z[t]", "Z[t]"), ("Z/4[t]", "Z/4[t]")])
def test_ring_from_spec(spec, name):
    assert ring_from_spec(spec).name == name


@pytest.mark.parametrize("spec", ["Q", "Z/1", "F4", "Z/x"])
def test_ring_from_spec_rejects(spec):
    with pytest.raises(ValueError):
        ring_from_spec(spec)


def test_is_prime():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
