"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from matpres.freealg import FreePoly
from matpres.rings import ZZ

words = st.lists(st.integers(0, 1), max_size=6).map(tuple)


def polys(ring=ZZ, max_terms=5, max_len=6, coeffs=st.integers(-5, 5)):
    wl = st.lists(st.integers(0, 1), max_size=max_len).map(tuple)
    return st.dictionaries(wl, coeffs, max_size=max_terms).map(lambda d: FreePoly(d, ring, 2))
