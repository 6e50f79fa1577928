"""Relation-module experiments: trivial extensions and relation-module probes.

An element of ``Mat_n(Z) + M`` with ``M = (R (x) R)^d`` is a flat integer
vector: ``n^2`` matrix entries, then ``d`` blocks of ``n^4`` tensor
coordinates. Coordinate ``((i, j), (k, l))`` of a block is the coefficient of
``e_ij (x) e_kl``. Left multiplication by ``r`` acts on the first tensor
factor and right multiplication on the second; products inside ``M`` vanish.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .freealg import FreePoly, Word
from .lattice import IntegerLattice, LatticeBuilder
from .matrep import Matrix, additive_closure, shift_assignment
from .rings import ZZ


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class TrivialExtElement:
    n: int
    d: int
    r: Tuple[int, ...]                # n*n entries, row-major
    m: Tuple[Tuple[int, ...], ...]    # d blocks of n^4 coordinates

    @classmethod
    def from_vector(cls, v: Sequence[int], n: int, d: int) -> "TrivialExtElement":
        n2, n4 = n * n, n ** 4
        if len(v) != n2 + d * n4:
            raise ShapeError(f"vector of length {len(v)} does not fit n={n}, d={d}")
        return cls(n, d, tuple(v[:n2]), tuple(tuple(v[n2 + s * n4:n2 + (s + 1) * n4]) for s in range(d)))

    @classmethod
    def lift(cls, mat: Matrix, slot: int, d: int) -> "TrivialExtElement":
        """``(mat, 1 (x) 1)`` with the tensor unit in block ``slot``."""
        n = mat.n
        r = tuple(int(a) for a in mat.flat())
        m = [[0] * n ** 4 for _ in range(d)]
        for i in range(n):
            for k in range(n):
                m[slot][_tidx(n, i, i, k, k)] = 1
        return cls(n, d, r, tuple(tuple(b) for b in m))

    @classmethod
    def unit(cls, n: int, d: int) -> "TrivialExtElement":
        r = tuple(1 if i == j else 0 for i in range(n) for j in range(n))
        return cls(n, d, r, tuple((0,) * n ** 4 for _ in range(d)))

    def vector(self) -> List[int]:
        out = list(self.r)
        for b in self.m:
            out.extend(b)
        return out

    def __add__(self, other: "TrivialExtElement") -> "TrivialExtElement":
        _same_shape(self, other)
        return TrivialExtElement(self.n, self.d, tuple(a + b for a, b in zip(self.r, other.r)),
                                 tuple(tuple(a + b for a, b in zip(x, y)) for x, y in zip(self.m, other.m)))

    def __mul__(self, other: "TrivialExtElement") -> "TrivialExtElement":
        return trivial_ext_mul(self, other)


def _tidx(n, i, j, k, l) -> int:
    return ((i * n + j) * n + k) * n + l


def _same_shape(u, v):
    if u.n != v.n or u.d != v.d:
        raise ShapeError(f"shapes differ: (n={u.n}, d={u.d}) vs (n={v.n}, d={v.d})")


def _matmul(a, b, n):
    return tuple(sum(a[i * n + t] * b[t * n + j] for t in range(n)) for i in range(n) for j in range(n))


def _left(r, blk, n):
    # (r e_ij) (x) e_kl = sum_p r[p][i] e_pj (x) e_kl
    out = [0] * len(blk)
    nz = [(idx, c) for idx, c in enumerate(blk) if c]
    for idx, c in nz:
        i, rest = divmod(idx, n ** 3)
        for p in range(n):
            a = r[p * n + i]
            if a:
                out[p * n ** 3 + rest] += a * c
    return out


def _right(blk, r, n):
    # e_ij (x) (e_kl r) = sum_q r[l][q] e_ij (x) e_kq
    out = [0] * len(blk)
    for idx, c in enumerate(blk):
        if not c:
            continue
        head, l = divmod(idx, n)
        for q in range(n):
            a = r[l * n + q]
            if a:
                out[head * n + q] += c * a
    return out


def trivial_ext_mul(u: TrivialExtElement, v: TrivialExtElement) -> TrivialExtElement:
    """``(r, m)(r', m') = (r r', r m' + m r')``."""
    _same_shape(u, v)
    n = u.n
    m = []
    for a, b in zip(u.m, v.m):
        la, rb = _left(u.r, b, n), _right(a, v.r, n)
        m.append(tuple(x + y for x, y in zip(la, rb)))
    return TrivialExtElement(n, u.d, _matmul(u.r, v.r, n), tuple(m))


# -- closure -----------------------------------------------------------

@dataclass
class ClosureResult:
    lattice: IntegerLattice
    rounds: int
    ranks: List[int] = field(default_factory=list)


def subring_closure(gens: Sequence[TrivialExtElement], include_unit: bool = True,
                    max_rounds: int = 1000) -> ClosureResult:
    """Additive group of the (unital) subring generated by ``gens``.

    Each round multiplies the current basis by the generators on both sides
    and multiplies pairs of basis vectors of which at least one is new; it
    stops when two consecutive HNF bases coincide.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n, d = gens[0].n, gens[0].d
    for g in gens:
        _same_shape(gens[0], g)
    dim = n * n + d * n ** 4
    b = LatticeBuilder(dim)
    if include_unit:
        b.add(TrivialExtElement.unit(n, d).vector())
    for g in gens:
        b.add(g.vector())
    lat = b.freeze()
    seen: set = set()
    ranks = [lat.rank]
    for rnd in range(1, max_rounds + 1):
        basis = [TrivialExtElement.from_vector(r, n, d) for r in lat.basis]
        fresh = [e for e, row in zip(basis, lat.basis) if row not in seen]
        for e in basis:
            for g in gens:
                b.add(trivial_ext_mul(e, g).vector())
                b.add(trivial_ext_mul(g, e).vector())
        for e in fresh:
            for f in basis:
                b.add(trivial_ext_mul(e, f).vector())
                b.add(trivial_ext_mul(f, e).vector())
        seen.update(lat.basis)
        new = b.freeze()
        ranks.append(new.rank)
        if new == lat:
            return ClosureResult(new, rnd, ranks)
        lat = new
    raise RuntimeError(f"closure did not stabilize in {max_rounds} rounds")


def intersect_with_M(lat: IntegerLattice, n: int, d: int) -> IntegerLattice:
    """Vectors of ``lat`` whose matrix part vanishes."""
    if lat.ambient != n * n + d * n ** 4:
        raise ShapeError(f"ambient rank {lat.ambient} does not fit n={n}, d={d}")
    return lat.restrict_zero_prefix(n * n)


# -- relation-module rank ----------------------------------------------

def generator_set(name: str, n: int, d: int) -> List[Matrix]:
    """Named generating tuples of Mat_n(Z)."""
    if n == 1:
        return [Matrix([[1]])] * d
    X, Y = shift_assignment(n).matrices
    E = [Matrix.unit(n, i, j) for i, j in ((0, 1), (1, 0))]
    base = {
        "shift": [X, Y],
        "swapped": [Y, X],
        "sum": [X, X + Y],
        "units": E if n == 2 else [X, Y],
    }
    if name not in base:
        raise ValueError(f"unknown generator set {name!r}; choose from {', '.join(base)}")
    mats = base[name]
    if d < len(mats):
        raise ValueError(f"generator set {name!r} needs d >= {len(mats)}")
    return mats + [X] * (d - len(mats))


@dataclass
class Theorem3Report:
    n: int
    d: int
    generators: str
    closure_rounds: int
    closure_ranks: List[int]
    rank_subring: int
    rank_intersection: int
    divisible: bool
    rank_L: Optional[int]
    bound: int
    exact_sequence_rank: int
    seconds: float

    @property
    def holds(self) -> bool:
        return self.rank_L is not None and self.rank_L >= self.bound

    @property
    def verdict(self) -> str:
        return "bound holds" if self.holds else "bound fails"

    def to_json(self) -> dict:
        return {
            "n": self.n, "d": self.d, "generators": self.generators,
            "closure_rounds": self.closure_rounds, "closure_ranks": self.closure_ranks,
            "rank_subring": self.rank_subring,
            "rank_intersection_with_M": self.rank_intersection,
            "divisibility_probe": {"modulus": self.n ** 2, "divisible": self.divisible},
            "rank_L": self.rank_L,
            "bound": self.bound,
            "bound_formula": "n^2(d-1)+n",
            "rank_predicted_by_exact_sequence": self.exact_sequence_rank,
            "verdict": self.verdict,
        }


def theorem3_check(n: int, d: int, mats: Optional[Sequence[Matrix]] = None, name: str = "shift") -> Theorem3Report:
    """Rank of the lifted subring meeting M, against the bound n^2(d-1)+n on rank(L~)."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    t0 = time.perf_counter()
    mats = list(mats) if mats is not None else generator_set(name, n, d)
    if len(mats) != d or any(m.n != n for m in mats):
        raise ShapeError(f"need {d} matrices of size {n}")
    if not additive_closure(mats, include_unit=True).is_full():
        raise ValueError("the matrices do not generate Mat_n(Z)")
    gens = [TrivialExtElement.lift(m, s, d) for s, m in enumerate(mats)]
    res = subring_closure(gens)
    inter = intersect_with_M(res.lattice, n, d)
    k = inter.rank
    div = k % (n * n) == 0
    # 0 -> I/I^2 -> (R(x)R)^d -> R(x)R -> R -> 0 with R = Z^(n^2) free
    exact = (d - 1) * n ** 4 + n * n
    return Theorem3Report(n, d, name, res.rounds, res.ranks, res.lattice.rank, k, div,
                          k // (n * n) if div else None, n * n * (d - 1) + n, exact,
                          time.perf_counter() - t0)


# -- bimodule membership -----------------------------------------------

def _words_upto(nvars: int, length: int) -> List[Word]:
    out: List[Word] = [()]
    level: List[Word] = [()]
    for _ in range(length):
        level = [w + (a,) for w in level for a in range(nvars)]
        out.extend(level)
    return out


@dataclass
class Member:
    witness: List[Tuple[int, str, FreePoly]]  # (coefficient, description, element)
    degree_bound: int

    def expand(self, ring, nvars) -> FreePoly:
        acc = FreePoly.zero(ring, nvars)
        for c, _, e in self.witness:
            acc = acc + e.scale(c)
        return acc

    def to_json(self, names) -> dict:
        return {"verdict": "member", "D": self.degree_bound,
                "witness": [{"coeff": c, "term": desc} for c, desc, _ in self.witness]}


@dataclass
class NotFoundUpTo:
    degree_bound: int
    span_rank: int

    def to_json(self, names=None) -> dict:
        return {"verdict": "not-found-up-to", "D": self.degree_bound, "span_rank": self.span_rank,
                "note": "inconclusive: no combination of degree <= D exists"}


def bimodule_membership(target: FreePoly, gens: Sequence[FreePoly], relations: Sequence[FreePoly],
                        D: int, names: Optional[Sequence[str]] = None):
    """Is ``target`` in span{u g v} + span{(u r v)(u' r' v')}, all terms of degree <= D?"""
    if target.degree() > D:
        raise ValueError(f"degree bound {D} is below the target degree {target.degree()}")
    ring, nv = target.ring, target.nvars
    if not ring.int_valued:
        raise ValueError("membership is decided over Z or Z/N coefficients")
    from .freealg import default_names, format_word
    names = tuple(names) if names else default_names(nv)
    words = _words_upto(nv, D)
    col = {w: i for i, w in enumerate(words)}
    b = LatticeBuilder(len(words), track=True)
    elems: List[Tuple[str, FreePoly]] = []

    def vec(p: FreePoly):
        v = [0] * len(words)
        for w, c in p.items():
            v[col[w]] = int(c)
        return v

    def push(desc, p):
        if p.is_zero() or p.degree() > D:
            return
        elems.append((desc, p))
        b.add(vec(p))

    def mono(w):
        return FreePoly._raw({w: ring.one()}, ring, nv)

    fw = lambda w: format_word(w, names)  # noqa: E731
    for gi, g in enumerate(gens):
        room = D - g.degree()
        for u in _words_upto(nv, max(room, -1)) if room >= 0 else []:
            for v in _words_upto(nv, room - len(u)):
                push(f"{fw(u)} * g{gi} * {fw(v)}", mono(u) * g * mono(v))
    rel_lifts = []
    for ri, r in enumerate(relations):
        room = D - r.degree()
        if room < 0:
            continue
        for u in _words_upto(nv, room):
            for v in _words_upto(nv, room - len(u)):
                rel_lifts.append((f"{fw(u)}*r{ri}*{fw(v)}", mono(u) * r * mono(v)))
    for (d1, p1), (d2, p2) in itertools.product(rel_lifts, repeat=2):
        if p1.degree() + p2.degree() <= D:
            push(f"({d1})({d2})", p1 * p2)
    if ring.modulus:
        for i in range(len(words)):
            e = [0] * len(words)
            e[i] = ring.modulus
            elems.append((f"{ring.modulus}*{fw(words[i])}", mono(words[i]).scale(ring.modulus)))
            b.add(e)
    combo = b.witness(vec(target))
    if combo is None:
        return NotFoundUpTo(D, b.rank)
    wit = [(c, elems[i][0], elems[i][1]) for i, c in sorted(combo.items())]
    return Member(wit, D)
