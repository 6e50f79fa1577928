"""Matrices over the coefficient rings, evaluation of free-ring elements, and
generation checks through additive-closure lattices.

Indices are 0-based throughout: ``unit(n, i, j)`` is the elementary matrix
with a one in row ``i``, column ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .freealg import FreePoly, Word, default_names
from .lattice import IntegerLattice, LatticeBuilder, integer_kernel
from .presentations import Presentation, two_relation_variant
from .rings import ZZ, CoefficientRing, DualNumbers, IntegerModRing, is_prime


class Matrix:
    """Dense square matrix; immutable."""

    __slots__ = ("ring", "n", "rows", "_hash")

    def __init__(self, rows: Sequence[Sequence[object]], ring: CoefficientRing = ZZ):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.ring = ring
        self.n = n
        self.rows = tuple(tuple(ring.coerce(c) for c in r) for r in rows)
        self._hash = None

    @classmethod
    def _raw(cls, rows, ring):
        m = object.__new__(cls)
        m.ring = ring
        m.n = len(rows)
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def zero(cls, n, ring=ZZ):
        z = ring.zero()
        return cls._raw(tuple((z,) * n for _ in range(n)), ring)

    @classmethod
    def identity(cls, n, ring=ZZ):
        z, o = ring.zero(), ring.one()
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), ring)

    @classmethod
    def unit(cls, n, i, j, ring=ZZ):
        z, o = ring.zero(), ring.one()
        return cls._raw(tuple(tuple(o if (r, c) == (i, j) else z for c in range(n)) for r in range(n)), ring)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other: "Matrix"):
        if self.n != other.n or self.ring != other.ring:
            raise ValueError(f"matrix mismatch: {self.n}x{self.n}/{self.ring} vs {other.n}x{other.n}/{other.ring}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        add = self.ring.add
        return Matrix._raw(tuple(tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
                           self.ring)

    def __neg__(self):
        neg = self.ring.neg
        return Matrix._raw(tuple(tuple(neg(a) for a in r) for r in self.rows), self.ring)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        self._check(other)
        R, n = self.ring, self.n
        cols = list(zip(*other.rows))
        if R == ZZ:
            return Matrix._raw(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.rows), R)
        add, mul, z = R.add, R.mul, R.zero()
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = z
                for a, b in zip(r, c):
                    if not R.is_zero(a) and not R.is_zero(b):
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Matrix._raw(tuple(out), R)

    def scale(self, c):
        R = self.ring
        c = R.coerce(c)
        return Matrix._raw(tuple(tuple(R.mul(c, a) for a in r) for r in self.rows), R)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, k: int):
        out = Matrix.identity(self.n, self.ring)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for r in self.rows for a in r)

    def transpose(self):
        return Matrix._raw(tuple(zip(*self.rows)), self.ring)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.ring == other.ring and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]}, ring={self.ring})"

    def flat(self) -> List[object]:
        return [a for r in self.rows for a in r]

    def to_json(self):
        if isinstance(self.ring, DualNumbers):
            return [[[str(a), str(b)] for a, b in r] for r in self.rows]
        return [[str(a) for a in r] for r in self.rows]

    @classmethod
    def from_json(cls, data, ring=ZZ):
        if isinstance(ring, DualNumbers):
            return cls([[(int(a), int(b)) for a, b in r] for r in data], ring)
        return cls([[int(a) for a in r] for r in data], ring)


@dataclass(frozen=True)
class Assignment:
    """Images of the generators, all of one size and ring."""

    matrices: Tuple[Matrix, ...]

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("empty assignment")
        m0 = self.matrices[0]
        for m in self.matrices:
            if m.n != m0.n or m.ring != m0.ring:
                raise ValueError("assignment matrices must share size and ring")

    @property
    def n(self):
        return self.matrices[0].n

    @property
    def ring(self):
        return self.matrices[0].ring

    def __len__(self):
        return len(self.matrices)

    def __getitem__(self, i):
        return self.matrices[i]

    def swapped(self) -> "Assignment":
        return Assignment(tuple(reversed(self.matrices)))

    def to_json(self, names: Optional[Sequence[str]] = None):
        names = names or default_names(len(self.matrices))
        return {nm: m.to_json() for nm, m in zip(names, self.matrices)}


def shift_assignment(n: int, ring: CoefficientRing = ZZ) -> Assignment:
    """x -> sum e_{i,i+1}, y -> sum e_{i+1,i}."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    z, o = ring.zero(), ring.one()
    X = Matrix._raw(tuple(tuple(o if j == i + 1 else z for j in range(n)) for i in range(n)), ring)
    Y = Matrix._raw(tuple(tuple(o if j == i - 1 else z for j in range(n)) for i in range(n)), ring)
    return Assignment((X, Y))


def cyclic_assignment(p: int) -> Assignment:
    """x -> diag(0, 1, ..., p-1), y -> sum e_{i+1 mod p, i} over F_p.

    ``y`` must push basis vector ``i`` to ``i+1`` for ``xy = y(x+1)`` to hold.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    F = IntegerModRing(p)
    X = Matrix([[i if i == j else 0 for j in range(p)] for i in range(p)], F)
    Y = Matrix([[1 if i == (j + 1) % p else 0 for j in range(p)] for i in range(p)], F)
    return Assignment((X, Y))


def _embeds(src: CoefficientRing, dst: CoefficientRing) -> bool:
    if src == ZZ or src == dst:
        return True
    return isinstance(dst, DualNumbers) and dst.base == src


def eval_poly(p: FreePoly, a: Assignment, _cache: Optional[Dict[Word, Matrix]] = None) -> Matrix:
    """Image of ``p`` under the unital homomorphism fixed by ``a``."""
    if p.nvars != len(a):
        raise ValueError(f"polynomial has {p.nvars} generators, assignment {len(a)}")
    R = a.ring
    if not _embeds(p.ring, R):
        raise ValueError(f"cannot map coefficients from {p.ring} into {R}")
    cache = _cache if _cache is not None else {}
    n = a.n

    def word_image(w: Word) -> Matrix:
        m = cache.get(w)
        if m is None:
            m = Matrix.identity(n, R) if not w else word_image(w[:-1]) * a[w[-1]]
            cache[w] = m
        return m

    acc = Matrix.zero(n, R)
    for w, c in p.items():
        acc = acc + word_image(w).scale(R.coerce(c))
    return acc


@dataclass
class RelationVerdict:
    residuals: List[Matrix]

    @property
    def zero(self) -> List[bool]:
        return [m.is_zero() for m in self.residuals]

    @property
    def ok(self) -> bool:
        return all(self.zero)

    def to_json(self):
        return {"all_zero": self.ok, "relations": [{"zero": z, "residual": m.to_json()}
                                                  for z, m in zip(self.zero, self.residuals)]}


def check_relations(pr: Presentation, a: Assignment) -> RelationVerdict:
    if pr.nvars != len(a):
        raise ValueError("presentation and assignment have different alphabets")
    cache: Dict[Word, Matrix] = {}
    return RelationVerdict([eval_poly(r, a, cache) for r in pr.relations])


def _int_vector(m: Matrix) -> List[int]:
    if isinstance(m.ring, DualNumbers):
        return [a for a, _ in m.flat()] + [b for _, b in m.flat()]
    return [int(x) for x in m.flat()]


def _from_vector(v: Sequence[int], n: int, ring: CoefficientRing) -> Matrix:
    if isinstance(ring, DualNumbers):
        k = n * n
        return Matrix([[(v[i * n + j], v[k + i * n + j]) for j in range(n)] for i in range(n)], ring)
    return Matrix([[v[i * n + j] for j in range(n)] for i in range(n)], ring)


def additive_closure(mats: Sequence[Matrix], include_unit: bool = True) -> IntegerLattice:
    """Additive group of the subring generated by ``mats``, as a lattice.

    Entries are read as integers: Z^(n^2) for Z, Z^(2n^2) for dual numbers.
    Over Z/N the lattice also contains N*Z^(n^2), so ``is_full`` means the
    matrices generate the whole ring mod N.
    """
    if not mats:
        raise ValueError("need at least one matrix")
    n, ring = mats[0].n, mats[0].ring
    if any(m.n != n or m.ring != ring for m in mats):
        raise ValueError("matrices must share size and ring")
    dim = len(_int_vector(mats[0]))
    b = LatticeBuilder(dim)
    modulus = getattr(ring, "modulus", 0) or getattr(getattr(ring, "base", None), "modulus", 0)
    if modulus:
        for k in range(dim):
            e = [0] * dim
            e[k] = modulus
            b.add(e)
    if include_unit:
        b.add(_int_vector(Matrix.identity(n, ring)))
    for m in mats:
        b.add(_int_vector(m))
    while True:
        basis = [_from_vector(r, n, ring) for r in b.rows]
        grew = False
        for el in basis:
            for g in mats:
                grew |= b.add(_int_vector(el * g))
                grew |= b.add(_int_vector(g * el))
        if not grew:
            return b.freeze()


def generation_check(mats: Sequence[Matrix], n: Optional[int] = None) -> bool:
    """True iff ``mats`` generate the full matrix ring (as a unital ring)."""
    if n is not None and mats and mats[0].n != n:
        raise ValueError("dimension mismatch")
    return additive_closure(mats, include_unit=True).is_full()


# -- dual-number witness ----------------------------------------------------

class NotFound(Exception):
    pass


@dataclass
class DualWitness:
    n: int
    assignment: Assignment
    x_power: Matrix
    y_power: Matrix
    verdict: RelationVerdict
    generates: bool
    kernel_rank: int

    def to_json(self):
        return {
            "n": self.n,
            "assignment": self.assignment.to_json(),
            "x^n": self.x_power.to_json(),
            "y^n": self.y_power.to_json(),
            "x^n_nonzero": not self.x_power.is_zero(),
            "relations": self.verdict.to_json(),
            "generates_Mat_n(Z[t]/(t^2))": self.generates,
            "solution_lattice_rank": self.kernel_rank,
        }


def _lift(base: Assignment, tparts: Sequence[Matrix]) -> Assignment:
    D = DualNumbers(ZZ)
    n = base.n
    return Assignment(tuple(
        Matrix([[(m[i, j], t[i, j]) for j in range(n)] for i in range(n)], D) for m, t in zip(base.matrices, tparts)))


def dual_number_witness(n: int) -> DualWitness:
    """Find x -> X + tA, y -> Y + tB satisfying the two-relation variant with x^n != 0.

    The t-parts of both relations are linear in (A, B); an integer basis of the
    solution lattice is computed and the first basis vector whose x^n is
    nonzero is returned.  Raises :class:`NotFound` if x^n vanishes on every
    solution.
    """
    pr = two_relation_variant(n)
    base = shift_assignment(n)
    nn = n * n
    nvar = 2 * nn
    zero = Matrix.zero(n)
    x_n = FreePoly.monomial((0,) * n)
    columns = []
    strict_cols = []
    for k in range(nvar):
        which, (i, j) = divmod(k, nn)[0], divmod(k % nn, n)
        E = Matrix.unit(n, i, j)
        tparts = (E, zero) if which == 0 else (zero, E)
        a = _lift(base, tparts)
        col = []
        for rel in pr.relations:
            val = eval_poly(rel, a)
            col += [b for _, b in val.flat()]
        columns.append(col)
        strict_cols.append([b for _, b in eval_poly(x_n, a).flat()])
    neq = len(columns[0])
    mat = [[columns[k][e] for k in range(nvar)] for e in range(neq)]
    kernel = integer_kernel(mat, nvar)

    def strict_part(v):
        return [sum(strict_cols[k][e] * v[k] for k in range(nvar)) for e in range(nn)]

    candidates = [v for v in kernel if any(strict_part(v))]
    if not candidates:
        raise NotFound(f"x^n vanishes on every dual-number lift for n={n}")
    v = min(candidates, key=lambda u: (sum(abs(c) for c in u), [-c for c in u]))
    A = Matrix([[v[i * n + j] for j in range(n)] for i in range(n)])
    B = Matrix([[v[nn + i * n + j] for j in range(n)] for i in range(n)])
    a = _lift(base, (A, B))
    verdict = check_relations(pr, a)
    xp = eval_poly(x_n, a)
    yp = eval_poly(FreePoly.monomial((1,) * n), a)
    gens = additive_closure(list(a.matrices)).is_full()
    return DualWitness(n, a, xp, yp, verdict, gens, len(kernel))
