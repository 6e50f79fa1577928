"""Subgroups of Z^m in Hermite normal form.

Row-style HNF: basis rows are independent, each row starts (pivot) strictly to
the right of the previous one, pivots are positive and every entry above a
pivot lies in ``[0, pivot)``.  That basis is canonical, so two generating sets
of the same subgroup give identical basis matrices.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import _kernels


class LatticeBuilder:
    """Mutable echelon basis used while a lattice is being accumulated.

    With ``track=True`` every basis row remembers its integer combination of
    the inserted vectors, so membership queries can return a witness.
    """

    def __init__(self, ambient: int, track: bool = False):
        self.ambient = ambient
        self.rows: List[List[int]] = []
        self.pivots: List[int] = []
        self.trans: Optional[List[Dict[int, int]]] = [] if track else None
        self.count = 0

    def add(self, vec: Sequence[int]) -> bool:
        if len(vec) != self.ambient:
            raise ValueError(f"vector of length {len(vec)} in ambient rank {self.ambient}")
        idx = self.count
        self.count += 1
        return _kernels.echelon_insert(self.rows, self.pivots, vec, self.trans,
                                       {idx: 1} if self.trans is not None else None)

    def extend(self, vecs: Iterable[Sequence[int]]) -> bool:
        grew = False
        for v in vecs:
            grew |= self.add(v)
        return grew

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, vec: Sequence[int]) -> bool:
        res, _ = _kernels.echelon_residual(self.rows, self.pivots, vec)
        return not any(res)

    def witness(self, vec: Sequence[int]) -> Optional[Dict[int, int]]:
        """Combination of inserted vectors equal to ``vec``, or None."""
        if self.trans is None:
            raise ValueError("builder was created without tracking")
        res, combo = _kernels.echelon_residual(self.rows, self.pivots, vec, self.trans)
        if any(res):
            return None
        return {k: v for k, v in combo.items() if v}

    def freeze(self) -> "IntegerLattice":
        rows = [list(r) for r in self.rows]
        pivots = list(self.pivots)
        _kernels.hnf_reduce(rows, pivots)
        return IntegerLattice._from_hnf(self.ambient, rows, pivots)


class IntegerLattice:
    """Immutable subgroup of Z^m with a canonical HNF basis."""

    __slots__ = ("ambient", "_rows", "_pivots")

    def __init__(self, ambient: int, generators: Iterable[Sequence[int]] = ()):
        b = LatticeBuilder(ambient)
        b.extend(generators)
        lat = b.freeze()
        self.ambient = ambient
        self._rows = lat._rows
        self._pivots = lat._pivots

    @classmethod
    def _from_hnf(cls, ambient, rows, pivots):
        lat = object.__new__(cls)
        lat.ambient = ambient
        lat._rows = tuple(tuple(r) for r in rows)
        lat._pivots = tuple(pivots)
        return lat

    @classmethod
    def full(cls, ambient: int) -> "IntegerLattice":
        rows = [[1 if i == j else 0 for j in range(ambient)] for i in range(ambient)]
        return cls._from_hnf(ambient, rows, list(range(ambient)))

    @property
    def basis(self) -> Tuple[Tuple[int, ...], ...]:
        return self._rows

    @property
    def pivots(self) -> Tuple[int, ...]:
        return self._pivots

    @property
    def rank(self) -> int:
        return len(self._rows)

    def is_full(self) -> bool:
        return self.rank == self.ambient and all(self._rows[i][i] == 1 for i in range(self.ambient))

    def index_in_full(self) -> int:
        """``[Z^m : L]`` when L has full rank, else 0."""
        if self.rank < self.ambient:
            return 0
        out = 1
        for i, p in enumerate(self._pivots):
            out *= self._rows[i][p]
        return out

    def __contains__(self, vec) -> bool:
        res, _ = _kernels.echelon_residual([list(r) for r in self._rows], list(self._pivots), vec)
        return not any(res)

    def contains(self, vec) -> bool:
        return vec in self

    def builder(self, track: bool = False) -> LatticeBuilder:
        b = LatticeBuilder(self.ambient, track=track)
        b.extend(self._rows)
        return b

    def join(self, other: "IntegerLattice") -> "IntegerLattice":
        b = self.builder()
        b.extend(other._rows)
        return b.freeze()

    def __le__(self, other: "IntegerLattice") -> bool:
        return all(r in other for r in self._rows)

    def restrict_zero_prefix(self, k: int) -> "IntegerLattice":
        """Sublattice of vectors whose first ``k`` coordinates vanish."""
        # in echelon form, exactly the rows pivoting at or beyond k span it
        rows = [list(r) for r, p in zip(self._rows, self._pivots) if p >= k]
        pivots = [p for p in self._pivots if p >= k]
        return IntegerLattice._from_hnf(self.ambient, rows, pivots)

    def __eq__(self, other):
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return self.ambient == other.ambient and self._rows == other._rows

    def __hash__(self):
        return hash((self.ambient, self._rows))

    def __repr__(self):
        return f"IntegerLattice(ambient={self.ambient}, rank={self.rank})"


def integer_kernel(matrix: Sequence[Sequence[int]], ncols: int) -> List[List[int]]:
    """Basis of ``{v in Z^ncols : matrix @ v = 0}`` (rows of the result)."""
    nrows = len(matrix)
    b = LatticeBuilder(nrows + ncols)
    for j in range(ncols):
        col = [matrix[i][j] for i in range(nrows)]
        unit = [0] * ncols
        unit[j] = 1
        b.add(col + unit)
    lat = b.freeze()
    return [list(r[nrows:]) for r, p in zip(lat.basis, lat.pivots) if p >= nrows]
