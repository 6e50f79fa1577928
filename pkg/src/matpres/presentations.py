"""Catalog of matrix-ring presentations and the presentation file format.

File format (whitespace-insensitive, ``#`` starts a comment, statements end
with ``;`` or a newline)::

    ring Z;  gens x y
    rel x^2; rel y^2
    rel x*y + y*x - 1

``ring`` takes ``Z``, ``Z/N``, ``Fp`` or ``Z[t]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .freealg import FreePoly, PolySyntaxError, Word, default_names, parse_poly
from .rewrite import RewriteSystem
from .rings import ZZ, CoefficientRing, IntegerModRing, is_prime, ring_from_spec

X, Y = 0, 1


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Presentation:
    ring: CoefficientRing
    names: Tuple[str, ...]
    relations: Tuple[FreePoly, ...]
    name: str = field(default="", compare=False)
    # lhs word per relation for rewriting; None entries use the deglex lead
    leads: Optional[Tuple[Optional[Word], ...]] = field(default=None, compare=False)
    # letter ranking used when completion has to orient new rules
    letter_order: Optional[Tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.names) < 1:
            raise ValueError("alphabet size must be >= 1")
        for r in self.relations:
            if r.is_zero():
                raise ValueError("relations must be nonzero")
            if r.nvars != len(self.names) or r.ring != self.ring:
                raise ValueError("relation over a different ring or alphabet")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def rewrite_system(self) -> RewriteSystem:
        return RewriteSystem.from_relations(self.relations, self.leads, names=self.names)

    def to_text(self, oneline: bool = False) -> str:
        parts = [f"ring {self.ring.name}", f"gens {' '.join(self.names)}"]
        parts += [f"rel {r.format(self.names)}" for r in self.relations]
        return "; ".join(parts) if oneline else "\n".join(parts) + "\n"

    def to_dict(self) -> dict:
        return {"name": self.name, "ring": self.ring.name, "gens": list(self.names),
                "relations": [r.format(self.names) for r in self.relations]}


def _poly(terms, ring=ZZ) -> FreePoly:
    return FreePoly(terms, ring, 2)


def _xy_relations(n: int, mult: int, ring=ZZ):
    """``[x^n, y^n, xy + mult*y^(n-1)x^(n-1) - 1]``."""
    corner = (Y,) * (n - 1) + (X,) * (n - 1)
    return (
        _poly({(X,) * n: 1}, ring),
        _poly({(Y,) * n: 1}, ring),
        _poly({(X, Y): 1, corner: mult, (): -1}, ring),
    )


def kassabov(n: int) -> Presentation:
    """``<x, y | x^n = y^n = 0, xy + y^(n-1) x^(n-1) = 1>`` over Z."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return Presentation(ZZ, ("x", "y"), _xy_relations(n, 1), f"kassabov({n})",
                        leads=((X,) * n, (Y,) * n, (X, Y)))


def kassabov_mod(n: int, N: int) -> Presentation:
    """The Z/N variant: third relation ``xy + (N+1) y^(n-1) x^(n-1) = 1``, kept over Z."""
    if n < 2 or N < 2:
        raise ValueError(f"need n >= 2 and N >= 2, got n={n}, N={N}")
    return Presentation(ZZ, ("x", "y"), _xy_relations(n, N + 1), f"kassabov-mod({n},{N})",
                        leads=((X,) * n, (Y,) * n, (X, Y)))


def guralnick(p: int) -> Presentation:
    """``<x, y | y^p = 1, x^p = x, xy = y(x+1)>`` over F_p."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    F = IntegerModRing(p)
    rels = (
        _poly({(Y,) * p: 1, (): -1}, F),
        _poly({(X,) * p: 1, (X,): -1}, F),
        _poly({(X, Y): 1, (Y, X): -1, (Y,): -1}, F),
    )
    return Presentation(F, ("x", "y"), rels, f"guralnick({p})",
                        leads=((Y,) * p, (X,) * p, (X, Y)), letter_order=(Y, X))


def two_relation_variant(n: int) -> Presentation:
    """``<x, y | x^n = y^n, xy + y^(n-1) x^(n-1) = 1>`` over Z."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    corner = (Y,) * (n - 1) + (X,) * (n - 1)
    rels = (
        _poly({(X,) * n: 1, (Y,) * n: -1}),
        _poly({(X, Y): 1, corner: 1, (): -1}),
    )
    return Presentation(ZZ, ("x", "y"), rels, f"variant2({n})", leads=((Y,) * n, (X, Y)))


PRESETS = {
    "kassabov": (kassabov, 1),
    "kassabov-mod": (kassabov_mod, 2),
    "guralnick": (guralnick, 1),
    "variant2": (two_relation_variant, 1),
}


def preset(spec: str) -> Presentation:
    """``name:params``, e.g. ``kassabov:3`` or ``kassabov-mod:2,3``."""
    name, _, params = spec.partition(":")
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    fn, arity = PRESETS[name]
    try:
        args = [int(a) for a in params.split(",")] if params else []
    except ValueError:
        raise ValueError(f"preset parameters must be integers: {params!r}") from None
    if len(args) != arity:
        raise ValueError(f"preset {name} takes {arity} parameter(s)")
    return fn(*args)


_STATEMENT = re.compile(r"[^;\n]+")


def parse_presentation(text: str) -> Presentation:
    ring = None
    names = None
    rels = []
    for lineno, raw in enumerate(text.splitlines() or [""], 1):
        line = raw.split("#", 1)[0]
        for m in _STATEMENT.finditer(line):
            stmt = m.group(0)
            if not stmt.strip():
                continue
            lead_ws = len(stmt) - len(stmt.lstrip())
            col = m.start() + lead_ws + 1
            body = stmt.strip()
            kw, _, arg = body.partition(" ")
            arg_col = col + len(kw) + (len(arg) - len(arg.lstrip())) + 1
            arg = arg.strip()
            if kw == "ring":
                if ring is not None:
                    raise PresentationSyntaxError("duplicate ring statement", lineno, col)
                try:
                    ring = ring_from_spec(arg)
                except ValueError as e:
                    raise PresentationSyntaxError(str(e), lineno, arg_col) from None
            elif kw == "gens":
                if names is not None:
                    raise PresentationSyntaxError("duplicate gens statement", lineno, col)
                names = tuple(arg.split())
                bad = [g for g in names if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", g) or g == "t"]
                if not names or bad or len(set(names)) != len(names):
                    raise PresentationSyntaxError(f"bad generator list {arg!r}", lineno, arg_col)
            elif kw == "rel":
                if ring is None or names is None:
                    raise PresentationSyntaxError("'rel' before 'ring' and 'gens'", lineno, col)
                if not arg:
                    raise PresentationSyntaxError("empty relation", lineno, arg_col)
                try:
                    rel = parse_poly(arg, names, ring)
                except PolySyntaxError as e:
                    raise PresentationSyntaxError(str(e).rsplit(" at column", 1)[0], lineno,
                                                  arg_col + e.column - 1) from None
                if rel.is_zero():
                    raise PresentationSyntaxError("relation is zero", lineno, arg_col)
                rels.append(rel)
            else:
                raise PresentationSyntaxError(f"unknown statement {kw!r}", lineno, col)
    if ring is None or names is None:
        raise PresentationSyntaxError("missing 'ring' or 'gens' statement", 1, 1)
    return Presentation(ring, names, tuple(rels), "file")
