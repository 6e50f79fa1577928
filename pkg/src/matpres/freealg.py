"""The free associative unital ring on a finite alphabet.

A word is a tuple of generator indices; the empty tuple is the unit monomial.
A :class:`FreePoly` is an immutable map from words to nonzero scalars of one
coefficient ring.  Generators print as ``x, y`` when there are two of them and
as ``g0, g1, ...`` otherwise.
"""

from __future__ import annotations

import re
from typing import Dict, Iterable, Iterator, Mapping, Optional, Sequence, Tuple

from .rings import ZZ, CoefficientRing

Word = Tuple[int, ...]

EMPTY: Word = ()


class RingMismatchError(ValueError):
    pass


class PolySyntaxError(ValueError):
    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"{message} at column {column}")
        self.column = column
        self.text = text


def default_names(nvars: int) -> Tuple[str, ...]:
    if nvars == 2:
        return ("x", "y")
    return tuple(f"g{i}" for i in range(nvars))


def word_concat(u: Word, v: Word) -> Word:
    return u + v


def deglex_key(w: Word):
    return (len(w), w)


def deglex_compare(u: Word, v: Word) -> int:
    """-1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    ku, kv = (len(u), u), (len(v), v)
    return (ku > kv) - (ku < kv)


def sigma_word(w: Word) -> Word:
    return tuple(1 - a for a in reversed(w))


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        run = j - i
        parts.append(names[w[i]] if run == 1 else f"{names[w[i]]}^{run}")
        i = j
    return "*".join(parts)


class FreePoly:
    """Element of ``ring<g_0, ..., g_{nvars-1}>``; immutable, hashable."""

    __slots__ = ("ring", "nvars", "_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Word, object]] = None,
                 ring: CoefficientRing = ZZ, nvars: int = 2):
        if nvars < 1:
            raise ValueError("alphabet must be nonempty")
        clean: Dict[Word, object] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            for a in w:
                if not 0 <= a < nvars:
                    raise ValueError(f"generator index {a} outside alphabet of size {nvars}")
            c = ring.coerce(c)
            if w in clean:
                c = ring.add(clean[w], c)
            if ring.is_zero(c):
                clean.pop(w, None)
            else:
                clean[w] = c
        self.ring = ring
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Word, object], ring, nvars) -> "FreePoly":
        # terms must already be canonical with no zero coefficients
        p = object.__new__(cls)
        p.ring = ring
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, ring=ZZ, nvars=2):
        return cls._raw({}, ring, nvars)

    @classmethod
    def one(cls, ring=ZZ, nvars=2):
        return cls.monomial(EMPTY, 1, ring, nvars)

    @classmethod
    def monomial(cls, word: Iterable[int], coeff=1, ring=ZZ, nvars=2):
        return cls({tuple(word): coeff}, ring, nvars)

    @classmethod
    def gen(cls, index: int, ring=ZZ, nvars=2):
        return cls.monomial((index,), 1, ring, nvars)

    def like(self, terms: Mapping[Word, object]) -> "FreePoly":
        """A polynomial over the same ring and alphabet."""
        return FreePoly(terms, self.ring, self.nvars)

    # -- access -------------------------------------------------------
    @property
    def terms(self) -> Mapping[Word, object]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Word]:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, w: Word):
        return self._terms.get(tuple(w), self.ring.zero())

    def degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def sorted_words(self, descending=True):
        return sorted(self._terms, key=deglex_key, reverse=descending)

    def leading_word(self) -> Word:
        if not self._terms:
            raise ValueError("zero polynomial has no leading word")
        return max(self._terms, key=deglex_key)

    def leading_coefficient(self):
        return self._terms[self.leading_word()]

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "FreePoly"):
        if self.ring != other.ring:
            raise RingMismatchError(f"coefficient rings differ: {self.ring} vs {other.ring}")
        if self.nvars != other.nvars:
            raise RingMismatchError(f"alphabets differ: {self.nvars} vs {other.nvars}")

    def _coerce_other(self, other) -> "FreePoly":
        if isinstance(other, FreePoly):
            self._check(other)
            return other
        if isinstance(other, (int, tuple)):
            return FreePoly({EMPTY: other}, self.ring, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        R = self.ring
        out = dict(self._terms)
        for w, c in other._terms.items():
            if w in out:
                s = R.add(out[w], c)
                if R.is_zero(s):
                    del out[w]
                else:
                    out[w] = s
            else:
                out[w] = c
        return FreePoly._raw(out, R, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        R = self.ring
        return FreePoly._raw({w: R.neg(c) for w, c in self._terms.items()}, R, self.nvars)

    def __sub__(self, other):
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, tuple)):
            return self.scale(other)
        other = self._coerce_other(other)
        if other is NotImplemented:
            return other
        R = self.ring
        out: Dict[Word, object] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 + w2
                c = R.mul(c1, c2)
                if w in out:
                    out[w] = R.add(out[w], c)
                else:
                    out[w] = c
        out = {w: c for w, c in out.items() if not R.is_zero(c)}
        return FreePoly._raw(out, R, self.nvars)

    def __rmul__(self, other):
        if isinstance(other, (int, tuple)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = FreePoly.one(self.ring, self.nvars)
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> "FreePoly":
        R = self.ring
        c = R.coerce(c)
        if R.is_zero(c):
            return FreePoly._raw({}, R, self.nvars)
        out = {}
        for w, d in self._terms.items():
            e = R.mul(c, d)
            if not R.is_zero(e):
                out[w] = e
        return FreePoly._raw(out, R, self.nvars)

    def sandwich(self, u: Word, v: Word, c=1) -> "FreePoly":
        """``c * u * self * v`` for words ``u``, ``v``."""
        R = self.ring
        c = R.coerce(c)
        out = {}
        for w, d in self._terms.items():
            e = R.mul(c, d)
            if not R.is_zero(e):
                out[u + w + v] = e
        return FreePoly._raw(out, R, self.nvars)

    def change_ring(self, ring: CoefficientRing) -> "FreePoly":
        return FreePoly(self._terms, ring, self.nvars)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FreePoly):
            return (self.ring == other.ring and self.nvars == other.nvars
                    and self._terms == other._terms)
        if isinstance(other, int):
            return self == FreePoly({EMPTY: other}, self.ring, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.nvars, frozenset(self._terms.items())))
        return self._hash

    # -- text ---------------------------------------------------------
    def format(self, names: Optional[Sequence[str]] = None, word_fmt=None) -> str:
        names = names or default_names(self.nvars)
        if word_fmt is None:
            def word_fmt(w):
                return format_word(w, names)
        if not self._terms:
            return "0"
        R = self.ring
        out = []
        for w in self.sorted_words():
            c = self._terms[w]
            neg = False
            if R.int_valued and R.modulus == 0 and c < 0:
                neg, c = True, -c
            mono = word_fmt(w)
            cs = R.format(c)
            if cs == "1":
                body = mono
            elif not w:
                body = cs
            else:
                body = f"{cs}*{mono}"
            if not out:
                out.append(f"-{body}" if neg else body)
            else:
                out.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"FreePoly({self.format()!r}, ring={self.ring})"

    def to_dict(self) -> Dict[str, str]:
        names = default_names(self.nvars)
        return {format_word(w, names): self.ring.format(c) for w, c in self._terms.items()}


def swap(p: FreePoly) -> FreePoly:
    """x <-> y without reversal; the automorphism of the remark on ``yx + x^(n-1)y^(n-1) = 1``."""
    if p.nvars != 2:
        raise ValueError("swap is defined on the alphabet {x, y} only")
    return FreePoly._raw({tuple(1 - a for a in w): c for w, c in p.items()}, p.ring, 2)


def sigma(p: FreePoly) -> FreePoly:
    """Reverse every word and swap x <-> y; an involutive anti-automorphism."""
    if p.nvars != 2:
        raise ValueError("sigma is defined on the alphabet {x, y} only")
    return FreePoly._raw({sigma_word(w): c for w, c in p.items()}, p.ring, 2)


# -- parsing -----------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-])|(\S))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, caret, star, sign, bad = m.groups()
        col = m.start(m.lastindex) + 1
        if bad is not None:
            raise PolySyntaxError(f"unexpected character {bad!r}", col, text)
        kind = ("num" if num is not None else "name" if name is not None else
                "^" if caret else "*" if star else "sign")
        tokens.append((kind, m.group(m.lastindex), col))
        pos = m.end()
    return tokens


def parse_poly(text: str, names: Optional[Sequence[str]] = None, ring: CoefficientRing = ZZ,
               nvars: Optional[int] = None) -> FreePoly:
    """Parse the polynomial text syntax, e.g. ``x*y + y^1*x - 1`` or ``3*y^2*x^2``."""
    if names is None:
        names = default_names(nvars if nvars is not None else 2)
    names = tuple(names)
    if nvars is None:
        nvars = len(names)
    index = {nm: i for i, nm in enumerate(names)}
    tokens = _tokenize(text)
    end_col = len(text) + 1
    if not tokens:
        raise PolySyntaxError("empty polynomial", 1, text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("eof", "", end_col)

    terms: Dict[Word, int] = {}
    first = True
    while True:
        kind, val, col = peek()
        sign = 1
        if kind == "sign":
            sign = -1 if val == "-" else 1
            pos += 1
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-', got {val or 'end of input'!r}", col, text)
        first = False
        coeff = sign
        word: list = []
        while True:
            kind, val, col = peek()
            if kind == "num":
                pos += 1
                coeff *= int(val)
            elif kind == "name":
                pos += 1
                if val not in index:
                    raise PolySyntaxError(f"unknown generator {val!r}", col, text)
                power = 1
                if peek()[0] == "^":
                    pos += 1
                    k2, v2, c2 = peek()
                    if k2 != "num":
                        raise PolySyntaxError("expected exponent after '^'", c2, text)
                    pos += 1
                    power = int(v2)
                word.extend([index[val]] * power)
            else:
                raise PolySyntaxError(f"expected a factor, got {val or 'end of input'!r}", col, text)
            if peek()[0] == "*":
                pos += 1
                continue
            break
        w = tuple(word)
        terms[w] = terms.get(w, 0) + coeff
        if peek()[0] == "eof":
            break
    return FreePoly(terms, ring, nvars)
