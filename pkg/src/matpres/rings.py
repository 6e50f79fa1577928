"""Coefficient rings.

Scalars are plain Python values so that arithmetic on the common case (integer
coefficients) stays cheap: ``int`` for Z and Z/N, and ``(a, b)`` tuples meaning
``a + b*t`` for dual numbers.  A ring object knows how to canonicalize and
combine its scalars; it never wraps them.
"""

from __future__ import annotations

from math import gcd


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class CoefficientRing:
    """Base class; subclasses are immutable and compare by value."""

    name = "?"

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def coerce(self, c):
        """Bring an int (or a native scalar) into canonical form."""
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def unit_inverse(self, a):
        """Inverse of a unit, or None when ``a`` is not invertible."""
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    @property
    def int_valued(self) -> bool:
        """True when scalars are ints (Z, Z/N)."""
        return False

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()


class IntegerRing(CoefficientRing):
    name = "Z"
    modulus = 0

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, c):
        return int(c)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def is_zero(self, a):
        return a == 0

    def unit_inverse(self, a):
        return a if a in (1, -1) else None

    @property
    def int_valued(self):
        return True


class IntegerModRing(CoefficientRing):
    """Z/N; the canonical representative lives in ``[0, N)``."""

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        self.modulus = int(modulus)
        self.is_field = is_prime(self.modulus)

    @property
    def name(self):
        if self.is_field:
            return f"F{self.modulus}"
        return f"Z/{self.modulus}"

    def _key(self):
        return (self.modulus,)

    def zero(self):
        return 0

    def one(self):
        return 1

    def coerce(self, c):
        return int(c) % self.modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def sub(self, a, b):
        return (a - b) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def is_zero(self, a):
        return a == 0

    def unit_inverse(self, a):
        if gcd(a, self.modulus) != 1:
            return None
        return pow(a, -1, self.modulus)

    @property
    def int_valued(self):
        return True


class DualNumbers(CoefficientRing):
    """``base[t]/(t^2)``; a scalar is a pair ``(a, b)`` meaning ``a + b*t``."""

    def __init__(self, base: CoefficientRing):
        if not base.int_valued:
            raise ValueError("dual numbers need an integer-valued base ring")
        self.base = base

    @property
    def name(self):
        return f"{self.base.name}[t]"

    def _key(self):
        return (self.base,)

    def zero(self):
        return (0, 0)

    def one(self):
        return (1, 0)

    def coerce(self, c):
        if isinstance(c, tuple):
            a, b = c
        else:
            a, b = c, 0
        return (self.base.coerce(a), self.base.coerce(b))

    def add(self, u, v):
        B = self.base
        return (B.add(u[0], v[0]), B.add(u[1], v[1]))

    def mul(self, u, v):
        B = self.base
        return (B.mul(u[0], v[0]), B.add(B.mul(u[0], v[1]), B.mul(u[1], v[0])))

    def neg(self, u):
        return (self.base.neg(u[0]), self.base.neg(u[1]))

    def is_zero(self, u):
        return u[0] == 0 and u[1] == 0

    def unit_inverse(self, u):
        inv = self.base.unit_inverse(u[0])
        if inv is None:
            return None
        # (a + bt)^-1 = a^-1 - b a^-2 t
        B = self.base
        return (inv, B.neg(B.mul(u[1], B.mul(inv, inv))))

    def format(self, u):
        a, b = u
        if b == 0:
            return str(a)
        if a == 0:
            return f"{b}*t"
        return f"({a} + {b}*t)" if b > 0 else f"({a} - {-b}*t)"


ZZ = IntegerRing()


def ring_from_spec(spec: str) -> CoefficientRing:
    """Parse ``Z``, ``Z/N``, ``Fp``, ``Z[t]`` or ``Z/N[t]``."""
    s = spec.strip().replace(" ", "")
    dual = s.endswith("[t]")
    if dual:
        s = s[:-3]
    if s == "Z":
        base = ZZ
    elif s.startswith("Z/") and s[2:].isdigit():
        base = IntegerModRing(int(s[2:]))
    elif s.startswith("F") and s[1:].isdigit():
        p = int(s[1:])
        if not is_prime(p):
            raise ValueError(f"F{p}: {p} is not prime")
        base = IntegerModRing(p)
    else:
        raise ValueError(f"unknown coefficient ring {spec!r}")
    return DualNumbers(base) if dual else base
