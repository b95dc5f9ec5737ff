"""Exact scalar arithmetic over the rationals and odd prime fields.

Rationals are plain :class:`fractions.Fraction` values.  Prime-field
residues are :class:`Fp` instances.  Both support the ordinary arithmetic
operators, so the rest of the package never needs to know which field it
is working over; anything field specific (square detection, square
classes, serialisation, enumeration) goes through a :class:`FieldCtx`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Tuple, Union

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod

from .errors import ConfigInvalid, EvenCharacteristic, NotPrime, ZeroInput

# exhaustive square-root tables are built below this bound
SQRT_TABLE_LIMIT = 10_000


class Fp:
    """A residue modulo an odd prime ``p``, stored in ``[0, p)``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return Fp(o * pow(self.v, -1, self.p), self.p)

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            if self.v == 0:
                raise ZeroDivisionError("division by zero in F_%d" % self.p)
            return Fp(pow(pow(self.v, -1, self.p), -e, self.p), self.p)
        return Fp(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.v == other.v and self.p == other.p
        if isinstance(other, int):
            return (other - self.v) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return f"{self.v} mod {self.p}"


Scalar = Union[Fraction, Fp]


@dataclass(frozen=True)
class FieldSpec:
    kind: str  # "rationals" or "prime"
    characteristic: int = 0

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("rationals", 0)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def from_json(cls, obj) -> "FieldSpec":
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ConfigInvalid(f"bad field spec {obj!r}")
        if obj["kind"] == "rationals":
            return cls.rationals()
        if obj["kind"] == "prime":
            try:
                return cls.prime(int(obj["p"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigInvalid(f"bad prime field spec {obj!r}") from exc
        raise ConfigInvalid(f"unknown field kind {obj['kind']!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse CLI shorthand: ``Q``, ``rationals``, ``7``, ``F7`` or ``prime:7``."""
        t = text.strip().lower()
        if t in ("q", "qq", "rationals", "rational"):
            return cls.rationals()
        m = re.fullmatch(r"(?:f|gf|prime:|p)?(\d+)", t)
        if not m:
            raise ConfigInvalid(f"cannot parse field {text!r}")
        return cls.prime(int(m.group(1)))

    def to_json(self) -> dict:
        if self.kind == "rationals":
            return {"kind": "rationals"}
        return {"kind": "prime", "p": self.characteristic}


class FieldCtx:
    """Arithmetic context for one field.  Immutable; obtain via :func:`make_field`."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.characteristic = spec.characteristic
        self.is_finite = spec.kind == "prime"
        self.p = spec.characteristic if self.is_finite else None
        self._sqrt = None
        self._least_nonsquare = None
        if self.is_finite and self.p < SQRT_TABLE_LIMIT:
            # smaller root of each square is the witness
            self._sqrt = {}
            for w in range(1, (self.p - 1) // 2 + 1):
                self._sqrt[w * w % self.p] = w
            self._least_nonsquare = next(a for a in range(2, self.p) if a not in self._sqrt)

    def __repr__(self):
        return "QQ" if not self.is_finite else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    # construction

    def __call__(self, x) -> Scalar:
        if self.is_finite:
            if isinstance(x, Fp):
                if x.p != self.p:
                    raise ValueError(f"element of F_{x.p} used in F_{self.p}")
                return x
            if isinstance(x, str):
                return self.parse(x)
            if isinstance(x, Fraction):
                return Fp(x.numerator, self.p) / Fp(x.denominator, self.p)
            return Fp(int(x), self.p)
        if isinstance(x, Fp):
            raise ValueError("residue used as a rational")
        if isinstance(x, str):
            return self.parse(x)
        return Fraction(x)

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def parse(self, text: str) -> Scalar:
        text = text.strip()
        m = re.fullmatch(r"(-?\d+)\s*mod\s*(\d+)", text)
        if m:
            if not self.is_finite or int(m.group(2)) != self.p:
                raise ConfigInvalid(f"scalar {text!r} does not belong to {self!r}")
            return Fp(int(m.group(1)), self.p)
        try:
            value = Fraction(text)
        except ValueError as exc:
            raise ConfigInvalid(f"cannot parse scalar {text!r}") from exc
        return self(value)

    def fmt(self, a: Scalar) -> str:
        if self.is_finite:
            return f"{a.v} mod {self.p}"
        return str(a)

    # the arithmetic surface is just the operators, spelled out for callers
    # that prefer an explicit context
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        return self.one / a

    def is_zero(self, a) -> bool:
        return a == 0

    def key(self, a) -> Tuple[int, int]:
        """Total order used for canonical output."""
        if self.is_finite:
            return (a.v, 1)
        return (a.numerator, a.denominator)

    # squares

    def is_square(self, a: Scalar) -> Tuple[bool, Optional[Scalar]]:
        a = self(a)
        if a == 0:
            raise ZeroInput("is_square of zero")
        if self.is_finite:
            if self._sqrt is not None:
                w = self._sqrt.get(a.v)
                return (True, Fp(w, self.p)) if w is not None else (False, None)
            roots = sqrt_mod(a.v, self.p, all_roots=True)
            if not roots:
                return False, None
            return True, Fp(min(roots), self.p)
        if a < 0:
            return False, None
        n, d = a.numerator, a.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return True, Fraction(rn, rd)
        return False, None

    def square_class(self, a: Scalar) -> Scalar:
        """Canonical representative of ``a`` modulo nonzero squares."""
        a = self(a)
        if a == 0:
            raise ZeroInput("square_class of zero")
        if self.is_finite:
            if self.is_square(a)[0]:
                return self.one
            return self(self.least_nonsquare())
        return Fraction(_squarefree_part(a.numerator * a.denominator))

    def least_nonsquare(self) -> int:
        if self._least_nonsquare is None:
            self._least_nonsquare = next(
                a for a in range(2, self.p) if not self.is_square(Fp(a, self.p))[0]
            )
        return self._least_nonsquare

    def sqrt(self, a: Scalar) -> Optional[Scalar]:
        if a == 0:
            return self.zero
        return self.is_square(a)[1]

    # enumeration (finite fields only)

    def elements(self) -> Iterator[Scalar]:
        if not self.is_finite:
            raise TypeError("cannot enumerate the rationals")
        return (Fp(v, self.p) for v in range(self.p))

    def nonzero(self) -> Iterator[Scalar]:
        if not self.is_finite:
            raise TypeError("cannot enumerate the rationals")
        return (Fp(v, self.p) for v in range(1, self.p))

    def square_classes(self):
        """Representatives of F*/(F*)^2 (finite fields only)."""
        return [self.one, self(self.least_nonsquare())]


def _squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    out = 1
    for prime, e in factorint(abs(n)).items():
        if e % 2:
            out *= prime
    return sign * out


@lru_cache(maxsize=None)
def make_field(spec: FieldSpec) -> FieldCtx:
    if spec.kind == "rationals":
        if spec.characteristic != 0:
            raise ConfigInvalid("rationals have characteristic 0")
        return FieldCtx(spec)
    if spec.kind != "prime":
        raise ConfigInvalid(f"unknown field kind {spec.kind!r}")
    p = spec.characteristic
    if p == 2:
        raise EvenCharacteristic("characteristic 2 is not supported")
    if p < 2 or not isprime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldCtx(spec)


def QQ() -> FieldCtx:
    return make_field(FieldSpec.rationals())


def GF(p: int) -> FieldCtx:
    return make_field(FieldSpec.prime(p))
