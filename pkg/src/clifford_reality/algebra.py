"""Exact multivector arithmetic in the Clifford algebra C(V, q).

Blades are bitmasks over an internal *orthogonal* basis of V obtained from
:func:`~clifford_reality.quadratic.orthogonal_diagonalize`.  Vectors given
in the user's coordinates (including isotropic Witt vectors) are converted
on the way in and out, so the blade product only ever needs the diagonal
q-values.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg as la
from .errors import ContextMismatch, DimensionMismatch, DimensionTooLarge, NotAVector, NotInvertible
from .quadratic import QSpace, orthogonal_diagonalize

MAX_DIM = 12


def popcount(x: int) -> int:
    return x.bit_count()


def reorder_sign(a: int, b: int) -> int:
    """Sign from moving the generators of blade ``b`` past those of blade ``a``."""
    a >>= 1
    swaps = 0
    while a:
        swaps += popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


# reorder signs depend only on the blades, so one row cache serves every form
_SIGN_ROWS: Dict[Tuple[int, int], List[int]] = {}


def sign_row(n: int, a: int) -> List[int]:
    """``[reorder_sign(a, b) for b in range(2^n)]``, cached."""
    row = _SIGN_ROWS.get((n, a))
    if row is None:
        row = [reorder_sign(a, b) for b in range(1 << n)]
        _SIGN_ROWS[(n, a)] = row
    return row


class CliffordCtx:
    """The algebra C(V, q) for one quadratic space, with its internal basis."""

    def __init__(self, space: QSpace):
        if space.dim > MAX_DIM:
            raise DimensionTooLarge(f"dimension {space.dim} exceeds the cap of {MAX_DIM}")
        self.space = space
        self.field = space.ctx
        self.n = space.dim
        self.size = 1 << self.n
        self.ortho_basis, self.diag = orthogonal_diagonalize(space)
        self.ortho_inverse = la.inverse(self.field, self.ortho_basis)
        self._rows: List[Optional[list]] = [None] * self.size
        # product of the diagonal q-values over the generators of each blade
        prods = [self.field.one] * self.size
        for mask in range(1, self.size):
            low = mask & -mask
            prods[mask] = prods[mask ^ low] * self.diag[low.bit_length() - 1]
        self._diag_products = prods

    def __repr__(self):
        return f"CliffordCtx({self.space!r}, diag={[self.field.fmt(d) for d in self.diag]})"

    def _row(self, a: int) -> list:
        row = self._rows[a]
        if row is None:
            prods = self._diag_products
            row = [prods[a & b] if sg > 0 else -prods[a & b] for b, sg in enumerate(sign_row(self.n, a))]
            self._rows[a] = row
        return row

    def blade_product(self, a: int, b: int):
        """Coefficient ``c`` with ``blade(a) * blade(b) = c * blade(a ^ b)``."""
        return self._row(a)[b]

    # constructors

    def mv(self, terms: Dict[int, object]) -> "Multivector":
        return Multivector(self, {k: self.field(v) for k, v in terms.items()})

    def scalar(self, c) -> "Multivector":
        return Multivector(self, {0: self.field(c)})

    @property
    def one(self) -> "Multivector":
        return self.scalar(1)

    @property
    def zero(self) -> "Multivector":
        return Multivector(self, {})

    def blade(self, indices: Iterable[int]) -> "Multivector":
        """Product of internal basis vectors in the given order."""
        out = self.one
        for i in indices:
            out = out * Multivector(self, {1 << i: self.field.one})
        return out

    def to_internal(self, x: Sequence) -> list:
        if len(x) != self.n:
            raise DimensionMismatch(f"expected {self.n} coordinates, got {len(x)}")
        return la.mat_vec(self.ortho_inverse, [self.field(c) for c in x])

    def to_user(self, y: Sequence) -> list:
        return la.mat_vec(self.ortho_basis, y)

    def vector(self, x: Sequence) -> "Multivector":
        return embed_vector(self, x)

    def product(self, factors: Iterable["Multivector"]) -> "Multivector":
        out = self.one
        for f in factors:
            out = out * f
        return out

    def from_json(self, obj) -> "Multivector":
        terms: Dict[int, object] = {}
        for indices, coef in obj:
            # arbitrary index order is reduced through the product
            m = self.blade(indices)
            for k, v in m.terms.items():
                terms[k] = terms.get(k, self.field.zero) + v * self.field.parse(str(coef))
        return Multivector(self, terms)


class Multivector:
    """A sparse element of C(V, q): blade bitmask -> nonzero scalar."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: CliffordCtx, terms: Dict[int, object]):
        self.ctx = ctx
        self.terms = {k: v for k, v in terms.items() if v != 0}
        self._hash = None

    # arithmetic

    def _same(self, other: "Multivector"):
        if other.ctx is not self.ctx:
            raise ContextMismatch("multivectors from different algebras")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = self.ctx.scalar(other)
        self._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Multivector(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return mv_mul(self, other)
        c = self.ctx.field(other)
        return Multivector(self.ctx, {k: v * c for k, v in self.terms.items()})

    def __rmul__(self, other):
        c = self.ctx.field(other)
        return Multivector(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __truediv__(self, other):
        c = 1 / self.ctx.field(other)
        return self * c

    def __pow__(self, e: int):
        if e < 0:
            return mv_inverse(self) ** (-e)
        out = self.ctx.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            try:
                other = self.ctx.scalar(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.ctx is other.ctx and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.canonical())
        return self._hash

    def canonical(self) -> Tuple:
        key = self.ctx.field.key
        return tuple((k, key(self.terms[k])) for k in sorted(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        fmt = self.ctx.field.fmt
        for k in sorted(self.terms, key=lambda b: (popcount(b), b)):
            idx = [i for i in range(self.ctx.n) if k >> i & 1]
            name = "b" + "".join(map(str, idx)) if idx else ""
            parts.append(f"({fmt(self.terms[k])}){name}")
        return " + ".join(parts)

    # structure

    def grades(self) -> set:
        return {popcount(k) for k in self.terms}

    def grade(self, k: int) -> "Multivector":
        return grade_project(self, k)

    def scalar_part(self):
        return self.terms.get(0, self.ctx.field.zero)

    def is_scalar(self) -> bool:
        return all(k == 0 for k in self.terms)

    def is_even(self) -> bool:
        return is_even(self)

    def is_odd(self) -> bool:
        return all(popcount(k) & 1 for k in self.terms)

    def reversion(self) -> "Multivector":
        return reversion(self)

    def grade_involution(self) -> "Multivector":
        return grade_involution(self)

    def inverse(self) -> "Multivector":
        return mv_inverse(self)

    def to_json(self) -> list:
        fmt = self.ctx.field.fmt
        out = []
        for k in sorted(self.terms):
            out.append([[i for i in range(self.ctx.n) if k >> i & 1], fmt(self.terms[k])])
        return out

    def dense(self) -> list:
        z = self.ctx.field.zero
        return [self.terms.get(k, z) for k in range(self.ctx.size)]


def embed_vector(ctx: CliffordCtx, x: Sequence) -> Multivector:
    y = ctx.to_internal(x)
    return Multivector(ctx, {1 << i: c for i, c in enumerate(y)})


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    a._same(b)
    ctx = a.ctx
    out: Dict[int, object] = {}
    bt = list(b.terms.items())
    for ka, va in a.terms.items():
        row = ctx._row(ka)
        for kb, vb in bt:
            k = ka ^ kb
            v = row[kb] * va * vb
            if k in out:
                out[k] = out[k] + v
            else:
                out[k] = v
    return Multivector(ctx, out)


def reversion(a: Multivector) -> Multivector:
    out = {}
    for k, v in a.terms.items():
        g = popcount(k)
        out[k] = -v if (g * (g - 1) // 2) & 1 else v
    return Multivector(a.ctx, out)


def grade_involution(a: Multivector) -> Multivector:
    return Multivector(a.ctx, {k: (-v if popcount(k) & 1 else v) for k, v in a.terms.items()})


def grade_project(a: Multivector, k: int) -> Multivector:
    if not 0 <= k <= a.ctx.n:
        raise ValueError(f"grade {k} out of range 0..{a.ctx.n}")
    return Multivector(a.ctx, {b: v for b, v in a.terms.items() if popcount(b) == k})


def is_even(a: Multivector) -> bool:
    return all(popcount(k) % 2 == 0 for k in a.terms)


def left_mult_matrix(a: Multivector) -> la.Matrix:
    """Matrix of ``x -> a x`` on the blade basis (columns indexed by blades)."""
    ctx = a.ctx
    m = la.zeros(ctx.field, ctx.size, ctx.size)
    for ka, va in a.terms.items():
        row = ctx._row(ka)
        for kb in range(ctx.size):
            m[ka ^ kb][kb] = m[ka ^ kb][kb] + row[kb] * va
    return m


def mv_inverse(a: Multivector) -> Multivector:
    ctx = a.ctx
    if not a.terms:
        raise NotInvertible("zero is not invertible")
    # versor fast path
    ra = reversion(a)
    nrm = ra * a
    if nrm.is_scalar() and nrm.scalar_part() != 0:
        return ra / nrm.scalar_part()
    m = left_mult_matrix(a)
    rhs = [ctx.field.zero] * ctx.size
    rhs[0] = ctx.field.one
    sol = la.solve(ctx.field, m, rhs)
    if sol is None:
        raise NotInvertible("element is not invertible")
    inv = Multivector(ctx, dict(enumerate(sol)))
    # a left-singular matrix could still admit a solution of the single system
    if mv_mul(a, inv) != ctx.one or mv_mul(inv, a) != ctx.one:
        raise NotInvertible("element is not invertible")
    return inv


def is_invertible(a: Multivector) -> bool:
    try:
        mv_inverse(a)
    except NotInvertible:
        return False
    return True


def extract_vector(a: Multivector) -> list:
    """User coordinates of a pure grade-1 multivector."""
    if any(popcount(k) != 1 for k in a.terms):
        raise NotAVector("multivector has components outside grade 1")
    ctx = a.ctx
    y = [ctx.field.zero] * ctx.n
    for k, v in a.terms.items():
        y[k.bit_length() - 1] = v
    return ctx.to_user(y)


def clifford(space: QSpace) -> CliffordCtx:
    """The (cached) Clifford algebra of ``space``."""
    ctx = getattr(space, "_clifford", None)
    if ctx is None:
        ctx = CliffordCtx(space)
        space._clifford = ctx
    return ctx
