"""Clifford group membership, vector representation, norm, spin and spinor norm.

The vector representation is the untwisted action ``x -> u x u^-1``.  On
an anisotropic vector ``v`` this is ``-S_v`` where ``S_v`` is the
reflection ``x -> x - B(v, x)/q(v) v``.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import List, Sequence

from . import linalg as la
from .algebra import CliffordCtx, Multivector, embed_vector, extract_vector, mv_inverse, reversion
from .errors import NormNotScalar, NotAVector, NotInGamma, NotInvertible, NotSpecialOrthogonal
from .quadratic import QSpace, orthogonal_diagonalize

# finite fields small enough to try every vector as a defect source
EXHAUSTIVE_CANDIDATES = 4096


class OrthMatrix:
    """An isometry of ``space`` written in the user's coordinates."""

    def __init__(self, space: QSpace, matrix: la.Matrix, check: bool = True):
        self.space = space
        self.matrix = [list(r) for r in matrix]
        if check and not is_orthogonal(space, self.matrix):
            raise ValueError("matrix does not preserve the quadratic form")

    @cached_property
    def det(self):
        return la.det(self.space.ctx, self.matrix)

    def __matmul__(self, other: "OrthMatrix") -> "OrthMatrix":
        return OrthMatrix(self.space, la.mat_mul(self.matrix, other.matrix), check=False)

    def __call__(self, x):
        return la.mat_vec(self.matrix, x)

    def __eq__(self, other):
        if isinstance(other, OrthMatrix):
            other = other.matrix
        return la.mat_eq(self.matrix, other)

    def inverse(self) -> "OrthMatrix":
        return OrthMatrix(self.space, la.inverse(self.space.ctx, self.matrix), check=False)

    def is_identity(self) -> bool:
        return la.mat_eq(self.matrix, la.identity(self.space.ctx, self.space.dim))

    def to_json(self) -> list:
        fmt = self.space.ctx.fmt
        return [[fmt(x) for x in r] for r in self.matrix]

    def __repr__(self):
        return f"OrthMatrix({self.to_json()})"


def is_orthogonal(space: QSpace, m: la.Matrix) -> bool:
    return la.mat_eq(la.mat_mul(la.mat_mul(la.transpose(m), space.gram), m), space.gram)


def reflection_matrix(space: QSpace, v: Sequence) -> la.Matrix:
    """Matrix of ``S_v``."""
    qv = space.q(v)
    gv = la.mat_vec(space.gram, v)  # B(v, x) = gv . x
    n = space.dim
    ident = la.identity(space.ctx, n)
    return [[ident[i][j] - v[i] * gv[j] / qv for j in range(n)] for i in range(n)]


def apply_reflection(space: QSpace, v, m: la.Matrix) -> la.Matrix:
    """``S_v @ m`` without forming ``S_v``."""
    qv = space.q(v)
    gv = la.mat_vec(space.gram, v)
    cols = la.columns(m)
    out = []
    for c in cols:
        coef = la.dot(gv, c) / qv
        out.append([ci - coef * vi for ci, vi in zip(c, v)])
    return la.from_columns(out)


class GroupElement:
    """A multivector known to lie in the Clifford group."""

    def __init__(self, mv: Multivector, check: bool = True):
        self.mv = mv
        self.ctx: CliffordCtx = mv.ctx
        if check and not in_gamma(mv):
            raise NotInGamma("element is not in the Clifford group")

    @cached_property
    def parity(self) -> str:
        return "even" if self.mv.is_even() else "odd"

    @property
    def is_even(self) -> bool:
        return self.parity == "even"

    @cached_property
    def inverse_mv(self) -> Multivector:
        return mv_inverse(self.mv)

    @cached_property
    def norm(self):
        return norm(self.mv)

    @cached_property
    def chi(self) -> OrthMatrix:
        return vector_rep(self)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.inverse_mv, check=False)

    def __mul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement(self.mv * other.mv, check=False)
        return GroupElement(self.mv * other, check=False)

    def __rmul__(self, other):
        return GroupElement(other * self.mv, check=False)

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            other = other.mv
        return self.mv == other

    def __hash__(self):
        return hash(self.mv)

    def conj(self, x: Multivector) -> Multivector:
        """``self x self^-1``."""
        return self.mv * x * self.inverse_mv

    def validate(self) -> bool:
        """Recompute the cached invariants from scratch."""
        if not in_gamma(self.mv):
            return False
        return norm(self.mv) == self.norm and vector_rep(self) == self.chi

    def __repr__(self):
        return f"GroupElement({self.mv!r})"


def _as_mv(u) -> Multivector:
    return u.mv if isinstance(u, GroupElement) else u


def in_gamma(u) -> bool:
    u = _as_mv(u)
    if not u.terms:
        return False
    if not (u.is_even() or u.is_odd()):
        return False
    try:
        uinv = mv_inverse(u)
    except NotInvertible:
        return False
    ctx = u.ctx
    for i in range(ctx.n):
        b = Multivector(ctx, {1 << i: ctx.field.one})
        w = u * b * uinv
        if any(bin(k).count("1") != 1 for k in w.terms):
            return False
    return True


def vector_rep(u) -> OrthMatrix:
    g = u if isinstance(u, GroupElement) else GroupElement(u, check=False)
    ctx = g.ctx
    cols = []
    for i in range(ctx.n):
        x = embed_vector(ctx, ctx.space.basis_vector(i))
        try:
            cols.append(extract_vector(g.conj(x)))
        except NotAVector as exc:
            raise NotInGamma("conjugation leaves V") from exc
    return OrthMatrix(ctx.space, la.from_columns(cols), check=False)


def norm(u):
    """``N(u)``: the scalar ``reversion(u) * u``."""
    u = _as_mv(u)
    r = reversion(u) * u
    if not r.is_scalar():
        raise NormNotScalar("reversion(u) * u has non-scalar components")
    return r.scalar_part()


def is_spin(u) -> bool:
    u = _as_mv(u)
    if not in_gamma(u) or not u.is_even():
        return False
    return norm(u) == 1


def as_group_element(u) -> GroupElement:
    return u if isinstance(u, GroupElement) else GroupElement(u)


# reflection factorisation


def _defect_candidates(n: int, ctx):
    one = ctx.one
    zero = ctx.zero
    for i in range(n):
        v = [zero] * n
        v[i] = one
        yield v
    for i, j in itertools.combinations(range(n), 2):
        for c in (one, -one):
            v = [zero] * n
            v[i] = one
            v[j] = c
            yield v
    if ctx.is_finite and ctx.p ** n <= EXHAUSTIVE_CANDIDATES:
        for coords in itertools.product(range(ctx.p), repeat=n):
            if sum(1 for c in coords if c) > 2:
                yield [ctx(c) for c in coords]
    else:
        for i, j, k in itertools.combinations(range(n), 3):
            v = [zero] * n
            v[i] = v[j] = v[k] = one
            yield v


def _is_identity(m) -> bool:
    return all(x == (1 if i == j else 0) for i, r in enumerate(m) for j, x in enumerate(r))


def _defects(space: QSpace, m: la.Matrix):
    """The anisotropic ``m x - x`` over the candidate vectors ``x``."""
    for x in _defect_candidates(space.dim, space.ctx):
        d = la.vec_sub(la.mat_vec(m, x), x)
        if not la.is_zero_vec(d) and space.q(d) != 0:
            yield d


def _anisotropic_defect(space: QSpace, m: la.Matrix):
    """Some ``m x - x`` with ``q != 0``, or None when every defect is isotropic."""
    return next(_defects(space, m), None)


def _good(space: QSpace, m: la.Matrix) -> bool:
    return _is_identity(m) or _anisotropic_defect(space, m) is not None


def _first_good(space: QSpace, m: la.Matrix, vectors):
    """First ``v`` with ``S_v m`` still factorable greedily, else the first ``v`` offered."""
    fallback = None
    for v in vectors:
        if fallback is None:
            fallback = v
        if _good(space, apply_reflection(space, v, m)):
            return v
    return fallback


def reflection_factorize(m) -> List[list]:
    """Anisotropic vectors ``v1..vk`` with ``S_v1 S_v2 ... S_vk = m``.

    Greedy: each reflection ``S_d`` with ``d = N x - x`` fixes ``x`` and every
    vector already fixed by ``N``, so the fixed space grows each step.  A
    defect is preferred when the remaining map still has an anisotropic
    defect.  When all defects are isotropic the current map is first
    composed with a reflection in an anisotropic vector.
    """
    space = m.space
    ctx = space.ctx
    n = space.dim
    cur = [list(r) for r in m.matrix]
    vectors: List[list] = []
    basis, _ = orthogonal_diagonalize(space)
    repairs = la.columns(basis) + [v for v in _defect_candidates(n, ctx) if space.q(v) != 0]
    for _ in range(3 * n + 2):
        if _is_identity(cur):
            return vectors
        d = _first_good(space, cur, _defects(space, cur))
        if d is None:
            d = _first_good(space, cur, repairs)
            if d is None:
                raise RuntimeError("reflection factorisation repair failed")
        vectors.append(d)
        cur = apply_reflection(space, d, cur)
    raise RuntimeError("reflection factorisation did not terminate")


def compose_reflections(space: QSpace, vectors: Sequence) -> la.Matrix:
    out = la.identity(space.ctx, space.dim)
    for v in reversed(vectors):
        out = apply_reflection(space, v, out)
    return out


def _require_special(m: OrthMatrix):
    if m.det != 1:
        raise NotSpecialOrthogonal("determinant is not 1")


def spinor_norm(m: OrthMatrix):
    _require_special(m)
    ctx = m.space.ctx
    prod = ctx.one
    for v in reflection_factorize(m):
        prod = prod * m.space.q(v)
    return ctx.square_class(prod)


def lift_so(m: OrthMatrix, cctx: CliffordCtx) -> GroupElement:
    """An element of the even Clifford group with ``vector_rep = m`` (defined up to scalars)."""
    _require_special(m)
    u = cctx.one
    for v in reflection_factorize(m):
        u = u * embed_vector(cctx, v)
    return GroupElement(u, check=False)


def vector_product(cctx: CliffordCtx, vectors: Sequence) -> Multivector:
    out = cctx.one
    for v in vectors:
        out = out * embed_vector(cctx, v)
    return out
