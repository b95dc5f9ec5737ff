"""Quadratic spaces, orthogonal bases, Witt decomposition and discriminants.

The Gram matrix of a :class:`QSpace` stores the polar form ``B`` (no factor
one half), so ``q(x) = B(x, x) / 2``.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy
from sympy import factorint
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from . import linalg as la
from .errors import (
    ConfigInvalid,
    Degenerate,
    DegenerateSubspace,
    DimensionMismatch,
    IsotropicSearchFailed,
    NotSymmetric,
)
from .fields import FieldCtx, FieldSpec, make_field

# bounds for the rational isotropic search in dimension >= 4
TAIL_BOX = 4
TAIL_BUDGET = 2000


class QSpace:
    """A nondegenerate quadratic space ``(F^n, q)`` given by its polar Gram matrix."""

    def __init__(self, gram, field: FieldSpec):
        self.field = field
        self.ctx: FieldCtx = make_field(field)
        ctx = self.ctx
        self.dim = len(gram)
        if self.dim < 1 or any(len(r) != self.dim for r in gram):
            raise DimensionMismatch("Gram matrix must be square and nonempty")
        self.gram = [[ctx(x) for x in row] for row in gram]
        for i in range(self.dim):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise NotSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
        if la.det(ctx, self.gram) == 0:
            raise Degenerate("Gram matrix is singular")
        self._half = 1 / ctx(2)

    def __repr__(self):
        return f"QSpace(dim={self.dim}, field={self.ctx!r})"

    def __eq__(self, other):
        return isinstance(other, QSpace) and self.field == other.field and self.gram == other.gram

    def __hash__(self):
        return hash((self.field, tuple(tuple(self.ctx.key(x) for x in r) for r in self.gram)))

    def _check(self, x):
        if len(x) != self.dim:
            raise DimensionMismatch(f"expected a vector of length {self.dim}, got {len(x)}")

    def polar(self, x, y):
        self._check(x)
        self._check(y)
        acc = self.ctx.zero
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            row = self.gram[i]
            for j, yj in enumerate(y):
                if yj != 0:
                    acc = acc + xi * row[j] * yj
        return acc

    def q(self, x):
        return self.polar(x, x) * self._half

    def vector(self, coords) -> list:
        v = [self.ctx(c) for c in coords]
        self._check(v)
        return v

    def basis_vector(self, i: int) -> list:
        v = [self.ctx.zero] * self.dim
        v[i] = self.ctx.one
        return v

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "gram": [[self.ctx.fmt(x) for x in r] for r in self.gram],
        }


def qspace_from_gram(gram, field: FieldSpec) -> QSpace:
    return QSpace(gram, field)


def parse_form(text: str, field: FieldSpec) -> QSpace:
    """Build a space from shorthand.

    Accepted pieces, joined by ``+``: ``hyperbolic:m`` (m hyperbolic planes
    with ``B(e, f) = 1``), ``anisotropic:[d1, d2]`` and ``diag:[d1, ...]``
    (orthogonal lines with ``q = d``).
    """
    ctx = make_field(field)
    blocks: List[List[list]] = []
    for piece in text.replace(" ", "").split("+"):
        m = re.fullmatch(r"hyperbolic:(\d+)", piece)
        if m:
            for _ in range(int(m.group(1))):
                blocks.append([[0, 1], [1, 0]])
            continue
        m = re.fullmatch(r"(?:anisotropic|diag):\[(.*)\]", piece)
        if m:
            for tok in filter(None, m.group(1).split(",")):
                blocks.append([[2 * ctx.parse(tok)]])
            continue
        raise ConfigInvalid(f"cannot parse form piece {piece!r}")
    n = sum(len(b) for b in blocks)
    if n == 0:
        raise ConfigInvalid("empty form")
    gram = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                gram[k + i][k + j] = x
        k += len(b)
    return QSpace(gram, field)


def load_space(obj) -> QSpace:
    """Space from the JSON config ``{"field": ..., "gram": ...}`` or ``{"field": ..., "form": ...}``."""
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        field = FieldSpec.from_json(obj["field"])
    except KeyError as exc:
        raise ConfigInvalid("config needs a 'field' entry") from exc
    make_field(field)
    if "gram" in obj:
        gram = obj["gram"]
        if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
            raise ConfigInvalid("gram must be a list of rows")
        return QSpace([[str(x) if not isinstance(x, str) else x for x in r] for r in gram], field)
    if "form" in obj:
        return parse_form(obj["form"], field)
    raise ConfigInvalid("config needs 'gram' or 'form'")


# orthogonal bases


def _normalize(space: QSpace, v: list) -> list:
    """Deterministic rescaling: primitive integer vector over Q, leading entry positive."""
    if space.ctx.is_finite:
        return v
    den = 1
    for x in v:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return [Fraction(x, g) for x in ints]


def diagonalize_vectors(space: QSpace, vectors: Sequence[list]) -> Tuple[List[list], list]:
    """Orthogonal basis of ``span(vectors)`` and its q-values.

    Raises DegenerateSubspace when B restricted to the span is degenerate.
    """
    work = la.independent_subset([list(v) for v in vectors])
    out, qs = [], []
    while work:
        idx = next((i for i, w in enumerate(work) if space.q(w) != 0), None)
        if idx is None:
            pair = next(
                ((i, j) for i, j in itertools.combinations(range(len(work)), 2)
                 if space.polar(work[i], work[j]) != 0),
                None,
            )
            if pair is None:
                raise DegenerateSubspace("bilinear form is degenerate on this subspace")
            i, j = pair
            work[i] = la.vec_add(work[i], work[j])
            idx = i
        v = _normalize(space, work.pop(idx))
        bvv = space.polar(v, v)
        out.append(v)
        qs.append(bvv * space._half)
        work = [la.vec_sub(w, la.vec_scale(space.polar(w, v) / bvv, v)) for w in work]
    return out, qs


def orthogonal_diagonalize(space: QSpace) -> Tuple[la.Matrix, list]:
    """Columns of ``basis`` are B-orthogonal with ``q(column i) = diag[i] != 0``."""
    gram_diag = all(space.gram[i][j] == 0 for i in range(space.dim) for j in range(space.dim) if i != j)
    if gram_diag:
        ident = la.identity(space.ctx, space.dim)
        return ident, [space.gram[i][i] * space._half for i in range(space.dim)]
    vecs, qs = diagonalize_vectors(space, [space.basis_vector(i) for i in range(space.dim)])
    return la.from_columns(vecs), qs


# Witt decomposition


@dataclass
class WittBasis:
    space: QSpace
    pairs: List[Tuple[list, list]]
    anisotropic: List[list]
    anisotropic_q: list = field(default_factory=list)

    @property
    def witt_index(self) -> int:
        return len(self.pairs)

    @property
    def vectors(self) -> List[list]:
        """Witt-ordered vectors: anisotropic part first, then e1, f1, ..., em, fm."""
        out = list(self.anisotropic)
        for e, f in self.pairs:
            out += [e, f]
        return out

    @property
    def change(self) -> la.Matrix:
        """Matrix taking Witt coordinates to original coordinates."""
        return la.from_columns(self.vectors)

    def e(self, i: int) -> list:
        return self.pairs[i - 1][0]

    def f(self, i: int) -> list:
        return self.pairs[i - 1][1]

    @property
    def e0(self) -> Optional[list]:
        return self.anisotropic[0] if self.anisotropic else None

    def check(self) -> bool:
        sp = self.space
        ctx = sp.ctx
        pv = [v for pair in self.pairs for v in pair]
        for i, (e, f) in enumerate(self.pairs):
            if sp.q(e) != 0 or sp.q(f) != 0:
                return False
            for j, (e2, f2) in enumerate(self.pairs):
                if sp.polar(e, f2) != (ctx.one if i == j else ctx.zero):
                    return False
                if sp.polar(e, e2) != 0 or sp.polar(f, f2) != 0:
                    return False
        for a in self.anisotropic:
            if any(sp.polar(a, v) != 0 for v in pv):
                return False
        for a, b in itertools.combinations(self.anisotropic, 2):
            if sp.polar(a, b) != 0:
                return False
        if any(sp.q(a) == 0 for a in self.anisotropic):
            return False
        return la.rank(la.from_columns(self.vectors)) == sp.dim if self.vectors else sp.dim == 0


def _short_combinations(vectors: Sequence[list]) -> List[list]:
    """The vectors themselves, then pairwise sums and differences."""
    out = [list(v) for v in vectors]
    for u, w in itertools.combinations(vectors, 2):
        out.append(la.vec_add(u, w))
        out.append(la.vec_sub(u, w))
    return out


def _binary_isotropic(space: QSpace, vectors: Sequence[list]) -> Optional[list]:
    """Isotropic vector in some plane ``span(u, w)`` of short combinations, solved exactly.

    ``q(x u + y w) = a x^2 + b x y + c y^2`` vanishes for ``x/y = (r - b) / 2a``
    whenever the discriminant ``b^2 - 4ac = r^2`` is a square.
    """
    ctx = space.ctx
    cands = [v for v in _short_combinations(vectors) if not la.is_zero_vec(v)]
    for u, w in itertools.combinations(cands, 2):
        a, b, c = space.q(u), space.polar(u, w), space.q(w)
        if a == 0:
            return _normalize(space, u)
        disc = b * b - 4 * a * c
        if disc == 0:
            root = ctx.zero
        else:
            ok, root = ctx.is_square(disc)
            if not ok:
                continue
        vec = la.vec_add(la.vec_scale(root - b, u), la.vec_scale(2 * a, w))
        if not la.is_zero_vec(vec):
            return _normalize(space, vec)
    return None


def _finite_isotropic(space: QSpace, ortho: List[list], qs: list) -> Optional[list]:
    """Exhaustive over subsets of at most three orthogonal vectors."""
    ctx = space.ctx
    n = len(ortho)
    for k in range(2, min(n, 3) + 1):
        for subset in itertools.combinations(range(n), k):
            a0 = qs[subset[0]]
            rest = subset[1:]
            for coeffs in itertools.product(range(ctx.p), repeat=len(rest)):
                if not any(coeffs):
                    continue
                cs = [ctx(c) for c in coeffs]
                s = ctx.zero
                for c, idx in zip(cs, rest):
                    s = s + qs[idx] * c * c
                ok, c0 = ctx.is_square(-s / a0) if s != 0 else (True, ctx.zero)
                if not ok:
                    continue
                vec = la.vec_scale(c0, ortho[subset[0]])
                for c, idx in zip(cs, rest):
                    vec = la.vec_add(vec, la.vec_scale(c, ortho[idx]))
                return vec
    return None


def _squarefree_rescale(v: list, a: Fraction) -> Tuple[list, int]:
    """``(c v, k)`` with ``q(c v) = k`` a squarefree integer, given ``q(v) = a``."""
    n, d = a.numerator, a.denominator
    k = 1 if n * d > 0 else -1
    s = 1
    for prime, e in factorint(abs(n * d)).items():
        if e % 2:
            k *= prime
        s *= prime ** (e // 2)
    return la.vec_scale(Fraction(d, s), v), k


def _legendre(a: int, b: int, c: int) -> Optional[Tuple[int, int, int]]:
    """Nontrivial integer solution of ``a x^2 + b y^2 + c z^2 = 0`` or None when none exists."""
    x, y, z = sympy.symbols("x y z", integer=True)
    sol = diop_ternary_quadratic_normal(a * x**2 + b * y**2 + c * z**2)
    if sol[0] is None:
        return None
    return tuple(int(t) for t in sol)


def _tail_vectors(m: int):
    """Small integer coordinate vectors, up to sign, in order of growing size."""
    for size in range(1, TAIL_BOX + 1):
        for coeffs in itertools.product(range(-size, size + 1), repeat=m):
            if max(abs(c) for c in coeffs) != size:
                continue
            lead = next(c for c in coeffs if c)
            if lead > 0:
                yield coeffs


def _rational_isotropic(space: QSpace, ortho: List[list], qs: list) -> Optional[list]:
    """Legendre's equation on ternary subforms, then on ``<a, b, v>`` for values ``v`` of the rest."""
    scaled = [_squarefree_rescale(v, a) for v, a in zip(ortho, qs)]
    vs = [v for v, _ in scaled]
    ks = [k for _, k in scaled]
    n = len(vs)

    def combine(coeffs, idxs):
        out = [Fraction(0)] * space.dim
        for c, i in zip(coeffs, idxs):
            out = la.vec_add(out, la.vec_scale(Fraction(c), vs[i]))
        return out

    for i, j, k in itertools.combinations(range(n), 3):
        sol = _legendre(ks[i], ks[j], ks[k])
        if sol is not None:
            return _normalize(space, combine(sol, (i, j, k)))
    if n < 4:
        return None
    tried = 0
    for i, j in itertools.combinations(range(n), 2):
        rest = [r for r in range(n) if r not in (i, j)]
        for coeffs in _tail_vectors(len(rest)):
            w = combine(coeffs, rest)
            value = sum(Fraction(c * c * ks[r]) for c, r in zip(coeffs, rest))
            if value == 0:
                return _normalize(space, w)
            w, kv = _squarefree_rescale(w, value)
            sol = _legendre(ks[i], ks[j], kv)
            if sol is not None:
                x, y, z = sol
                return _normalize(space, la.vec_add(combine((x, y), (i, j)), la.vec_scale(Fraction(z), w)))
            tried += 1
            if tried >= TAIL_BUDGET:
                return None
    return None


def find_isotropic(space: QSpace, vectors: Sequence[list]) -> Optional[list]:
    """A nonzero isotropic vector in ``span(vectors)`` or None if the span is anisotropic.

    Over F_p the search is complete (any form of dimension >= 3 is
    isotropic, so subsets of at most three orthogonal vectors suffice).
    Over Q, planes of short combinations are solved through their
    discriminant and ternary subforms through Legendre's equation, both
    exactly. Larger forms pair two diagonal entries with a value of the
    rest from a bounded set; anisotropy is proved only for lines, binary
    forms, ternary forms and definite forms, and otherwise exhaustion raises
    IsotropicSearchFailed.
    """
    ctx = space.ctx
    for v in vectors:
        if not la.is_zero_vec(v) and space.q(v) == 0:
            return list(v)
    if not ctx.is_finite:
        found = _binary_isotropic(space, vectors)
        if found is not None:
            return found
    ortho, qs = diagonalize_vectors(space, vectors)
    n = len(ortho)
    if n < 2:
        return None
    if ctx.is_finite:
        return _finite_isotropic(space, ortho, qs)
    if n == 2:
        ok, c = ctx.is_square(-qs[1] / qs[0])
        return _normalize(space, la.vec_add(la.vec_scale(c, ortho[0]), ortho[1])) if ok else None
    found = _rational_isotropic(space, ortho, qs)
    if found is not None:
        return found
    if n == 3 or all(x > 0 for x in qs) or all(x < 0 for x in qs):
        return None
    raise IsotropicSearchFailed(f"no isotropic vector found in the bounded search (dim {n})")


def witt_decompose_vectors(space: QSpace, vectors: Sequence[list]) -> WittBasis:
    """Witt decomposition of the nondegenerate subspace spanned by ``vectors``."""
    work = la.independent_subset([list(v) for v in vectors])
    pairs = []
    while len(work) >= 2:
        e = find_isotropic(space, work)
        if e is None:
            break
        x = next(w for w in work if space.polar(e, w) != 0)
        c = space.polar(e, x)
        f = la.vec_sub(la.vec_scale(1 / c, x), la.vec_scale(space.q(x) / (c * c), e))
        pairs.append((e, f))
        projected = [
            la.vec_sub(la.vec_sub(w, la.vec_scale(space.polar(w, f), e)), la.vec_scale(space.polar(w, e), f))
            for w in work
        ]
        work = la.independent_subset([w for w in projected if not la.is_zero_vec(w)])
    aniso, aq = diagonalize_vectors(space, work) if work else ([], [])
    return WittBasis(space, pairs, aniso, aq)


def witt_decompose(space: QSpace) -> WittBasis:
    return witt_decompose_vectors(space, [space.basis_vector(i) for i in range(space.dim)])


def expected_witt_index(space: QSpace) -> int:
    """Witt index of a nondegenerate form over a finite field, from dim and discriminant."""
    ctx = space.ctx
    if not ctx.is_finite:
        raise TypeError("closed form only over finite fields")
    n = space.dim
    if n % 2:
        return (n - 1) // 2
    _, qs = orthogonal_diagonalize(space)
    d = ctx((-1) ** (n // 2))
    for x in qs:
        d = d * x
    return n // 2 if ctx.is_square(d)[0] else n // 2 - 1


# subspaces


@dataclass
class Subspace:
    basis: List[list]
    ambient: QSpace

    @property
    def dim(self) -> int:
        return len(self.basis)

    def orthogonal_basis(self) -> Tuple[List[list], list]:
        return diagonalize_vectors(self.ambient, self.basis)

    def is_nondegenerate(self) -> bool:
        if not self.basis:
            return True
        g = [[self.ambient.polar(u, v) for v in self.basis] for u in self.basis]
        return la.det(self.ambient.ctx, g) != 0

    def discriminant(self):
        return discriminant(self)

    def complement(self) -> "Subspace":
        """B-orthogonal complement in the ambient space."""
        sp = self.ambient
        if not self.basis:
            return Subspace([sp.basis_vector(i) for i in range(sp.dim)], sp)
        rows = la.mat_mul([list(b) for b in self.basis], sp.gram)
        return Subspace(la.nullspace(sp.ctx, rows), sp)


def discriminant(w: Subspace):
    """Square class of the product of q over an orthogonal basis of ``w``."""
    if not w.is_nondegenerate():
        raise DegenerateSubspace("discriminant of a degenerate subspace")
    ctx = w.ambient.ctx
    if not w.basis:
        return ctx.one
    _, qs = w.orthogonal_basis()
    d = ctx.one
    for x in qs:
        d = d * x
    return ctx.square_class(d)
