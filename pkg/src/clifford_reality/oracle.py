"""Brute-force ground truth over small prime fields.

Elements of C(V, q) over F_p are held as integer numpy vectors of length
``2^n`` (one residue per internal blade).  Group tables are built by
breadth-first closure under right multiplication by generators, conjugacy
classes by orbits under conjugation by the same generators, and realness
is read off the orbit (a witness conjugator is tracked along the way).
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg as la
from .algebra import CliffordCtx, Multivector, clifford, embed_vector, popcount
from .errors import CentralizerTooLarge, OrderCapExceeded, PreconditionViolated
from .fields import Fp
from .groups import is_spin, norm, reflection_matrix, spinor_norm, vector_rep
from .quadratic import (
    QSpace,
    Subspace,
    diagonalize_vectors,
    expected_witt_index,
    find_isotropic,
    witt_decompose_vectors,
)
from .torus import eigen_split, pair_vector

DEFAULT_ORDER_CAP = 1_000_000
MAX_ENUM_DIM = 5
MAX_ENUM_PRIME = 5
COSET_BUDGET = 200_000


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("CLIFFORD_REALITY_THREADS", "1")))
    except ValueError:
        return 1


class NpAlgebra:
    """Vectorised arithmetic in C(V, q) over F_p on the internal blade basis."""

    def __init__(self, cctx: CliffordCtx):
        field_ = cctx.field
        if not field_.is_finite:
            raise PreconditionViolated("the oracle works over prime fields only")
        self.cctx = cctx
        self.p = field_.p
        self.n = cctx.n
        self.size = cctx.size
        idx = np.arange(self.size)
        self.xor = idx[:, None] ^ idx[None, :]
        self.sign = np.array(
            [[int(cctx.blade_product(a, b)) for b in range(self.size)] for a in range(self.size)],
            dtype=np.int64,
        )
        grades = np.array([popcount(k) for k in range(self.size)])
        self.even_mask = grades % 2 == 0
        self.rev_sign = np.where((grades * (grades - 1) // 2) % 2 == 1, -1, 1).astype(np.int64)
        # blade * blade is the scalar sign[k, k]
        self.square = np.diagonal(self.sign).copy()
        self.dtype = np.uint8 if self.p < 256 else np.int64

    # conversion

    def from_mv(self, a: Multivector) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        for k, v in a.terms.items():
            out[k] = int(v)
        return out

    def to_mv(self, x: np.ndarray) -> Multivector:
        p = self.p
        return Multivector(self.cctx, {k: Fp(int(c), p) for k, c in enumerate(x) if c % p})

    def key(self, x: np.ndarray) -> bytes:
        return np.asarray(x % self.p, dtype=self.dtype).tobytes()

    def keys(self, xs: np.ndarray) -> List[bytes]:
        arr = np.asarray(xs % self.p, dtype=self.dtype)
        return [row.tobytes() for row in arr]

    def scalar(self, c: int) -> np.ndarray:
        out = np.zeros(self.size, dtype=np.int64)
        out[0] = c % self.p
        return out

    # products

    def right_matrix(self, c: np.ndarray) -> np.ndarray:
        """``M`` with ``x * c == M @ x``."""
        m = np.zeros((self.size, self.size), dtype=np.int64)
        a = np.arange(self.size)[:, None].repeat(self.size, 1)
        m[self.xor, a] = self.sign * c[None, :]  # rows a^b, column a
        return m % self.p

    def left_matrix(self, c: np.ndarray) -> np.ndarray:
        """``M`` with ``c * x == M @ x``."""
        m = np.zeros((self.size, self.size), dtype=np.int64)
        b = np.arange(self.size)[None, :].repeat(self.size, 0)
        m[self.xor, b] = self.sign * c[:, None]  # rows a^b, column b
        return m % self.p

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Row-wise products of two equally shaped batches (or single vectors)."""
        x2 = np.atleast_2d(x)
        y2 = np.atleast_2d(y)
        out = np.zeros(np.broadcast_shapes(x2.shape, y2.shape), dtype=np.int64)
        for a in range(self.size):
            xa = x2[:, a:a + 1]
            if not xa.any():
                continue
            out[:, self.xor[a]] += xa * (y2 * self.sign[a])
        out %= self.p
        return out if np.ndim(x) > 1 or np.ndim(y) > 1 else out[0]

    def mul_right(self, xs: np.ndarray, c: np.ndarray) -> np.ndarray:
        return (xs @ self.right_matrix(c).T) % self.p

    def mul_left(self, c: np.ndarray, xs: np.ndarray) -> np.ndarray:
        return (xs @ self.left_matrix(c).T) % self.p

    def reversion(self, xs: np.ndarray) -> np.ndarray:
        return (xs * self.rev_sign) % self.p

    def norms(self, xs: np.ndarray) -> np.ndarray:
        """Scalar part of ``reversion(x) * x`` (the full norm for Clifford group elements)."""
        xs2 = np.atleast_2d(xs)
        return ((xs2 * xs2 * self.rev_sign * self.square).sum(axis=1)) % self.p

    def inverses(self, xs: np.ndarray) -> np.ndarray:
        """Inverses of Clifford group elements via ``reversion / N``."""
        xs2 = np.atleast_2d(xs)
        nrm = self.norms(xs2)
        inv = np.array([pow(int(v), -1, self.p) for v in nrm], dtype=np.int64)
        return (self.reversion(xs2) * inv[:, None]) % self.p

    def vector(self, x: Sequence) -> np.ndarray:
        return self.from_mv(embed_vector(self.cctx, x))


def nullspace_mod_p(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning ``{x : a x = 0}`` over F_p."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        f = m[:, c].copy()
        f[r] = 0
        m = (m - np.outer(f, m[r])) % p
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    out = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        out[i, fc] = 1
        for j, pc in enumerate(pivots):
            out[i, pc] = (-m[j, fc]) % p
    return out


# generators and closure


def all_vectors(space: QSpace) -> Iterable[list]:
    ctx = space.ctx
    for coords in itertools.product(range(ctx.p), repeat=space.dim):
        yield [ctx(c) for c in coords]


def line_representatives(space: QSpace) -> Iterable[list]:
    """One nonzero vector per line: leading nonzero coordinate 1."""
    for v in all_vectors(space):
        lead = next((c for c in v if c != 0), None)
        if lead == 1:
            yield v


def _candidates(alg: NpAlgebra, kind: str) -> Iterable[np.ndarray]:
    """Batches of candidate generators for the requested group."""
    space = alg.cctx.space
    vecs = [(v, space.q(v)) for v in all_vectors(space)]
    aniso = [(v, qv) for v, qv in vecs if qv != 0]
    if kind == "gamma":
        yield np.array([alg.vector(v) for v, _ in aniso], dtype=np.int64)
        return
    reps = [(v, qv) for v, qv in line_representatives_q(space) if qv != 0]
    for v, qv in reps:
        if kind == "spin":
            ws = [w for w, qw in aniso if qv * qw == 1]
        else:
            ws = [w for w, _ in aniso]
        if not ws:
            continue
        batch = np.array([alg.vector(w) for w in ws], dtype=np.int64)
        yield alg.mul_left(alg.vector(v), batch)


def line_representatives_q(space: QSpace):
    for v in line_representatives(space):
        yield v, space.q(v)


@dataclass
class GroupTable:
    """An enumerated finite subgroup of the Clifford group over F_p."""

    alg: NpAlgebra
    kind: str  # "spin", "gamma_plus" or "gamma"
    elements: np.ndarray
    index: Dict[bytes, int]
    generators: List[np.ndarray]
    predicted_order: Optional[int] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def space(self) -> QSpace:
        return self.alg.cctx.space

    def index_of(self, x) -> Optional[int]:
        if isinstance(x, Multivector):
            x = self.alg.from_mv(x)
        return self.index.get(self.alg.key(x))

    def __contains__(self, x) -> bool:
        return self.index_of(x) is not None

    def mv(self, i: int) -> Multivector:
        return self.alg.to_mv(self.elements[i])

    def lookup(self, xs: np.ndarray) -> np.ndarray:
        out = np.empty(len(xs), dtype=np.int64)
        for i, k in enumerate(self.alg.keys(xs)):
            out[i] = self.index[k]
        return out

    def inverse_indices(self) -> np.ndarray:
        return self.lookup(self.alg.inverses(self.elements))

    def identity_index(self) -> int:
        return self.index[self.alg.key(self.alg.scalar(1))]

    def element_set(self) -> set:
        return set(self.index)


class _Closure:
    def __init__(self, alg: NpAlgebra, cap: int):
        self.alg = alg
        self.cap = cap
        self.rows: List[np.ndarray] = [alg.scalar(1)]
        self.index: Dict[bytes, int] = {alg.key(self.rows[0]): 0}
        self.gens: List[np.ndarray] = []
        self.right: List[np.ndarray] = []

    def _absorb(self, batch: np.ndarray) -> np.ndarray:
        fresh = []
        for row, k in zip(batch, self.alg.keys(batch)):
            if k not in self.index:
                self.index[k] = len(self.rows)
                self.rows.append(row)
                fresh.append(row)
                if len(self.rows) > self.cap:
                    raise OrderCapExceeded(f"group order exceeds the cap of {self.cap}")
        return np.array(fresh, dtype=np.int64).reshape(-1, self.alg.size)

    def add_generator(self, g: np.ndarray) -> None:
        rmat = self.alg.right_matrix(g).T
        self.gens.append(g)
        self.right.append(rmat)
        frontier = self._absorb((np.array(self.rows) @ rmat) % self.alg.p)
        while len(frontier):
            found = [self._absorb((frontier @ r) % self.alg.p) for r in self.right]
            frontier = np.concatenate(found) if found else frontier[:0]

    def offer(self, batch: np.ndarray) -> None:
        for row, k in zip(batch, self.alg.keys(batch)):
            if k not in self.index:
                self.add_generator(row)


def closure(alg: NpAlgebra, batches: Iterable[np.ndarray], cap: int = DEFAULT_ORDER_CAP):
    """Group generated by the candidate rows; a candidate becomes a generator only if new."""
    c = _Closure(alg, cap)
    for batch in batches:
        c.offer(batch)
    return np.array(c.rows, dtype=np.int64), c.index, c.gens


def orthogonal_order(space: QSpace) -> int:
    """``|SO(V)|`` over F_p."""
    q = space.ctx.p
    n = space.dim
    if n == 1:
        return 1
    m = n // 2
    if n % 2:
        out = q ** (m * m)
        for i in range(1, m + 1):
            out *= q ** (2 * i) - 1
        return out
    split = expected_witt_index(space) == m
    out = q ** (m * (m - 1)) * (q ** m - 1 if split else q ** m + 1)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


def predicted_order(space: QSpace, kind: str) -> int:
    so = orthogonal_order(space)
    spin = 2 if space.dim == 1 else so
    if kind == "spin":
        return spin
    gp = (space.ctx.p - 1) * so
    return gp if kind == "gamma_plus" else 2 * gp


def _check_caps(space: QSpace, max_dim: int, max_prime: int):
    ctx = space.ctx
    if not ctx.is_finite:
        raise PreconditionViolated("enumeration needs a prime field")
    if space.dim > max_dim or ctx.p > max_prime:
        raise OrderCapExceeded(
            f"full enumeration is capped at dim <= {max_dim}, p <= {max_prime}; use the coset mode"
        )


def enumerate_group(space: QSpace, kind: str = "spin", cap: int = DEFAULT_ORDER_CAP,
                    max_dim: int = MAX_ENUM_DIM, max_prime: int = MAX_ENUM_PRIME,
                    shuffle_seed: Optional[int] = None) -> GroupTable:
    """Breadth-first closure of Spin, the even Clifford group or the Clifford group."""
    if kind not in ("spin", "gamma_plus", "gamma"):
        raise ValueError(f"unknown group kind {kind!r}")
    _check_caps(space, max_dim, max_prime)
    predicted = predicted_order(space, kind)
    if predicted > cap:
        raise OrderCapExceeded(f"predicted order {predicted} exceeds the cap of {cap}")
    alg = NpAlgebra(clifford(space))
    batches = _candidates(alg, kind)
    if shuffle_seed is not None:
        rows = np.concatenate(list(batches))
        rng = np.random.default_rng(shuffle_seed)
        batches = [rows[rng.permutation(len(rows))]]
    elems, index, gens = closure(alg, batches, cap)
    return GroupTable(alg, kind, elems, index, gens, predicted)


def enumerate_spin(space: QSpace, cap: int = DEFAULT_ORDER_CAP, **kw) -> GroupTable:
    return enumerate_group(space, "spin", cap, **kw)


# conjugacy classes and realness


def conjugation_permutation(table: GroupTable, g: np.ndarray) -> np.ndarray:
    """Index map ``x -> g x g^-1`` on the table."""
    alg = table.alg
    ginv = alg.inverses(g)[0]
    moved = alg.mul_left(g, alg.mul_right(table.elements, ginv))
    return table.lookup(moved)


def left_permutation(table: GroupTable, g: np.ndarray) -> np.ndarray:
    """Index map ``x -> g x`` on the table."""
    return table.lookup(table.alg.mul_left(g, table.elements))


def element_order(table: GroupTable, i: int) -> int:
    alg = table.alg
    one = table.identity_index()
    x = table.elements[i]
    cur = x
    k = 1
    while table.index_of(cur) != one:
        cur = alg.mul(cur, x)
        k += 1
        if k > table.order:
            raise RuntimeError("element order exceeds the group order")
    return k


def is_semisimple_ff(t, p: Optional[int] = None, table: Optional[GroupTable] = None) -> bool:
    """Order coprime to ``p``; ``t`` is an index into ``table`` or a multivector."""
    if table is None:
        return _order_coprime_mv(t, p)
    i = t if isinstance(t, (int, np.integer)) else table.index_of(t)
    return gcd(element_order(table, int(i)), table.alg.p) == 1


def _order_coprime_mv(t: Multivector, p: Optional[int]) -> bool:
    p = p if p is not None else t.ctx.field.p
    one = t.ctx.one
    cur = t
    k = 1
    # the unit group of C(V, q) over F_p is finite
    while cur != one:
        cur = cur * t
        k += 1
        if k > p ** (2 * t.ctx.size):
            raise RuntimeError("element is not invertible")
    return gcd(k, p) == 1


def real_in_group(t, table: GroupTable) -> Optional[Multivector]:
    """First table element ``s`` (in table order) with ``s t s^-1 = t^-1``, by exhaustive scan."""
    alg = table.alg
    tv = alg.from_mv(t) if isinstance(t, Multivector) else np.asarray(t)
    tinv = alg.inverses(tv)[0]
    st = alg.mul_right(table.elements, tv)
    ts = alg.mul_left(tinv, table.elements)
    hits = np.nonzero((st == ts).all(axis=1))[0]
    if len(hits) == 0:
        return None
    return table.mv(int(hits[0]))


@dataclass
class ClassInfo:
    representative: int
    size: int
    order: int
    is_semisimple: bool
    is_real: bool
    witness: Optional[int]

    def to_json(self, table: GroupTable) -> dict:
        return {
            "representative": table.mv(self.representative).to_json(),
            "size": self.size,
            "order": self.order,
            "is_semisimple": self.is_semisimple,
            "is_real": self.is_real,
            "witness": None if self.witness is None else table.mv(self.witness).to_json(),
        }


@dataclass
class ClassReport:
    table: GroupTable
    classes: List[ClassInfo]
    class_of: np.ndarray = field(repr=False)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def real_class_count(self) -> int:
        return sum(c.is_real for c in self.classes)

    @property
    def semisimple_class_count(self) -> int:
        return sum(c.is_semisimple for c in self.classes)

    @property
    def semisimple_real_count(self) -> int:
        return sum(c.is_real and c.is_semisimple for c in self.classes)

    def sizes_sum_to_order(self) -> bool:
        return sum(c.size for c in self.classes) == self.table.order

    def all_semisimple_real(self) -> bool:
        return self.semisimple_real_count == self.semisimple_class_count

    def verify_witnesses(self) -> bool:
        """Recheck every witness by exact multivector arithmetic."""
        for c in self.classes:
            if c.is_real:
                t = self.table.mv(c.representative)
                s = self.table.mv(c.witness)
                if s * t != t.inverse() * s:
                    return False
        return True

    def to_json(self) -> dict:
        t = self.table
        return {
            "group": t.kind,
            "field": t.space.ctx.spec.to_json(),
            "dim": t.space.dim,
            "order": t.order,
            "predicted_order": t.predicted_order,
            "class_count": self.class_count,
            "real_class_count": self.real_class_count,
            "semisimple_class_count": self.semisimple_class_count,
            "semisimple_real_count": self.semisimple_real_count,
            "sizes_sum_to_order": self.sizes_sum_to_order(),
            "classes": [c.to_json(t) for c in self.classes],
        }


def conjugacy_classes(table: GroupTable, conjugators: Optional[Sequence[np.ndarray]] = None):
    """Orbits under conjugation by ``conjugators`` (default: the table generators).

    Returns ``(class_of, conj)`` where ``conj[x]`` is an element ``c`` with
    ``c rep c^-1 = x`` for the first-indexed representative ``rep`` of x's class.
    """
    gens = list(conjugators) if conjugators is not None else table.generators
    perms = [conjugation_permutation(table, g) for g in gens]
    lefts = [left_permutation(table, g) for g in gens]
    n = table.order
    class_of = np.full(n, -1, dtype=np.int64)
    conj = np.full(n, -1, dtype=np.int64)
    one = table.identity_index()
    cid = 0
    for start in range(n):
        if class_of[start] >= 0:
            continue
        class_of[start] = cid
        conj[start] = one
        queue = [start]
        for x in queue:
            for perm, left in zip(perms, lefts):
                y = perm[x]
                if class_of[y] < 0:
                    class_of[y] = cid
                    conj[y] = left[conj[x]]
                    queue.append(int(y))
        cid += 1
    return class_of, conj


def class_report(table: GroupTable, conjugators: Optional[Sequence[np.ndarray]] = None) -> ClassReport:
    class_of, conj = conjugacy_classes(table, conjugators)
    inv = table.inverse_indices()
    sizes = np.bincount(class_of)
    reps: Dict[int, int] = {}
    for i, c in enumerate(class_of):
        reps.setdefault(int(c), i)
    classes = []
    p = table.alg.p
    for c in range(len(sizes)):
        r = reps[c]
        order = element_order(table, r)
        rinv = int(inv[r])
        real = class_of[rinv] == c
        classes.append(ClassInfo(r, int(sizes[c]), order, gcd(order, p) == 1, bool(real),
                                 int(conj[rinv]) if real else None))
    return ClassReport(table, classes, class_of)


# cross-checks of the exact sequences


def chi_kernel(table: GroupTable) -> List[int]:
    """Indices of table elements commuting with every vector."""
    alg = table.alg
    keep = np.ones(table.order, dtype=bool)
    for i in range(alg.n):
        b = np.zeros(alg.size, dtype=np.int64)
        b[1 << i] = 1
        keep &= (alg.mul_right(table.elements, b) == alg.mul_left(b, table.elements)).all(axis=1)
    return [int(i) for i in np.nonzero(keep)[0]]


def kernel_is_scalars(table: GroupTable) -> bool:
    ker = chi_kernel(table)
    p = table.alg.p
    scalars = {table.index_of(table.alg.scalar(c)) for c in range(1, p)}
    return set(ker) == scalars and None not in scalars


def spinor_norm_agrees(table: GroupTable) -> Tuple[int, int]:
    """``(checked, failures)`` for ``spinor_norm(chi(u)) == square_class(N(u))`` over even table elements."""
    ctx = table.space.ctx
    checked = failures = 0
    for i in range(table.order):
        u = table.mv(i)
        if not u.is_even():
            continue
        checked += 1
        if spinor_norm(vector_rep(u)) != ctx.square_class(norm(u)):
            failures += 1
    return checked, failures


def feit_zuckerman_check(space: QSpace) -> Tuple[int, int]:
    """Every Spin element is conjugate to its inverse inside the full Clifford group.

    Returns ``(spin_elements, failures)``.
    """
    gamma = enumerate_group(space, "gamma")
    report = class_report(gamma)
    inv = gamma.inverse_indices()
    alg = gamma.alg
    norms = alg.norms(gamma.elements)
    even = (gamma.elements[:, ~alg.even_mask] == 0).all(axis=1)
    spin = np.nonzero(even & (norms == 1))[0]
    fails = sum(1 for i in spin if report.class_of[inv[i]] != report.class_of[i])
    return len(spin), fails


# centraliser-coset decision


def _np_matrix(m, p: int) -> np.ndarray:
    return np.array([[int(x) for x in row] for row in m], dtype=np.int64) % p


def twisted_lift(alg: NpAlgebra, g: np.ndarray) -> np.ndarray:
    """``u`` in the Clifford group with ``(-1)^|u| u x u^-1 = g x`` for all vectors ``x``.

    ``g`` is an isometry in user coordinates; the parity of ``u`` is that
    of ``det g`` (a reflection ``S_v`` lifts to ``v``).
    """
    space = alg.cctx.space
    ctx = space.ctx
    p = alg.p
    det = int(la.det(ctx, [[ctx(int(x)) for x in row] for row in g]))
    odd = det == p - 1
    cols = ~alg.even_mask if odd else alg.even_mask
    sgn = -1 if odd else 1
    blocks = []
    for i in range(alg.n):
        x = alg.vector(space.basis_vector(i))
        gx = alg.vector([ctx(int(c)) for c in g[:, i]])
        blocks.append(alg.right_matrix(x) - sgn * alg.left_matrix(gx))
    system = np.concatenate(blocks)[:, cols] % p
    null = nullspace_mod_p(system, p)
    if len(null) != 1:
        raise RuntimeError(f"lift is not unique up to scalars ({len(null)} solutions)")
    u = np.zeros(alg.size, dtype=np.int64)
    u[cols] = null[0]
    return u


def _span_vectors(ctx, basis: Sequence[list]) -> Iterable[list]:
    """Line representatives of the span of ``basis``."""
    k = len(basis)
    for coeffs in itertools.product(range(ctx.p), repeat=k):
        lead = next((c for c in coeffs if c), 0)
        if lead != 1:
            continue
        v = [ctx.zero] * len(basis[0])
        for c, b in zip(coeffs, basis):
            if c:
                v = la.vec_add(v, la.vec_scale(ctx(c), b))
        yield v


def _gl_generators(ctx, c: int) -> List[list]:
    """Generators of ``GL_c(F_p)``: a primitive-root dilation and the elementary transvections."""
    p = ctx.p
    root = next(a for a in range(2, p + 1) if all(pow(a, (p - 1) // r, p) != 1
                                                  for r in _prime_factors(p - 1))) if p > 2 else 1
    out = []
    ident = [[ctx.one if i == j else ctx.zero for j in range(c)] for i in range(c)]
    d = [list(r) for r in ident]
    d[0][0] = ctx(root)
    out.append(d)
    for i, j in itertools.permutations(range(c), 2):
        e = [list(r) for r in ident]
        e[i][j] = ctx.one
        out.append(e)
    return out


def _prime_factors(n: int) -> List[int]:
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            if d not in out:
                out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


@dataclass
class CosetDecision:
    """Outcome of scanning ``g0 Z_O(chi(t))`` for a Spin conjugator of ``t`` to ``t^-1``."""

    real: bool
    witness: Optional[Multivector]
    centralizer_order: int
    scanned: int
    strongly_regular: bool
    verified: bool

    def to_json(self) -> dict:
        return {
            "real": self.real,
            "witness": None if self.witness is None else self.witness.to_json(),
            "centralizer_order": self.centralizer_order,
            "scanned": self.scanned,
            "strongly_regular": self.strongly_regular,
            "witness_verified": self.verified,
        }


class _Centralizer:
    """``Z_O(chi(t))`` as matrices in user coordinates with twisted lifts, by closure."""

    def __init__(self, alg: NpAlgebra, split, budget: int):
        self.alg = alg
        self.p = alg.p
        space = alg.cctx.space
        ctx = space.ctx
        self.space = space
        blocks = [split.one.basis, split.minus_one.basis]
        cols = blocks[0] + blocks[1]
        for b in split.pairs:
            cols += b.xs + b.ys
        self.change = la.from_columns(cols)
        self.change_inv = la.inverse(ctx, self.change)
        gens = []
        for basis in blocks:
            if basis:
                for v in _span_vectors(ctx, basis):
                    if space.q(v) != 0:
                        gens.append(_np_matrix(reflection_matrix(space, v), self.p))
        offset = len(cols) - sum(2 * len(b.xs) for b in split.pairs)
        n = space.dim
        for b in split.pairs:
            c = len(b.xs)
            for a in _gl_generators(ctx, c):
                a_inv_t = la.transpose(la.inverse(ctx, a))
                blk = la.identity(ctx, n)
                for i in range(c):
                    for j in range(c):
                        blk[offset + i][offset + j] = a[i][j]
                        blk[offset + c + i][offset + c + j] = a_inv_t[i][j]
                gens.append(self._to_user(blk))
            offset += 2 * c
        self.gens = gens
        self.lifts = [twisted_lift(alg, g) for g in gens]
        self._close(budget)

    def _to_user(self, blk) -> np.ndarray:
        return _np_matrix(la.mat_mul(la.mat_mul(self.change, blk), self.change_inv), self.p)

    def _close(self, budget: int):
        p = self.p
        n = self.space.dim
        ident = np.eye(n, dtype=np.int64)
        self.mats = [ident]
        self.lift_rows = [self.alg.scalar(1)]
        seen = {ident.astype(np.uint8).tobytes()}
        frontier = [0]
        rights = [self.alg.right_matrix(l).T for l in self.lifts]
        while frontier:
            fm = np.array([self.mats[i] for i in frontier])
            fl = np.array([self.lift_rows[i] for i in frontier])
            nxt = []
            for g, r in zip(self.gens, rights):
                prods = (fm @ g) % p
                lifts = (fl @ r) % p
                for m, l in zip(prods, lifts):
                    k = m.astype(np.uint8).tobytes() if p < 256 else m.tobytes()
                    if k in seen:
                        continue
                    seen.add(k)
                    self.mats.append(m)
                    self.lift_rows.append(l)
                    nxt.append(len(self.mats) - 1)
                    if len(self.mats) > budget:
                        raise CentralizerTooLarge(
                            f"centraliser of chi(t) exceeds the budget of {budget} elements")
            frontier = nxt
        self.lift_rows = np.array(self.lift_rows, dtype=np.int64)

    def swap(self, split) -> np.ndarray:
        """``g0``: identity on ``V_1 + V_-1``, exchanging each dual pair ``x_k <-> y_k``."""
        ctx = self.space.ctx
        n = self.space.dim
        blk = la.identity(ctx, n)
        offset = len(split.one.basis) + len(split.minus_one.basis)
        for b in split.pairs:
            c = len(b.xs)
            for i in range(c):
                blk[offset + i][offset + i] = ctx.zero
                blk[offset + c + i][offset + c + i] = ctx.zero
                blk[offset + i][offset + c + i] = ctx.one
                blk[offset + c + i][offset + i] = ctx.one
            offset += 2 * c
        return self._to_user(blk)


def _pairwise_commute(alg: NpAlgebra, lifts: np.ndarray) -> bool:
    for u in lifts:
        if not (alg.mul_left(u, lifts) == alg.mul_right(lifts, u)).all():
            return False
    return True


def centralizer_coset_decide(t: Multivector, budget: int = COSET_BUDGET) -> CosetDecision:
    """Decide whether ``t`` in Spin is conjugate to ``t^-1`` inside Spin.

    Every ``s`` with ``s t s^-1 = t^-1`` has ``chi(s)`` in the coset
    ``g0 Z_O(chi(t))`` where ``g0`` swaps each eigenvalue block with its
    inverse block.  The whole coset is enumerated; each even lift ``u``
    is tested for ``u t = t^-1 u`` exactly and for ``N(u)`` being a square.
    """
    if not is_spin(t):
        raise PreconditionViolated("element is not in the spin group")
    cctx = t.ctx
    alg = NpAlgebra(cctx)
    p = alg.p
    split = eigen_split(t)
    cent = _Centralizer(alg, split, budget)
    g0 = cent.swap(split)
    u0 = twisted_lift(alg, g0)
    coset = alg.mul_left(u0, cent.lift_rows)
    even = (coset[:, ~alg.even_mask] == 0).all(axis=1)
    tv = alg.from_mv(t)
    tinv = alg.inverses(tv)[0]
    relation = (alg.mul_right(coset, tv) == alg.mul_left(tinv, coset)).all(axis=1)
    norms = alg.norms(coset)
    squares = {(x * x) % p for x in range(1, p)}
    is_sq = np.array([int(v) in squares for v in norms])
    hits = np.nonzero(even & relation & is_sq)[0]
    witness = None
    verified = True
    if len(hits):
        u = alg.to_mv(coset[int(hits[0])])
        ok, root = cctx.field.is_square(norm(u))
        witness = u / root
        verified = bool(ok) and is_spin(witness) and witness * t == t.inverse() * witness
    # centraliser of t in the even Clifford group: even lifts commuting with t
    lifts = cent.lift_rows
    even_z = (lifts[:, ~alg.even_mask] == 0).all(axis=1)
    commute = (alg.mul_right(lifts, tv) == alg.mul_left(tv, lifts)).all(axis=1)
    zplus = lifts[even_z & commute]
    m = cctx.space.dim // 2
    strongly = len(zplus) <= (p + 1) ** m and _pairwise_commute(alg, zplus)
    return CosetDecision(bool(len(hits)), witness, len(cent.mats), len(coset), strongly, verified)


# sampling of semisimple elements with rational eigenvalues


def random_vector(space: QSpace, rng) -> list:
    ctx = space.ctx
    return [ctx(int(c)) for c in rng.integers(0, ctx.p, size=space.dim)]


def random_anisotropic(space: QSpace, rng) -> list:
    while True:
        v = random_vector(space, rng)
        if space.q(v) != 0:
            return v


def random_even_element(space: QSpace, rng, factors: int = 4) -> Multivector:
    """Product of an even number of random anisotropic vectors."""
    cctx = clifford(space)
    out = cctx.one
    for _ in range(factors + factors % 2):
        out = out * embed_vector(cctx, random_anisotropic(space, rng))
    return out


def block_element(space: QSpace, minus_basis: Sequence[list], pairs: Sequence[Tuple[list, list, object]]):
    """``w_1 ... w_2r * prod (e + f)(e + mu f)`` scaled into Spin, or None if the norm is a nonsquare.

    ``w_i`` is an orthogonal basis of the span of ``minus_basis`` (where the
    vector representation is -1); each ``(e, f, mu)`` is a hyperbolic pair
    on which it is ``diag(mu, 1/mu)``; it is the identity elsewhere.
    """
    cctx = clifford(space)
    ctx = space.ctx
    t = cctx.one
    if minus_basis:
        ws, _ = diagonalize_vectors(space, minus_basis)
        for w in ws:
            t = t * embed_vector(cctx, w)
    for e, f, mu in pairs:
        t = t * embed_vector(cctx, pair_vector(e, f, ctx.one)) * embed_vector(cctx, pair_vector(e, f, ctx(mu)))
    ok, root = ctx.is_square(norm(t))
    if not ok:
        return None
    return t / root


def random_anisotropic_plane(space: QSpace, rng) -> Subspace:
    while True:
        a, b = random_vector(space, rng), random_vector(space, rng)
        w = Subspace([a, b], space)
        if la.rank([a, b]) == 2 and w.is_nondegenerate() and find_isotropic(space, [a, b]) is None:
            return w


def sample_strongly_regular(space: QSpace, rng, max_tries: int = 1000) -> Multivector:
    """A Spin element of dim 6 with ``chi`` eigenvalues ``1, 1, -1, -1, mu, 1/mu`` (``mu != +-1``).

    The +1 and -1 eigenspaces are anisotropic planes, which is what makes
    the norm a square when the two planes would otherwise be split.
    """
    ctx = space.ctx
    if space.dim != 6 or not ctx.is_finite or ctx.p < 5:
        raise PreconditionViolated("sampler needs dim 6 over F_p with p >= 5")
    mus = [ctx(x) for x in range(2, ctx.p - 1)]
    for _ in range(max_tries):
        plane = random_anisotropic_plane(space, rng)
        rest = plane.complement()
        wb = witt_decompose_vectors(space, rest.basis)
        if wb.witt_index != 1:
            continue
        other = wb.anisotropic
        minus = plane.basis if rng.integers(2) else other
        e, f = wb.pairs[0]
        mu = mus[int(rng.integers(len(mus)))]
        t = block_element(space, minus, [(e, f, mu)])
        if t is None:
            continue
        return t if rng.integers(2) else -t
    raise RuntimeError("no strongly regular sample found")


def conjugate_by(t: Multivector, g: Multivector) -> Multivector:
    return g * t * g.inverse()


def decide_many(elements: Sequence[Multivector], budget: int = COSET_BUDGET) -> List[CosetDecision]:
    """Coset decisions for many elements; results keep the input order whatever the worker count."""
    workers = worker_count()
    if workers == 1:
        return [centralizer_coset_decide(t, budget) for t in elements]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: centralizer_coset_decide(t, budget), elements))
