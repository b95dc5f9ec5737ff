"""Dense exact linear algebra on lists of lists.

Matrices are row-major ``list[list[Scalar]]``; vectors are ``list[Scalar]``.
Everything works over any :class:`~clifford_reality.fields.FieldCtx`.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

Matrix = List[list]
Vector = list


def zeros(ctx, rows: int, cols: int) -> Matrix:
    z = ctx.zero
    return [[z] * cols for _ in range(rows)]


def identity(ctx, n: int) -> Matrix:
    m = zeros(ctx, n, n)
    for i in range(n):
        m[i][i] = ctx.one
    return m


def transpose(a: Matrix) -> Matrix:
    return [list(r) for r in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[_dot(row, col) for col in bt] for row in a]


def mat_vec(a: Matrix, x: Sequence) -> Vector:
    return [_dot(row, x) for row in a]


def _dot(u, v):
    it = iter(zip(u, v))
    x, y = next(it)
    acc = x * y
    for x, y in it:
        acc = acc + x * y
    return acc


def dot(u, v):
    return _dot(u, v)


def vec_add(u, v):
    return [x + y for x, y in zip(u, v)]


def vec_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, u):
    return [c * x for x in u]


def is_zero_vec(u) -> bool:
    return all(x == 0 for x in u)


def columns(a: Matrix) -> List[Vector]:
    return transpose(a)


def from_columns(cols: Sequence[Vector]) -> Matrix:
    return transpose([list(c) for c in cols])


def rref(a: Matrix) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(ctx, a: Matrix) -> List[Vector]:
    """Basis of ``{x : a x = 0}``, one vector per free column."""
    cols = len(a[0])
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = [ctx.zero] * cols
        x[f] = ctx.one
        for i, pc in enumerate(pivots):
            x[pc] = -m[i][f]
        basis.append(x)
    return basis


def solve(ctx, a: Matrix, b: Sequence) -> Optional[Vector]:
    """One solution of ``a x = b`` or None when inconsistent."""
    cols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [ctx.zero] * cols
    for i, pc in enumerate(pivots):
        x[pc] = m[i][cols]
    return x


def inverse(ctx, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(ctx, n))]
    m, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in m]


def det(ctx, a: Matrix):
    m = [list(r) for r in a]
    n = len(m)
    result = ctx.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return ctx.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result = result * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def independent_subset(vectors: Sequence[Vector]) -> List[Vector]:
    """Greedy left-to-right maximal linearly independent subfamily."""
    if not vectors:
        return []
    m, pivots = rref(transpose([list(v) for v in vectors]))
    return [list(vectors[c]) for c in pivots]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in r] for r in a]
