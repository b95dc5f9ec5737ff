import random

import pytest
from hypothesis import given, settings, strategies as st

from clifford_reality import linalg as la
from clifford_reality.algebra import clifford, embed_vector
from clifford_reality.errors import NotSpecialOrthogonal
from clifford_reality.fields import FieldSpec
from clifford_reality.groups import (
    OrthMatrix,
    compose_reflections,
    in_gamma,
    is_orthogonal,
    is_spin,
    lift_so,
    norm,
    reflection_factorize,
    reflection_matrix,
    spinor_norm,
    vector_rep,
)
from clifford_reality.quadratic import parse_form
from clifford_reality.suites import group_suites, random_anisotropic, random_versor

SPACES = [
    ("Q", "diag:[1,-1,2]"),
    ("Q", "hyperbolic:2"),
    ("F3", "hyperbolic:1+anisotropic:[1]"),
    ("F3", "hyperbolic:2"),
    ("F5", "hyperbolic:2+anisotropic:[1]"),
    ("F7", "diag:[1,2,3,4]"),
]


def _space(field, form):
    return parse_form(form, FieldSpec.parse(field))


def test_reflection_is_orthogonal_involution():
    sp = _space("Q", "diag:[1,2,3]")
    r = reflection_matrix(sp, [1, 1, 0])
    assert is_orthogonal(sp, r)
    assert la.mat_eq(la.mat_mul(r, r), la.identity(sp.ctx, 3))
    # the mirror vector is negated
    assert la.mat_vec(r, sp.vector([1, 1, 0])) == sp.vector([-1, -1, 0])


def test_vector_acts_as_minus_reflection():
    sp = _space("F5", "hyperbolic:1+anisotropic:[2]")
    cctx = clifford(sp)
    v = [1, 1, 1]
    assert la.mat_eq(vector_rep(embed_vector(cctx, v)).matrix, la.mat_scale(-1, reflection_matrix(sp, v)))


def test_group_membership():
    sp = _space("Q", "diag:[1,1,1]")
    cctx = clifford(sp)
    u = embed_vector(cctx, [1, 0, 0]) * embed_vector(cctx, [1, 1, 0])
    assert in_gamma(u) and norm(u) == 2
    assert not is_spin(u)
    assert is_spin(embed_vector(cctx, [1, 0, 0]) * embed_vector(cctx, [0, 1, 0]))
    w = embed_vector(cctx, [1, 0, 0]) + cctx.one
    assert not in_gamma(w)
    assert not in_gamma(cctx.zero)


def test_spinor_norm_examples():
    sp = _space("Q", "diag:[1,1,1]")
    # product of reflections in e1 and e1 + e2 has spinor norm q(e1) q(e1 + e2) = 2
    m = OrthMatrix(sp, compose_reflections(sp, [[1, 0, 0], [1, 1, 0]]))
    assert spinor_norm(m) == 2
    with pytest.raises(NotSpecialOrthogonal):
        spinor_norm(OrthMatrix(sp, reflection_matrix(sp, [1, 0, 0])))


def test_unipotent_factorization_over_f3():
    # an Eichler-type transvection, which needs a repair step in the factorisation
    sp = _space("F3", "hyperbolic:2")
    cctx = clifford(sp)
    u = cctx.one + embed_vector(cctx, [1, 0, 0, 0]) * embed_vector(cctx, [0, 0, 1, 0])
    m = vector_rep(u)
    vs = reflection_factorize(m)
    assert len(vs) <= 4
    assert la.mat_eq(compose_reflections(sp, vs), m.matrix)
    assert vector_rep(lift_so(m, cctx)) == m


@pytest.mark.parametrize("field,form", SPACES)
def test_group_suites(field, form):
    checks = group_suites(_space(field, form), random.Random(5), 10)
    assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SPACES), st.integers(0, 2**32), st.integers(1, 4))
def test_rotation_properties(case, seed, k):
    sp = _space(*case)
    cctx = clifford(sp)
    rng = random.Random(seed)
    vs = [random_anisotropic(sp, rng) for _ in range(2 * k)]
    u = cctx.one
    prod = sp.ctx.one
    for v in vs:
        u = u * embed_vector(cctx, v)
        prod = prod * sp.q(v)
    assert norm(u) == prod
    m = vector_rep(u)
    assert is_orthogonal(sp, m.matrix) and m.det == 1
    # independent reference for the rotation: compose the reflections directly
    assert la.mat_eq(m.matrix, compose_reflections(sp, vs))
    assert spinor_norm(m) == sp.ctx.square_class(prod)
    lifted = lift_so(m, cctx)
    assert vector_rep(lifted) == m
    # the lift differs from u by a scalar
    ratio = lifted.mv * u.inverse()
    assert ratio.is_scalar()
    v2 = random_versor(sp, rng, 2)
    assert vector_rep(u * v2) == m @ vector_rep(v2)
