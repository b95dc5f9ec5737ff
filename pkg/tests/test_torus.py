import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from clifford_reality import linalg as la
from clifford_reality.errors import NotInSpin, NotLiftable, NotStronglyRegular, PreconditionViolated, ZeroParameter
from clifford_reality.fields import FieldSpec
from clifford_reality.groups import GroupElement, is_spin
from clifford_reality.quadratic import Subspace, parse_form, witt_decompose
from clifford_reality.suites import random_scalar, random_versor, torus_suites
from clifford_reality.torus import (
    INVERSE,
    NEG_NORM_INVERSE,
    NORM_INVERSE,
    TorusElement,
    blockwise_conjugator,
    certify,
    corollary_sign,
    eigen_split,
    expected_eps_mod8,
    involution_decompose,
    involution_lift,
    is_real_semisimple_spin,
    make_torus_element,
    minus_conjugator,
    odd_split_conjugator,
    oddcase_condition,
    standard_conjugator,
    standard_sign,
    torus_parameters,
)

Q = FieldSpec.rationals()


def _wb(form, field="Q"):
    return witt_decompose(parse_form(form, FieldSpec.parse(field)))


def _spin_torus(wb, rng, allow_one=True):
    """Random standard-torus element of norm one."""
    ctx = wb.space.ctx
    m = wb.witt_index
    lam = [rng.choice([ctx.one, random_scalar(ctx, rng, True)]) if allow_one else random_scalar(ctx, rng, True)
           for _ in range(m - 1)]
    l0 = random_scalar(ctx, rng, True)
    prod = l0 * l0
    for x in lam:
        prod = prod * x
    lam.append(1 / prod)
    return make_torus_element(l0, lam, wb)


def test_sign_formulas():
    assert [standard_sign(m) for m in range(1, 9)] == [1, -1, -1, 1, 1, -1, -1, 1]
    assert [corollary_sign(m) for m in range(1, 9)] == [-1, -1, 1, 1, -1, -1, 1, 1]
    assert [expected_eps_mod8(n) for n in (8, 9, 10, 4, 6)] == [1, 1, 1, None, None]


def test_torus_chi_and_norm():
    wb = _wb("hyperbolic:2")
    te = TorusElement(Fraction(1, 2), [2, 3], wb)
    t = te.element()
    assert t.norm == Fraction(1, 4) * 6
    assert la.mat_eq(t.chi.matrix, te.expected_chi())
    back = torus_parameters(t, wb)
    assert back.lambda0 == Fraction(1, 2) and back.lambdas == [2, 3]
    with pytest.raises(ZeroParameter):
        TorusElement(1, [0, 1], wb)
    with pytest.raises(PreconditionViolated):
        TorusElement(1, [1], wb)


def test_standard_conjugator_sign_example():
    wb = _wb("hyperbolic:2")
    t = make_torus_element(1, [2, 5], wb)
    cert = certify(t, standard_conjugator(wb), NORM_INVERSE, standard_sign(2))
    assert cert.verified and cert.s_squared == -1 and cert.s_in == "Spin"


def test_minus_conjugator():
    wb = _wb("hyperbolic:3", "F7")
    te = TorusElement(3, [-1, 2, 5], wb)
    s = minus_conjugator(te)
    cert = certify(te.element(), s, NEG_NORM_INVERSE, standard_sign(2))
    assert cert.verified
    with pytest.raises(PreconditionViolated):
        minus_conjugator(TorusElement(3, [2, 2, 5], wb))


def test_involution_lift_examples():
    sp = parse_form("diag:[1,1,1]", Q)
    # -1 on a plane with q = x^2 + y^2 has (-1) * 1 = -1, not a square over Q
    with pytest.raises(NotLiftable):
        involution_lift(Subspace([[1, 0, 0], [0, 1, 0]], sp))
    sp2 = parse_form("diag:[1,-1,1]", Q)
    u = involution_lift(Subspace([[1, 0, 0], [0, 1, 0]], sp2))
    assert u.mv * u.mv == u.ctx.one


@pytest.mark.parametrize("m,d", [(1, 1), (1, 2), (1, 3), (2, 2), (3, 3)])
def test_odd_split_conjugator(m, d):
    wb = _wb(f"hyperbolic:{m}+diag:[{d}]", "F7")
    t = make_torus_element(2, [3] * m, wb)
    cert = odd_split_conjugator(t, wb)
    assert cert.verified and cert.s_in == "Spin"
    assert cert.s_squared == corollary_sign(m)


def test_blockwise_conjugator_after_conjugation():
    rng = random.Random(2)
    wb = _wb("hyperbolic:2+diag:[1]")
    t = make_torus_element(1, [2, 3], wb)
    g = random_versor(wb.space, rng, 2)
    moved = GroupElement(g * t.mv * g.inverse(), check=False)
    cert = blockwise_conjugator(moved)
    assert cert.verified and cert.relation == NORM_INVERSE


def test_eigen_split_example():
    wb = _wb("hyperbolic:2+diag:[1]")
    split = eigen_split(make_torus_element(1, [2, -1], wb))
    assert split.check()
    assert split.one.dim == 1 and split.minus_one.dim == 2 and len(split.pairs) == 1


def test_spin_reality_examples():
    wb6 = _wb("hyperbolic:3")
    # dim 6 without eigenvalue 1 is not real
    assert is_real_semisimple_spin(make_torus_element(Fraction(1, 6), [2, 3, 6], wb6)).verdict == "not_real"
    d = is_real_semisimple_spin(make_torus_element(1, [1, 2, Fraction(1, 2)], wb6))
    assert d.verdict == "real" and d.certificate.verified and d.certificate.relation == INVERSE
    with pytest.raises(NotInSpin):
        is_real_semisimple_spin(make_torus_element(1, [2, 3, 5], wb6))


@pytest.mark.parametrize("form,eps", [("hyperbolic:2", -1), ("hyperbolic:4", 1), ("hyperbolic:4+diag:[1]", 1)])
def test_involution_decomposition_signs(form, eps):
    wb = _wb(form)
    lam = [2, Fraction(1, 2), 3, Fraction(1, 3)][:wb.witt_index]
    t = make_torus_element(1, lam, wb)
    pair = involution_decompose(t, is_real_semisimple_spin(t).certificate)
    assert pair.verified and pair.eps1 == eps


@pytest.mark.parametrize("field,form", [("F5", "hyperbolic:2+anisotropic:[1]"), ("F7", "hyperbolic:2"), ("Q", "diag:[1,-1,2,-3]")])
def test_torus_suites(field, form):
    checks = torus_suites(parse_form(form, FieldSpec.parse(field)), random.Random(9), 20)
    assert all(c.passed for c in checks), [c.to_json() for c in checks if not c.passed]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([("F5", "hyperbolic:2"), ("F7", "hyperbolic:2+diag:[3]"), ("Q", "hyperbolic:2+diag:[1]"),
                        ("F7", "hyperbolic:3")]), st.integers(0, 2**32), st.booleans())
def test_spin_reality_properties(case, seed, conjugate):
    rng = random.Random(seed)
    wb = _wb(case[1], case[0])
    t = _spin_torus(wb, rng)
    assert is_spin(t.mv)
    if conjugate:
        g = random_versor(wb.space, rng, 2)
        t = GroupElement(g * t.mv * g.inverse(), check=False)
    d = is_real_semisimple_spin(t)
    n = wb.space.dim
    if n % 4 == 2 and eigen_split(t).one.dim == 0:
        assert d.verdict == "not_real"
    else:
        # dims 0, 1, 3 mod 4 and dim 2 mod 4 with eigenvalue 1 are always real
        assert d.verdict == "real"
        cert = d.certificate
        assert cert.verified and cert.s_in == "Spin"
        pair = involution_decompose(t, cert)
        assert pair.verified
        if expected_eps_mod8(n) == 1:
            assert pair.eps1 == 1
        if n == 4 and not t.mv.is_scalar():
            assert pair.eps1 == -1


@pytest.mark.parametrize("d", [1, 2])
def test_oddcase_condition_over_f5(d):
    wb = _wb(f"hyperbolic:1+diag:[{d}]", "F5")
    # eigenvalues 1, 2, 1/2 are distinct; the torus norms already reach both square classes
    assert oddcase_condition(make_torus_element(1, [2], wb))
    with pytest.raises(NotStronglyRegular):
        oddcase_condition(make_torus_element(1, [4], wb))


def test_oddcase_condition_over_f3_is_never_strongly_regular():
    # over F3 the only nontrivial parameter is 2 = -1, which repeats an eigenvalue
    wb = _wb("hyperbolic:1+diag:[2]", "F3")
    with pytest.raises(NotStronglyRegular):
        oddcase_condition(make_torus_element(1, [2], wb))
