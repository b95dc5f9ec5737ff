"""Seeded randomized identity suites over one quadratic space.

Each suite returns a :class:`Check` with the number of samples and the
number of failures, so the command-line report can list them uniformly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, List

from . import linalg as la
from .algebra import Multivector, clifford, embed_vector, grade_involution, reversion
from .errors import IsotropicSearchFailed, NotLiftable
from .fields import FieldCtx
from .groups import compose_reflections, lift_so, norm, reflection_factorize, reflection_matrix, spinor_norm, vector_rep
from .quadratic import QSpace, Subspace, witt_decompose
from .torus import NORM_INVERSE, TorusElement, certify, involution_lift, standard_conjugator, standard_sign


@dataclass
class Check:
    name: str
    count: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {"name": self.name, "count": self.count, "failures": self.failures, "passed": self.passed}


def random_scalar(ctx: FieldCtx, rng: random.Random, nonzero: bool = False):
    while True:
        if ctx.is_finite:
            x = ctx(rng.randrange(ctx.p))
        else:
            x = ctx(rng.randint(-5, 5)) / rng.randint(1, 3)
        if not nonzero or x != 0:
            return x


def random_vector(space: QSpace, rng: random.Random) -> list:
    return [random_scalar(space.ctx, rng) for _ in range(space.dim)]


def random_anisotropic(space: QSpace, rng: random.Random) -> list:
    while True:
        v = random_vector(space, rng)
        if space.q(v) != 0:
            return v


def random_multivector(space: QSpace, rng: random.Random, terms: int = 4) -> Multivector:
    cctx = clifford(space)
    blades = rng.sample(range(cctx.size), min(terms, cctx.size))
    return Multivector(cctx, {b: random_scalar(space.ctx, rng) for b in blades})


def random_versor(space: QSpace, rng: random.Random, factors: int) -> Multivector:
    cctx = clifford(space)
    out = cctx.one
    for _ in range(factors):
        out = out * embed_vector(cctx, random_anisotropic(space, rng))
    return out


def _run(name: str, samples: int, trial: Callable[[], bool]) -> Check:
    failures = sum(0 if trial() else 1 for _ in range(samples))
    return Check(name, samples, failures)


def algebra_suites(space: QSpace, rng: random.Random, samples: int) -> List[Check]:
    cctx = clifford(space)

    def assoc():
        a, b, c = (random_multivector(space, rng) for _ in range(3))
        return (a * b) * c == a * (b * c)

    def square():
        x = random_vector(space, rng)
        v = embed_vector(cctx, x)
        return v * v == cctx.scalar(space.q(x))

    def anticommutator():
        x, y = random_vector(space, rng), random_vector(space, rng)
        u, v = embed_vector(cctx, x), embed_vector(cctx, y)
        return u * v + v * u == cctx.scalar(space.polar(x, y))

    def reversion_anti():
        a, b = random_multivector(space, rng), random_multivector(space, rng)
        return reversion(a * b) == reversion(b) * reversion(a) and reversion(reversion(a)) == a

    def grade_auto():
        a, b = random_multivector(space, rng), random_multivector(space, rng)
        return grade_involution(a * b) == grade_involution(a) * grade_involution(b)

    def even_closed():
        a = random_multivector(space, rng).grade(0) + random_multivector(space, rng).grade(2)
        b = random_multivector(space, rng).grade(0) + random_multivector(space, rng).grade(2)
        return (a * b).is_even()

    return [
        _run("associativity", samples, assoc),
        _run("vector_square_is_q", samples, square),
        _run("anticommutator_is_polar", samples, anticommutator),
        _run("reversion_anti_automorphism", samples, reversion_anti),
        _run("grade_involution_automorphism", samples, grade_auto),
        _run("even_part_closed", samples, even_closed),
    ]


def group_suites(space: QSpace, rng: random.Random, samples: int) -> List[Check]:
    ctx = space.ctx
    cctx = clifford(space)

    def chi_hom():
        u = random_versor(space, rng, rng.randint(1, 3))
        v = random_versor(space, rng, rng.randint(1, 3))
        return vector_rep(u * v) == vector_rep(u) @ vector_rep(v)

    def chi_vector():
        x = random_anisotropic(space, rng)
        return vector_rep(embed_vector(cctx, x)) == la.mat_scale(-1, reflection_matrix(space, x))

    def norm_mult():
        u = random_versor(space, rng, rng.randint(1, 3))
        v = random_versor(space, rng, rng.randint(1, 3))
        return norm(u * v) == norm(u) * norm(v)

    def factorize():
        m = vector_rep(random_versor(space, rng, 2 * rng.randint(1, 3)))
        vs = reflection_factorize(m)
        return len(vs) <= space.dim and la.mat_eq(compose_reflections(space, vs), m.matrix)

    def lift():
        m = vector_rep(random_versor(space, rng, 2 * rng.randint(1, 3)))
        return vector_rep(lift_so(m, cctx)) == m

    def spinor():
        u = random_versor(space, rng, 2 * rng.randint(1, 3))
        return spinor_norm(vector_rep(u)) == ctx.square_class(norm(u))

    return [
        _run("chi_homomorphism", samples, chi_hom),
        _run("chi_of_vector_is_minus_reflection", samples, chi_vector),
        _run("norm_multiplicative", samples, norm_mult),
        _run("reflection_factorization", samples, factorize),
        _run("lift_round_trip", samples, lift),
        _run("spinor_norm_matches_norm_class", samples, spinor),
    ]


def random_even_subspace(space: QSpace, rng: random.Random) -> Subspace:
    """A random nondegenerate subspace of positive even dimension."""
    dims = list(range(2, space.dim + 1, 2))
    while True:
        k = rng.choice(dims)
        vs = [random_vector(space, rng) for _ in range(k)]
        w = Subspace(vs, space)
        if la.rank(vs) == k and w.is_nondegenerate():
            return w


def involution_lift_trial(w: Subspace) -> bool:
    ctx = w.ambient.ctx
    r = w.dim // 2
    predicted = ctx.square_class(ctx((-1) ** r) * w.discriminant()) == 1
    try:
        u = involution_lift(w)
    except NotLiftable:
        return not predicted
    return predicted and u.mv * u.mv == u.ctx.one


def torus_suites(space: QSpace, rng: random.Random, samples: int) -> List[Check]:
    checks = [_run("involution_lift_criterion", samples,
                   lambda: involution_lift_trial(random_even_subspace(space, rng)))]
    try:
        wb = witt_decompose(space)
    except IsotropicSearchFailed:
        return checks
    checks.append(Check("witt_basis_invariants", 1, 0 if wb.check() else 1))
    m = wb.witt_index
    if m == 0:
        return checks
    ctx = space.ctx
    s = standard_conjugator(wb)

    def conj():
        te = TorusElement(random_scalar(ctx, rng, True), [random_scalar(ctx, rng, True) for _ in range(m)], wb)
        t = te.element()
        if not la.mat_eq(t.chi.matrix, te.expected_chi()):
            return False
        return certify(t, s, NORM_INVERSE, standard_sign(m)).verified

    checks.append(_run("standard_conjugator_identities", samples, conj))
    return checks


def all_suites(space: QSpace, seed: int, samples: int) -> List[Check]:
    rng = random.Random(seed)
    return algebra_suites(space, rng, samples) + group_suites(space, rng, samples) + torus_suites(space, rng, samples)
