import random
from fractions import Fraction

import pytest

from ymlie import symkernel as sk
from ymlie.catalog import Dilatation, Translation, make, symbolic_chi
from ymlie.prolongation import (Generator, Prolongation, apply_pr2, formal_generator,
                                phi1_expanded, phi2_expanded, prolong_coefficients,
                                symmetry_condition_expanded)
from ymlie.symkernel import Coordinate, Jet, Param

from randexpr import rand_coef

A = sk.field
x = sk.coord


def rand_generator(rng, n=2, deg=2):
    pool = [Coordinate(m) for m in range(4)] + [Jet(a, k) for a in range(n) for k in range(4)]

    def poly():
        acc = sk.Accumulator()
        for _ in range(rng.randint(0, 3)):
            acc.add_term(tuple(sorted(rng.choice(pool) for _ in range(rng.randint(0, deg)))),
                         rand_coef(rng))
        return acc.result()

    return Generator(tuple(poly() for _ in range(4)),
                     tuple(tuple(poly() for _ in range(4)) for _ in range(n)))


def test_translation_has_no_prolongation(su2):
    gen = Generator.make([sk.param(f"a{k}") for k in range(4)], [[0] * 4] * 3)
    pc = prolong_coefficients(gen)
    assert all(e.is_zero() for e in pc.phi1.values())
    assert all(e.is_zero() for e in pc.phi2.values())
    assert len(pc.phi2) == 3 * 4 * 10


def test_dilatation_first_coefficient(su2):
    d = sk.param("d")
    gen = Generator.make([d * x(k) for k in range(4)],
                         [[-(d * A(a, k)) for k in range(4)] for a in range(3)])
    p = Prolongation(gen)
    rng = random.Random(5)
    for dd in range(3):
        for k in range(4):
            for lam in range(4):
                expected = (d * A(dd, k, lam)).scale(-2)
                assert p.first(dd, k, lam) == expected
                # exact evaluation at random rational jet points
                got = p.first(dd, k, lam)
                for _ in range(5):
                    pt = {a: Fraction(rng.randint(-9, 9), rng.randint(1, 5))
                          for a in got.atoms() | expected.atoms()}
                    assert sk.evaluate_at_point(got, pt) == sk.evaluate_at_point(expected, pt)


def test_catalog_dilatation_matches(su2):
    p = Prolongation(make(Dilatation(), su2))
    assert p.first(1, 2, 3) == A(1, 2, 3).scale(-2)
    assert p.second(0, 1, 2, 2) == A(0, 1, 2, 2).scale(-3)


def test_pure_gauge_function():
    chi = symbolic_chi(2)
    gen = Generator((sk.ZERO,) * 4, tuple(tuple(chi[a] * x(k) for k in range(4))
                                          for a in range(2)))
    p = Prolongation(gen)
    for a in range(2):
        for k in range(4):
            for lam in range(4):
                assert p.first(a, k, lam) == sk.partial(gen.phi[a][k], Coordinate(lam))


def test_apply_pr2_basics(su2):
    gen = Generator.make([sk.param("a0"), 0, 0, 0], [[0] * 4] * 3)
    assert apply_pr2(gen, x(0)) == sk.param("a0")
    assert apply_pr2(gen, sk.const(5)).is_zero()
    g2 = make(Dilatation(), su2)
    assert apply_pr2(g2, A(1, 2)) == g2.phi[1][2]
    with pytest.raises(ValueError):
        apply_pr2(g2, A(0, 0, 1, 2, 3))


def test_expanded_forms_random_points():
    rng = random.Random(3)
    for _ in range(10):
        gen = rand_generator(rng)
        p = Prolongation(gen)
        d, k, lam, pi = rng.randrange(2), rng.randrange(4), rng.randrange(4), rng.randrange(4)
        e1, e2 = p.first(d, k, lam), phi1_expanded(gen, d, k, lam)
        pt = {a: Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for a in e1.atoms() | e2.atoms()}
        assert sk.evaluate_at_point(e1, pt) == sk.evaluate_at_point(e2, pt)
        assert e1 == e2
        assert p.second(d, k, lam, pi) == phi2_expanded(gen, d, k, lam, pi)


def test_formal_expanded_forms():
    gen = formal_generator(2)
    p = Prolongation(gen)
    for d in range(2):
        for k in range(4):
            for lam in range(4):
                assert p.first(d, k, lam) == phi1_expanded(gen, d, k, lam)
                for pi in range(lam, 4):
                    assert p.second(d, k, lam, pi) == phi2_expanded(gen, d, k, lam, pi)
                    assert p.second(d, k, pi, lam) is p.second(d, k, lam, pi)


def test_prolonged_equations_regroup(su2, sys_su2):
    p = Prolongation(formal_generator(3))
    for (a, nu), e in sys_su2.equations.items():
        assert apply_pr2(p, e) == symmetry_condition_expanded(su2, p, a, nu)


def test_linearity_and_leibniz():
    rng = random.Random(9)
    pool1 = [Coordinate(m) for m in range(4)] + [Jet(a, k, d) for a in range(2)
                                                 for k in range(4) for d in ((), (rng.randrange(4),))]
    for _ in range(30):
        gen = rand_generator(rng)
        p = Prolongation(gen)

        def lin():
            return sk.esum(sk.Expr.atom(rng.choice(pool1)).scale(rand_coef(rng))
                           for _ in range(3))

        e1, e2 = lin(), lin()
        al = rand_coef(rng)
        assert apply_pr2(p, e1.scale(al) + e2) == apply_pr2(p, e1).scale(al) + apply_pr2(p, e2)
        assert apply_pr2(p, e1 * e2) == apply_pr2(p, e1) * e2 + e1 * apply_pr2(p, e2)


def test_coefficients_are_additive():
    rng = random.Random(4)
    for _ in range(5):
        g1, g2 = rand_generator(rng), rand_generator(rng)
        p1, p2, p12 = (prolong_coefficients(g) for g in (g1, g2, g1 + g2))
        for key in p12.phi1:
            assert p12.phi1[key] == p1.phi1[key] + p2.phi1[key]
        for key in p12.phi2:
            assert p12.phi2[key] == p1.phi2[key] + p2.phi2[key]


def test_generator_rejects_derivatives():
    with pytest.raises(ValueError):
        Generator.make([A(0, 0, 1), 0, 0, 0], [[0] * 4])
