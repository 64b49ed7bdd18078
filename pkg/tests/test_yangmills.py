import pytest

from ymlie import symkernel as sk
from ymlie.liealgebra import antisymmetric, build_abelian
from ymlie.symkernel import Jet, g
from ymlie.yangmills import (ELIMINATED, build_gauge, build_system, divergence_identity_check,
                             equations_from_field_strength, field_strength,
                             second_order_jacobian_rank)

A = sk.field


def field_degree(e):
    return max(sum(1 for a in m if a[0] == sk.JET) for m in e.terms)


def maxwell(a, nu):
    return sk.esum(A(a, nu, mu, mu).scale(g(mu)) - A(a, mu, mu, nu).scale(g(nu))
                   for mu in range(4))


def test_abelian_limit():
    s = build_system(build_abelian(2))
    for (a, nu), e in s.equations.items():
        assert e == maxwell(a, nu)


def test_su2_equations(sys_su2):
    assert len(sys_su2.equations) == 12
    for (a, nu), e in sys_su2.equations.items():
        assert e.jet_order() == 2 and field_degree(e) == 3
        cubic = [m for m in e.terms if len(m) == 3 and all(not x[3] for x in m)]
        assert cubic, (a, nu)


def test_counts_across_algebras(sys_su2, sys_su2su2):
    for s in (sys_su2, sys_su2su2):
        assert len(s.equations) == 4 * s.n
        assert {e.jet_order() for e in s.equations.values()} == {2}
        assert {field_degree(e) for e in s.equations.values()} == {3}


def test_solved_forms(sys_su2):
    targets = {Jet(n, nu, d) for n in range(3) for nu, d in ELIMINATED.items()}
    assert set(sys_su2.solved_forms) == targets
    assert ELIMINATED == {0: (1, 1), 1: (2, 2), 2: (1, 1), 3: (1, 1)}
    for t, rhs in sys_su2.solved_forms.items():
        assert not rhs.atoms() & targets
        src = sys_su2.equations[sys_su2.sources[t]]
        assert sk.substitute(src, t, rhs).is_zero()


def test_field_strength(su2):
    for mu in range(4):
        assert all(e.is_zero() for e in field_strength(su2, mu, mu))
        for nu in range(4):
            for e1, e2 in zip(field_strength(su2, mu, nu), field_strength(su2, nu, mu)):
                assert e1 == -e2
    curl = field_strength(build_abelian(1), 0, 1)[0]
    assert curl == A(0, 1, 0) + A(0, 0, 1)     # d^0 A^1 - d^1 A^0 with d^1 = -d_1


def test_field_strength_form_matches(su2, su2su2, sys_su2, sys_su2su2):
    assert equations_from_field_strength(su2) == sys_su2.equations
    assert equations_from_field_strength(su2su2) == sys_su2su2.equations


def test_maximal_rank(sys_su2, sys_su2su2):
    assert second_order_jacobian_rank(sys_su2) == 12
    assert second_order_jacobian_rank(sys_su2su2) == 24


def test_divergence_identity(sys_su2, sys_su2su2):
    for s in (sys_su2, sys_su2su2):
        r = divergence_identity_check(s)
        assert r.ok and r.agree


def test_divergence_abelian_off_shell():
    s = build_system(build_abelian(2))
    from ymlie.yangmills import divergence
    assert all(divergence(s, a).is_zero() for a in range(2))


def test_divergence_detects_broken_jacobi():
    bad = antisymmetric(6, {(0, 1, 2): 1, (3, 4, 5): 1, (0, 1, 3): 1})
    r = divergence_identity_check(build_system(bad))
    assert not r.ok
    # recorded residual size for this corruption
    assert len(r.residual_direct) == 720


def test_gauge(su2, gauge_su2):
    assert len(gauge_su2.equations) == 3
    assert len(gauge_su2.derivative_constraints) == 12
    for (a, lam), e in gauge_su2.derivative_constraints.items():
        assert e == sk.total_derivative(gauge_su2.equations[a], lam)
        assert all(len(m) == 1 and len(m[0][3]) == 2 for m in e.terms)


@pytest.mark.parametrize("alternative", [False, True])
def test_gauge_eliminations_close(sys_su2, gauge_su2, alternative):
    forms = sys_su2.eliminations(gauge_su2, alternative)
    assert len(forms) == 12 + 3 + 12
    for rhs in forms.values():
        assert not rhs.atoms() & forms.keys()
    for e in gauge_su2.equations:
        assert sys_su2.reduce(e, gauge_su2, alternative).is_zero()
    for e in gauge_su2.derivative_constraints.values():
        assert sys_su2.reduce(e, gauge_su2, alternative).is_zero()
    for e in sys_su2.equations.values():
        assert sys_su2.reduce(e, gauge_su2, alternative).is_zero()
