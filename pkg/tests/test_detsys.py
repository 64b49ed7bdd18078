from collections import Counter

import pytest

from ymlie import symkernel as sk
from ymlie.catalog import Acceleration, Constants, Gauge, general_solution, make
from ymlie.detsys import (AnsatzSpec, AnsatzTooLarge, Generator, ansatz_unknowns,
                          expected_dimension, expected_gauge_residual, extract_determining,
                          f_antisymmetric, gauge_constraint_residual, implies, realize,
                          reduce_on_shell, solve_ansatz, symmetry_condition, verify_generator)
from ymlie.prolongation import H_atom, Phi_atom
from ymlie.symkernel import Expr, Jet, g
from ymlie.yangmills import build_gauge

N = 3
SPEC = AnsatzSpec(2, 1, 0)


def is_H(a):
    return a[0] == sk.FORMAL and a[1] == "H"


def is_Phi(a):
    return a[0] == sk.FORMAL and a[1] == "Phi"


def test_zero_generator(sys_su2):
    assert all(e.is_zero() for e in symmetry_condition(sys_su2, Generator.zero(3)).values())


def test_translation_off_shell(sys_su2):
    gen = Generator.make([sk.param(f"a{k}") for k in range(4)], [[0] * 4] * 3)
    assert all(e.is_zero() for e in symmetry_condition(sys_su2, gen).values())


def test_mixed_second_derivative_coefficients(sys_su2):
    """Coefficients of (d^k A_n^al)(d_l d_m A_p^be), l, m, be all different.

    Compared with the hand-regrouped brace, symmetrized in (l, m).
    """
    from ymlie.prolongation import formal_generator
    cond = symmetry_condition(sys_su2, formal_generator(N))
    d = lambda i, j: int(i == j)

    def Hd(mu, n, al, lower=False):
        e = Expr.atom(H_atom(mu, N).with_a(n, al))
        return e.scale(g(mu)) if lower else e

    def brace(a, nu, k, n, al, l_, m, p, be):
        acc = sk.Accumulator()
        acc.add(Hd(m, n, al), -2 * d(a, p) * d(k, l_) * d(be, nu)
                + d(a, p) * d(k, nu) * d(be, l_) + d(a, p) * d(k, be) * g(k) * d(l_, nu) * g(l_))
        acc.add(Hd(k, p, be, True), -d(a, n) * d(l_, m) * g(l_) * d(al, nu)
                + d(a, n) * d(l_, nu) * g(l_) * d(al, m))
        return acc.result()

    checked = 0
    for (a, nu), e in cond.items():
        parts = sk.collect(e, sk.is_derivative_jet)
        for l_ in range(4):
            for m in range(l_ + 1, 4):
                for be in set(range(4)) - {l_, m}:
                    for p in range(N):
                        for k in range(4):
                            for n in range(N):
                                for al in range(4):
                                    key = tuple(sorted((Jet(n, al, (k,)), Jet(p, be, (l_, m)))))
                                    want = (brace(a, nu, k, n, al, l_, m, p, be)
                                            + brace(a, nu, k, n, al, m, l_, p, be)).scale(g(k))
                                    assert parts.get(key, sk.ZERO) == want, (a, nu, key)
                                    checked += 1
    assert checked == 12 * 12 * 3 * 48


def test_reduce_on_shell_examples(sys_su2):
    for t, (a, nu) in sys_su2.sources.items():
        assert reduce_on_shell(sys_su2.equations[(a, nu)], sys_su2).is_zero()
    e = sk.field(0, 1, 2) * sk.coord(0) + sk.field(2, 3, 0, 0)
    assert reduce_on_shell(e, sys_su2) == e


def test_impostor_fails(sys_su2):
    imp = Generator.make([0] * 4, [[sk.field(a, k) for k in range(4)] for a in range(3)])
    r = verify_generator(sys_su2, imp)
    assert not r.ok
    key, mono, coef = r.leading_monomial()
    assert not sk.Expr({mono: coef}).is_zero()
    # recorded leading term of the residual ordering
    assert (key, mono, coef) == ((0, 0), (Jet(1, 0), Jet(2, 1, (1,))), -1)


def test_provenance_classes(ds_su2):
    counts = Counter(ds_su2.provenance)
    assert set(counts) == {"dA ddA", "ddA", "dA dA dA", "dA dA", "dA", "none"}
    # regression values of this extraction
    assert counts == {"dA dA": 9864, "dA dA dA": 960, "dA": 576, "ddA": 278,
                      "dA ddA": 132, "none": 12}


def test_equations_linear_in_formal_atoms(ds_su2):
    for e in ds_su2.equations[::50]:
        for m in e.terms:
            assert sum(1 for a in m if a[0] == sk.FORMAL) == 1
            assert not any(a[0] == sk.JET and a[3] for a in m)


def test_general_solution_solves_extracted_system(su2, ds_su2):
    assert all(e.is_zero() for e in realize(ds_su2, general_solution(su2)))


def test_impostor_does_not_solve_extracted_system(su2, ds_su2):
    imp = Generator.make([0] * 4, [[sk.field(a, k) for k in range(4)] for a in range(3)])
    assert not all(e.is_zero() for e in realize(ds_su2, imp))


def test_implies_D1(ds_su2):
    targets = [Expr.atom(H_atom(k, N).with_a(p, b))
               for k in range(4) for p in range(N) for b in range(4)]
    r = implies(ds_su2, targets, lambda a: is_H(a) and len(a[5]) == 1 and not a[4])
    assert r.ok and r.used > 0


def test_implies_D3(ds_su2):
    targets = [Expr.atom(H_atom(m, N).with_x(l)).scale(g(l))
               + Expr.atom(H_atom(l, N).with_x(m)).scale(g(m))
               for l in range(4) for m in range(4) if l != m]
    allowed = lambda a: (is_H(a) and len(a[4]) == 1 and not a[5]) or \
        (is_Phi(a) and len(a[5]) == 1 and not a[4])
    assert implies(ds_su2, targets, allowed).ok
    # the diagonal combination is not implied
    diag = [Expr.atom(H_atom(1, N).with_x(1))]
    assert not implies(ds_su2, diag, allowed).ok


def test_implies_D7(ds_su2):
    atoms = [(n, al) for n in range(N) for al in range(4)]
    targets = [Expr.atom(Phi_atom(d, k, N).with_a(*u).with_a(*v))
               for d in range(N) for k in range(4)
               for i, u in enumerate(atoms) for v in atoms[i:]]
    r = implies(ds_su2, targets, lambda a: is_Phi(a) and len(a[5]) == 2 and not a[4],
                assume_zero=lambda a: is_H(a) and bool(a[5]))
    assert r.ok and not r.missing


def test_threads_give_same_system(sys_su2, ds_su2):
    ds2 = extract_determining(sys_su2, threads=2)
    assert ds2.equations == ds_su2.equations and ds2.provenance == ds_su2.provenance


def test_gauge_mode_only_trace_equations_constrain_solution(su2, ds_su2_gauge):
    z = realize(ds_su2_gauge, general_solution(su2))
    bad = Counter(t for e, t in zip(z, ds_su2_gauge.provenance) if not e.is_zero())
    assert bad == {"gauge": 3}


def test_ansatz_counts():
    assert ansatz_unknowns(3, SPEC) == 792
    assert expected_dimension(3, SPEC) == 30
    assert expected_dimension(3, SPEC, gauge=True) == 14
    assert expected_dimension(6, SPEC) == 45
    assert expected_dimension(6, SPEC, gauge=True) == 17


def test_cap(sys_su2):
    with pytest.raises(AnsatzTooLarge, match="792"):
        solve_ansatz(sys_su2, SPEC, cap=100)


@pytest.mark.parametrize("spec", [AnsatzSpec(0, 0, 0), AnsatzSpec(1, 0, 0), AnsatzSpec(1, 1, 0),
                                  AnsatzSpec(2, 0, 1), AnsatzSpec(1, 1, 1)])
def test_small_ansatz_dimensions(sys_su2, spec):
    sol = solve_ansatz(sys_su2, spec)
    assert sol.dimension == expected_dimension(3, spec)
    assert sol.verified


def test_ansatz_basis_properties(sys_su2):
    sol = solve_ansatz(sys_su2, SPEC)
    assert sol.dimension == 30 and sol.verified
    assert all(f_antisymmetric(b) for b in sol.basis)
    again = solve_ansatz(sys_su2, SPEC, verify=False)
    assert again.basis == sol.basis


def test_alternative_gauge_elimination_agrees(sys_su2, gauge_su2):
    from ymlie.catalog import in_span
    s1 = solve_ansatz(sys_su2, SPEC, gauge_su2, verify=False)
    s2 = solve_ansatz(sys_su2, SPEC, gauge_su2, verify=False, alternative=True)
    assert s1.dimension == s2.dimension == 14
    assert all(in_span(b, s1.basis) for b in s2.basis)


def test_gauge_residual_general_solution(su2):
    k = Constants.symbolic(3)
    res = gauge_constraint_residual(general_solution(su2))
    assert res == expected_gauge_residual(su2, k.c, k.chi)


def test_gauge_residual_examples(su2):
    acc = gauge_constraint_residual(make(Acceleration(2), su2))
    assert acc[0] == sk.field(0, 2).scale(-2)
    const = gauge_constraint_residual(make(Gauge((sk.ONE, sk.ZERO, sk.ZERO)), su2))
    assert all(e.is_zero() for e in const)
    harmonic = gauge_constraint_residual(make(Gauge((sk.coord(1), sk.ZERO, sk.ZERO)), su2))
    # C_{a b 0} A_b^1 with d_1 chi_0 = 1
    assert harmonic == [sk.ZERO, sk.field(2, 1), -sk.field(1, 1)]
