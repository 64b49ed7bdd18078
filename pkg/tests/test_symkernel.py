from fractions import Fraction

import pickle
import pytest

from ymlie import symkernel as sk
from ymlie.symkernel import (Coordinate, Expr, FormalFunc, Jet, Param, TruncationOverflow,
                             collect, partial, substitute, total_derivative)

x = sk.coord
A = sk.field


def test_additive_inverse():
    assert (x(1) + (-x(1))).is_zero()
    assert sk.add(x(1), -x(1)) == 0


def test_square_of_field():
    sq = sk.mul(A(1, 0), A(1, 0))
    assert sq.terms == {(Jet(1, 0), Jet(1, 0)): 1}


def test_rational_cancellation():
    e = sk.mul(x(0).scale(Fraction(2, 3)), A(2, 1).scale(Fraction(3, 2)))
    assert e == x(0) * A(2, 1)
    (c,) = e.terms.values()
    assert type(c) is int


def test_canonical_storage():
    e1 = x(0) * A(0, 1) + x(2)
    e2 = x(2) + A(0, 1) * x(0)
    assert e1 == e2 and hash(e1) == hash(e2)
    assert e1.terms == e2.terms
    assert not any(v == 0 for v in (e1 - e1 + x(1)).terms.values())


def test_atom_order():
    atoms = [FormalFunc("H", (0,), (), (), (), 1), Param("a"), Jet(0, 0), Coordinate(3)]
    assert sorted(atoms) == atoms[::-1]


def test_jet_derivs_sorted():
    assert Jet(0, 1, (3, 0, 2)) == Jet(0, 1, (0, 2, 3))


def test_chi_cannot_carry_field_derivatives():
    with pytest.raises(ValueError):
        FormalFunc("chi", (), (0,), (), ((0, 1),), 0)


def test_partial_examples():
    j = Jet(1, 3, (2,))
    assert partial(Expr.atom(j) ** 2, j) == Expr.atom(j).scale(2)
    assert partial(x(0) * A(2, 1), Coordinate(0)) == A(2, 1)
    h = FormalFunc("H", (0,), (), (), (), 3)
    assert partial(Expr.atom(h), Jet(1, 2)) == Expr.atom(h.with_a(1, 2))
    assert partial(Expr.atom(h), Coordinate(2)) == Expr.atom(h.with_x(2))


def test_partial_rejects_param():
    with pytest.raises(TypeError):
        partial(sk.param("a"), Param("a"))


def test_formal_depends_only_on_its_fields():
    chi = FormalFunc("chi", (), (0,), (), (), 0)
    assert partial(Expr.atom(chi), Jet(0, 0)).is_zero()
    h = FormalFunc("H", (0,), (), (), (), 1)
    assert partial(Expr.atom(h), Jet(1, 0)).is_zero()
    assert partial(Expr.atom(h), Jet(0, 0, (1,))).is_zero()


def test_total_derivative_examples():
    assert total_derivative(x(1), 0).is_zero()
    assert total_derivative(x(1), 1) == 1
    assert total_derivative(A(1, 0), 2) == A(1, 0, 2)
    assert total_derivative(x(1) * A(1, 3, 2), 0) == x(1) * A(1, 3, 0, 2)


def test_total_derivative_of_formal():
    n = 2
    h = FormalFunc("H", (0,), (), (), (), n)
    d = total_derivative(Expr.atom(h), 1)
    assert len(d) == 1 + 4 * n
    assert d.coefficient((h.with_x(1),)) == 1
    assert d.coefficient(tuple(sorted((Jet(1, 3, (1,)), h.with_a(1, 3))))) == 1
    chi = FormalFunc("chi", (), (0,), (), (), 0)
    assert total_derivative(Expr.atom(chi), 2) == Expr.atom(chi.with_x(2))


def test_truncation_overflow():
    third = A(0, 0, 1, 2, 3)
    with pytest.raises(TruncationOverflow):
        total_derivative(third, 0)
    assert total_derivative(third, 0, order=4) == A(0, 0, 0, 1, 2, 3)
    with pytest.raises(TruncationOverflow):
        total_derivative(third * x(1), 1)


def test_substitute_examples():
    j = Jet(1, 0, (1, 1))
    assert substitute(Expr.atom(j) ** 2, j, sk.ZERO).is_zero()
    assert substitute(x(0) + A(1, 1), Jet(1, 1), x(0)) == x(0).scale(2)
    e = x(2) * A(0, 0)
    assert substitute(e, Jet(1, 1), x(0)) == e


def test_substitute_many_is_simultaneous():
    e = x(0) * x(1)
    out = sk.substitute_many(e, {Coordinate(0): x(1), Coordinate(1): x(0)})
    assert out == e


def test_collect_examples():
    e = x(0) * A(1, 0, 1).scale(2) + x(1)
    c = collect(e, sk.is_jet)
    assert c == {(Jet(1, 0, (1,)),): x(0).scale(2), (): x(1)}
    assert collect(sk.ZERO, sk.is_jet) == {}


def test_evaluate_at_point():
    e = x(0) * A(1, 1)
    assert sk.evaluate_at_point(e, {Coordinate(0): 2, Jet(1, 1): Fraction(3, 2)}) == 3
    assert sk.evaluate_at_point(sk.ZERO, {}) == 0
    with pytest.raises(sk.MissingAssignment, match="A\\[1,1\\]"):
        sk.evaluate_at_point(e, {Coordinate(0): 2})


def test_power_and_scalars():
    e = x(0) + 1
    assert e ** 3 == e * e * e
    assert e ** 0 == 1
    assert sk.scalar(Fraction(4, 2)) == 2 and type(sk.scalar(Fraction(4, 2))) is int
    with pytest.raises(TypeError):
        sk.scalar(0.5)


def test_pickle_round_trip():
    e = x(0) * A(1, 2, 3) + Expr.atom(FormalFunc("Phi", (1,), (0,), (2,), ((0, 1),), 2))
    assert pickle.loads(pickle.dumps(e)) == e
