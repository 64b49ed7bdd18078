"""Randomized algebraic properties of the kernel and the text format."""

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from ymlie import symkernel as sk
from ymlie.syntax import parse, to_text

from randexpr import POOL

CASES = settings(max_examples=1000, deadline=None)

coefs = st.fractions(min_value=-6, max_value=6, max_denominator=4).filter(bool)
monomials = st.lists(st.sampled_from(POOL), max_size=3).map(lambda m: tuple(sorted(m)))
exprs = st.lists(st.tuples(monomials, coefs), max_size=4).map(sk.Expr.from_terms)


@CASES
@given(exprs, exprs, exprs)
def test_ring_axioms(p, q, r):
    assert (p + q) - q == p
    assert p + q == q + p
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)


@CASES
@given(exprs, exprs, st.integers(0, 3))
def test_leibniz(p, q, lam):
    D = sk.total_derivative
    assert D(p * q, lam) == D(p, lam) * q + p * D(q, lam)


@CASES
@given(exprs, st.integers(0, 3), st.integers(0, 3))
def test_total_derivatives_commute(e, lam, pi):
    D = sk.total_derivative
    assert D(D(e, lam), pi) == D(D(e, pi), lam)


@CASES
@given(exprs)
def test_collect_reconstructs(e):
    for classifier in (sk.is_jet, sk.is_derivative_jet, sk.is_formal):
        parts = sk.collect(e, classifier)
        total = sk.esum(sk.monomial_expr(k) * v for k, v in parts.items())
        assert total == e
        for k, v in parts.items():
            assert all(classifier(a) for a in k)
            assert not any(classifier(a) for a in v.atoms())


@CASES
@given(exprs)
def test_parse_print_round_trip(e):
    assert parse(to_text(e)) == e
