"""Exact polynomial arithmetic over jet space.

An :class:`Expr` is a polynomial with rational coefficients in *atoms*:
spacetime coordinates ``x^mu``, jet coordinates ``d_l...d_p A_a^nu``, free
parameters, and formal (unknown) functions carrying their derivative history.
Distinct atoms are independent variables; derivatives of formal functions are
new atoms, so no chain rule is ever applied implicitly.

Index conventions: field indices are stored raised and derivative indices
lowered.  Metric signs (+, -, -, -) are applied by whoever builds an
expression, never by the kernel.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import groupby
from typing import Callable, Dict, Iterable, Mapping, Tuple, Union

Scalar = Union[int, Fraction]

DEFAULT_ORDER = 3
METRIC = (1, -1, -1, -1)


def g(mu: int) -> int:
    """Diagonal Minkowski metric component g_{mu mu} (= g^{mu mu})."""
    return METRIC[mu]


def scalar(q) -> Scalar:
    """Normalize a rational to ``int`` when integral, else a reduced Fraction."""
    if type(q) is int:
        return q
    if isinstance(q, Fraction):
        return q.numerator if q.denominator == 1 else q
    if isinstance(q, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(q, (int, str)):
        return scalar(Fraction(q))
    raise TypeError(f"not an exact rational: {q!r}")


class TruncationOverflow(ArithmeticError):
    """A total derivative would produce a jet beyond the truncation order."""


# --------------------------------------------------------------------------
# atoms
#
# Atoms are tuples whose first entry is a kind tag, so that plain tuple
# comparison yields the canonical order Coordinate < Jet < Param < FormalFunc.


class Coordinate(tuple):
    __slots__ = ()

    def __new__(cls, mu: int):
        return tuple.__new__(cls, (0, mu))

    def __getnewargs__(self):
        return (self[1],)

    @property
    def mu(self) -> int:
        return self[1]

    def __repr__(self):
        return f"x{self[1]}"


class Jet(tuple):
    """``d_{derivs} A_a^nu``; an empty ``derivs`` is the field itself."""

    __slots__ = ()

    def __new__(cls, a: int, nu: int, derivs: Iterable[int] = ()):
        return tuple.__new__(cls, (1, a, nu, tuple(sorted(derivs))))

    def __getnewargs__(self):
        return (self[1], self[2], self[3])

    @property
    def a(self) -> int:
        return self[1]

    @property
    def nu(self) -> int:
        return self[2]

    @property
    def derivs(self) -> Tuple[int, ...]:
        return self[3]

    @property
    def order(self) -> int:
        return len(self[3])

    def __repr__(self):
        s = f"A[{self[1]},{self[2]}]"
        for lam in self[3]:
            s = f"d({s},{lam})"
        return s


class Param(tuple):
    __slots__ = ()

    def __new__(cls, name: str):
        return tuple.__new__(cls, (2, name))

    def __getnewargs__(self):
        return (self[1],)

    @property
    def name(self) -> str:
        return self[1]

    def __repr__(self):
        return f"p({self[1]})"


class FormalFunc(tuple):
    """Unknown function of ``x`` and of the first ``nfields`` field multiplets.

    ``nfields == 0`` marks a function of ``x`` only (a gauge function chi);
    such atoms never acquire field derivatives.
    """

    __slots__ = ()

    def __new__(cls, name: str, upper=(), lower=(), xderivs=(), aderivs=(),
                nfields: int = 0):
        aderivs = tuple(sorted(tuple(p) for p in aderivs))
        if nfields == 0 and aderivs:
            raise ValueError("x-only formal function cannot carry field derivatives")
        return tuple.__new__(cls, (3, name, tuple(upper), tuple(lower),
                                   tuple(sorted(xderivs)), aderivs, nfields))

    def __getnewargs__(self):
        return self[1:]

    name = property(lambda s: s[1])
    upper = property(lambda s: s[2])
    lower = property(lambda s: s[3])
    xderivs = property(lambda s: s[4])
    aderivs = property(lambda s: s[5])
    nfields = property(lambda s: s[6])

    @property
    def base(self) -> "FormalFunc":
        return FormalFunc(self[1], self[2], self[3], (), (), self[6])

    def with_x(self, mu: int) -> "FormalFunc":
        return FormalFunc(self[1], self[2], self[3], self[4] + (mu,), self[5], self[6])

    def with_a(self, n: int, alpha: int) -> "FormalFunc":
        return FormalFunc(self[1], self[2], self[3], self[4], self[5] + ((n, alpha),),
                          self[6])

    def __repr__(self):
        from .syntax import atom_to_text
        return atom_to_text(self)


Atom = Union[Coordinate, Jet, Param, FormalFunc]
Monomial = Tuple[Atom, ...]  # sorted, repeated atoms encode exponents

COORD, JET, PARAM, FORMAL = 0, 1, 2, 3


def is_jet(a) -> bool:
    return a[0] == JET


def is_derivative_jet(a) -> bool:
    return a[0] == JET and bool(a[3])


def is_param(a) -> bool:
    return a[0] == PARAM


def is_formal(a) -> bool:
    return a[0] == FORMAL


def exponents(m: Monomial) -> Dict[Atom, int]:
    """Monomial as the map atom -> positive exponent."""
    return {a: len(list(grp)) for a, grp in groupby(m)}


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _merge(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    return tuple(sorted(m1 + m2))


# --------------------------------------------------------------------------
# polynomials


class Expr:
    """Immutable multivariate polynomial with exact rational coefficients.

    Storage is a dict from canonical monomial to nonzero scalar, so equal
    polynomials always have equal storage.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        # Callers inside this module pass already-canonical dicts.
        self.terms = terms if terms is not None else {}
        self._hash = None

    # constructors -----------------------------------------------------
    @staticmethod
    def const(q) -> "Expr":
        q = scalar(q)
        return Expr({(): q}) if q else ZERO

    @staticmethod
    def atom(a: Atom) -> "Expr":
        return Expr({(a,): 1})

    @staticmethod
    def from_terms(items: Iterable[Tuple[Iterable[Atom], Scalar]]) -> "Expr":
        out: Dict[Monomial, Scalar] = {}
        for m, c in items:
            m = tuple(sorted(m))
            out[m] = out.get(m, 0) + scalar(c)
        return Expr(_clean(out))

    # queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def atoms(self) -> set:
        return {a for m in self.terms for a in m}

    def constant_term(self) -> Scalar:
        return self.terms.get((), 0)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def coefficient(self, m: Iterable[Atom]) -> Scalar:
        return self.terms.get(tuple(sorted(m)), 0)

    def jet_order(self) -> int:
        return max((a[3].__len__() for m in self.terms for a in m if a[0] == JET),
                   default=-1)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def leading_monomial(self) -> Monomial:
        return self.sorted_terms()[0][0]

    # ring operations -------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Expr):
            other = Expr.const(other)
        if len(self.terms) < len(other.terms):
            self, other = other, self
        out = dict(self.terms)
        _acc(out, other.terms, 1)
        return Expr(_clean(out))

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Expr):
            other = Expr.const(other)
        out = dict(self.terms)
        _acc(out, other.terms, -1)
        return Expr(_clean(out))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, q) -> "Expr":
        q = scalar(q)
        if not q:
            return ZERO
        if q == 1:
            return self
        return Expr({m: _norm(c * q) for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Expr):
            return self.scale(other)
        if not self.terms or not other.terms:
            return ZERO
        if len(self.terms) < len(other.terms):
            self, other = other, self
        out: Dict[Monomial, Scalar] = {}
        get = out.get
        items = list(self.terms.items())
        for m2, c2 in other.terms.items():
            if not m2:
                for m1, c1 in items:
                    out[m1] = get(m1, 0) + c1 * c2
                continue
            for m1, c1 in items:
                m = tuple(sorted(m1 + m2)) if m1 else m2
                out[m] = get(m, 0) + c1 * c2
        return Expr(_clean(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Expr):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == Expr.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        from .syntax import to_text
        return to_text(self)

    def __reduce__(self):
        return (Expr, (self.terms,))


def _acc(out: dict, terms: Mapping, factor) -> None:
    get = out.get
    if factor == 1:
        for m, c in terms.items():
            out[m] = get(m, 0) + c
    else:
        for m, c in terms.items():
            out[m] = get(m, 0) + c * factor


def _clean(out: dict) -> dict:
    bad = []
    for m, c in out.items():
        if not c:
            bad.append(m)
        elif type(c) is Fraction and c.denominator == 1:
            out[m] = c.numerator
    for m in bad:
        del out[m]
    return out


ZERO = Expr({})
ONE = Expr({(): 1})


def add(lhs: Expr, rhs: Expr) -> Expr:
    return lhs + rhs


def mul(lhs: Expr, rhs: Expr) -> Expr:
    return lhs * rhs


def coord(mu: int) -> Expr:
    return Expr.atom(Coordinate(mu))


def field(a: int, nu: int, *derivs: int) -> Expr:
    return Expr.atom(Jet(a, nu, derivs))


def param(name: str) -> Expr:
    return Expr.atom(Param(name))


def const(q) -> Expr:
    return Expr.const(q)


class Accumulator:
    """Mutable sum of many Exprs; avoids quadratic copying in long sums."""

    __slots__ = ("terms",)

    def __init__(self):
        self.terms: Dict[Monomial, Scalar] = {}

    def add(self, e: Expr, factor=1) -> None:
        if factor:
            _acc(self.terms, e.terms, factor)

    def add_product(self, e1: Expr, e2: Expr, factor=1) -> None:
        """Add ``factor * e1 * e2`` without materializing the product."""
        if not factor or not e1.terms or not e2.terms:
            return
        out = self.terms
        get = out.get
        items = list(e1.terms.items())
        for m2, c2 in e2.terms.items():
            c2 = c2 * factor
            for m1, c1 in items:
                m = tuple(sorted(m1 + m2)) if (m1 and m2) else (m1 or m2)
                out[m] = get(m, 0) + c1 * c2

    def add_term(self, m: Monomial, c) -> None:
        self.terms[m] = self.terms.get(m, 0) + c

    def result(self) -> Expr:
        return Expr(_clean(dict(self.terms)))


def esum(exprs: Iterable[Expr]) -> Expr:
    acc = Accumulator()
    for e in exprs:
        acc.add(e)
    return acc.result()


# --------------------------------------------------------------------------
# derivatives


def _remove_one(m: Monomial, a: Atom) -> Monomial:
    i = m.index(a)
    return m[:i] + m[i + 1:]


def _atom_partial(a: Atom, wrt: Atom):
    """d a / d wrt as ``None`` (zero), ``1`` or a new atom."""
    if a == wrt:
        return 1
    if a[0] == FORMAL:
        if wrt[0] == COORD:
            return a.with_x(wrt[1])
        if wrt[0] == JET and not wrt[3] and wrt[1] < a[6]:
            return a.with_a(wrt[1], wrt[2])
    return None


def partial(e: Expr, wrt: Atom) -> Expr:
    """Formal partial derivative with respect to a coordinate or jet atom.

    Formal functions depend on all coordinates and on the undifferentiated
    fields of their first ``nfields`` multiplets; differentiating one appends
    to its derivative history.
    """
    if wrt[0] not in (COORD, JET):
        raise TypeError(f"cannot differentiate with respect to {wrt!r}")
    out: Dict[Monomial, Scalar] = {}
    get = out.get
    for m, c in e.terms.items():
        for a, grp in groupby(m):
            d = _atom_partial(a, wrt)
            if d is None:
                continue
            k = len(list(grp))
            rest = _remove_one(m, a)
            nm = rest if d == 1 else tuple(sorted(rest + (d,)))
            out[nm] = get(nm, 0) + c * k
    return Expr(_clean(out))


@lru_cache(maxsize=None)
def _atom_total(a: Atom, lam: int, order: int):
    """D_lambda applied to one atom, as a tuple of (coefficient, atoms)."""
    kind = a[0]
    if kind == COORD:
        return ((1, ()),) if a[1] == lam else ()
    if kind == PARAM:
        return ()
    if kind == JET:
        if len(a[3]) >= order:
            raise TruncationOverflow(
                f"D_{lam} of {a!r} exceeds jet truncation order {order}")
        return ((1, (Jet(a[1], a[2], a[3] + (lam,)),)),)
    out = [(1, (a.with_x(lam),))]
    for n in range(a[6]):
        for alpha in range(4):
            out.append((1, (Jet(n, alpha, (lam,)), a.with_a(n, alpha))))
    return tuple(out)


def total_derivative(e: Expr, lam: int, order: int = DEFAULT_ORDER) -> Expr:
    """Total derivative D_lambda on jet space truncated at ``order``."""
    out: Dict[Monomial, Scalar] = {}
    get = out.get
    for m, c in e.terms.items():
        for a, grp in groupby(m):
            if a[0] == PARAM:
                continue
            parts = _atom_total(a, lam, order)
            if not parts:
                continue
            k = len(list(grp))
            rest = _remove_one(m, a)
            ck = c * k
            for cc, new in parts:
                nm = tuple(sorted(rest + new))
                out[nm] = get(nm, 0) + ck * cc
    return Expr(_clean(out))


def total_derivatives(e: Expr, lams: Iterable[int], order: int = DEFAULT_ORDER) -> Expr:
    for lam in lams:
        e = total_derivative(e, lam, order)
    return e


def partial_x(e: Expr, mus: Iterable[int]) -> Expr:
    for mu in mus:
        e = partial(e, Coordinate(mu))
    return e


# --------------------------------------------------------------------------
# substitution, collection, evaluation


def substitute(e: Expr, target: Atom, replacement: Expr) -> Expr:
    """Replace every occurrence (at any power) of ``target``."""
    return substitute_many(e, {target: replacement})


def substitute_many(e: Expr, mapping: Mapping[Atom, Expr]) -> Expr:
    """Simultaneously replace several atoms by expressions."""
    if not mapping:
        return e
    keep: Dict[Monomial, Scalar] = {}
    hit: Dict[Monomial, Dict[Monomial, Scalar]] = {}
    for m, c in e.terms.items():
        if not any(a in mapping for a in m):
            keep[m] = c
            continue
        key = tuple(a for a in m if a in mapping)
        rest = tuple(a for a in m if a not in mapping)
        bucket = hit.setdefault(key, {})
        bucket[rest] = bucket.get(rest, 0) + c
    acc = Accumulator()
    acc.terms = keep
    powers: Dict[Tuple[Atom, int], Expr] = {}
    for key, rest in hit.items():
        prod = ONE
        for a, grp in groupby(key):
            k = len(list(grp))
            p = powers.get((a, k))
            if p is None:
                p = powers[(a, k)] = mapping[a] ** k
            prod = prod * p
        acc.add_product(prod, Expr(_clean(rest)))
    return acc.result()


def map_atoms(e: Expr, fn: Callable[[Atom], Expr | None]) -> Expr:
    """Substitute ``fn(atom)`` for every atom where it returns an Expr."""
    mapping = {}
    for a in e.atoms():
        r = fn(a)
        if r is not None:
            mapping[a] = r
    return substitute_many(e, mapping)


def collect(e: Expr, classifier: Callable[[Atom], bool]) -> Dict[Monomial, Expr]:
    """Split ``e = sum key * value`` with keys over classified atoms only."""
    buckets: Dict[Monomial, Dict[Monomial, Scalar]] = {}
    for m, c in e.terms.items():
        key = tuple(a for a in m if classifier(a))
        rest = tuple(a for a in m if not classifier(a)) if key else m
        b = buckets.get(key)
        if b is None:
            b = buckets[key] = {}
        b[rest] = c
    return {k: Expr(v) for k, v in buckets.items()}


def monomial_expr(m: Monomial) -> Expr:
    return Expr({tuple(m): 1})


class MissingAssignment(KeyError):
    pass


def evaluate_at_point(e: Expr, assignment: Mapping[Atom, Scalar]) -> Scalar:
    """Exact value of ``e`` with every atom replaced by a rational."""
    total = 0
    for m, c in e.terms.items():
        v = c
        for a in m:
            try:
                v = v * assignment[a]
            except KeyError:
                raise MissingAssignment(f"no value assigned to atom {a!r}") from None
        total += v
    return scalar(total) if isinstance(total, Fraction) else total
