"""Generators on (x, A) space and their second prolongation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from . import symkernel as sk
from .symkernel import Accumulator, Coordinate, Expr, FormalFunc, Jet, g


@dataclass(frozen=True)
class Generator:
    """v = H^k d/dx^k + Phi_a^k d/dA_a^k.

    ``phi[a][k]`` is Phi_a^k.  Entries are functions of x and A only.
    """

    h: Tuple[Expr, ...]
    phi: Tuple[Tuple[Expr, ...], ...]

    def __post_init__(self):
        if len(self.h) != 4 or any(len(row) != 4 for row in self.phi):
            raise ValueError("a generator needs 4 H entries and 4 Phi entries per field")
        for e in self.entries():
            if any(a[0] == sk.JET and a[3] for a in e.atoms()):
                raise ValueError("generator coefficients may not contain field derivatives")

    @staticmethod
    def make(h: Sequence, phi: Sequence[Sequence]) -> "Generator":
        conv = lambda v: v if isinstance(v, Expr) else Expr.const(v)
        return Generator(tuple(conv(v) for v in h),
                         tuple(tuple(conv(v) for v in row) for row in phi))

    @staticmethod
    def zero(n: int) -> "Generator":
        return Generator((sk.ZERO,) * 4, ((sk.ZERO,) * 4,) * n)

    @property
    def n(self) -> int:
        return len(self.phi)

    def entries(self):
        yield from self.h
        for row in self.phi:
            yield from row

    def __add__(self, other: "Generator") -> "Generator":
        return Generator(tuple(a + b for a, b in zip(self.h, other.h)),
                         tuple(tuple(a + b for a, b in zip(r, s))
                               for r, s in zip(self.phi, other.phi)))

    def scale(self, q) -> "Generator":
        return Generator(tuple(e.scale(q) for e in self.h),
                         tuple(tuple(e.scale(q) for e in r) for r in self.phi))

    def substitute(self, mapping) -> "Generator":
        f = lambda e: sk.substitute_many(e, mapping)
        return Generator(tuple(f(e) for e in self.h),
                         tuple(tuple(f(e) for e in r) for r in self.phi))

    def is_formal(self) -> bool:
        return any(a[0] == sk.FORMAL and a[6] for e in self.entries() for a in e.atoms())

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries())


def H_atom(k: int, n: int) -> FormalFunc:
    return FormalFunc("H", (k,), (), (), (), n)


def Phi_atom(a: int, k: int, n: int) -> FormalFunc:
    return FormalFunc("Phi", (k,), (a,), (), (), n)


def formal_generator(n: int) -> Generator:
    """Unknown H^k(x, A) and Phi_a^k(x, A) as bare formal atoms."""
    return Generator(tuple(Expr.atom(H_atom(k, n)) for k in range(4)),
                     tuple(tuple(Expr.atom(Phi_atom(a, k, n)) for k in range(4))
                           for a in range(n)))


class Prolongation:
    """Lazily computed coefficients Phi_{d lam}^k and Phi_{d lam pi}^k.

    Both are built from the characteristic Q_d^k = Phi_d^k - H^m d_m A_d^k:
    Phi_{d lam}^k = D_lam Q + H^m d_lam d_m A and
    Phi_{d lam pi}^k = D_pi D_lam Q + H^m d_pi d_lam d_m A.
    """

    def __init__(self, gen: Generator, order: int = sk.DEFAULT_ORDER):
        self.gen = gen
        self.order = order
        self._q: Dict[Tuple[int, int], Expr] = {}
        self._dq: Dict[Tuple[int, int, int], Expr] = {}
        self._p1: Dict[Tuple[int, int, int], Expr] = {}
        self._p2: Dict[Tuple[int, int, int, int], Expr] = {}

    def characteristic(self, d: int, k: int) -> Expr:
        q = self._q.get((d, k))
        if q is None:
            acc = Accumulator()
            acc.add(self.gen.phi[d][k])
            for m in range(4):
                acc.add_product(self.gen.h[m], sk.field(d, k, m), -1)
            q = self._q[(d, k)] = acc.result()
        return q

    def _dchar(self, d, k, lam):
        v = self._dq.get((d, k, lam))
        if v is None:
            v = self._dq[(d, k, lam)] = sk.total_derivative(
                self.characteristic(d, k), lam, self.order)
        return v

    def first(self, d: int, k: int, lam: int) -> Expr:
        key = (d, k, lam)
        v = self._p1.get(key)
        if v is None:
            acc = Accumulator()
            acc.add(self._dchar(d, k, lam))
            for m in range(4):
                acc.add_product(self.gen.h[m], sk.field(d, k, lam, m))
            v = self._p1[key] = acc.result()
        return v

    def second(self, d: int, k: int, lam: int, pi: int) -> Expr:
        lam, pi = min(lam, pi), max(lam, pi)
        key = (d, k, lam, pi)
        v = self._p2.get(key)
        if v is None:
            acc = Accumulator()
            acc.add(sk.total_derivative(self._dchar(d, k, lam), pi, self.order))
            for m in range(4):
                acc.add_product(self.gen.h[m], sk.field(d, k, lam, pi, m))
            v = acc.result()
            if v.jet_order() > 2:
                raise sk.TruncationOverflow("third-order jets survived in Phi_{d lam pi}")
            self._p2[key] = v
        return v

    def coefficient(self, jet: Jet) -> Expr:
        """The prolongation coefficient that multiplies d/d(jet)."""
        ds = jet[3]
        if not ds:
            return self.gen.phi[jet[1]][jet[2]]
        if len(ds) == 1:
            return self.first(jet[1], jet[2], ds[0])
        if len(ds) == 2:
            return self.second(jet[1], jet[2], ds[0], ds[1])
        raise ValueError("second prolongation acts on jets of order at most 2")


@dataclass
class ProlongationCoefficients:
    phi1: Dict[Tuple[int, int, int], Expr]
    phi2: Dict[Tuple[int, int, int, int], Expr]   # keys with lam <= pi


def prolong_coefficients(gen: Generator, order: int = sk.DEFAULT_ORDER) -> ProlongationCoefficients:
    p = Prolongation(gen, order)
    phi1 = {(d, k, lam): p.first(d, k, lam)
            for d in range(gen.n) for k in range(4) for lam in range(4)}
    phi2 = {(d, k, lam, pi): p.second(d, k, lam, pi)
            for d in range(gen.n) for k in range(4)
            for lam in range(4) for pi in range(lam, 4)}
    return ProlongationCoefficients(phi1, phi2)


def apply_pr2(gen, e: Expr) -> Expr:
    """pr^2 v applied to ``e``; ``gen`` may be a Generator or a Prolongation."""
    p = gen if isinstance(gen, Prolongation) else Prolongation(gen)
    if e.jet_order() > 2:
        raise ValueError("apply_pr2 needs an expression of jet order at most 2")
    acc = Accumulator()
    for a in sorted(e.atoms()):
        if a[0] == sk.COORD:
            acc.add_product(p.gen.h[a[1]], sk.partial(e, a))
        elif a[0] == sk.JET:
            acc.add_product(p.coefficient(a), sk.partial(e, a))
        elif a[0] == sk.FORMAL:
            raise ValueError("apply_pr2 acts on expressions free of formal atoms")
    return acc.result()


# --------------------------------------------------------------------------
# expanded coefficient formulas, written with partial derivatives only


def _A1(n, al, lam) -> Expr:
    return sk.field(n, al, lam)


def _fields(nf: int):
    return [(n, al) for n in range(nf) for al in range(4)]


def _field_atoms_of(gen: Generator):
    n = gen.n
    return [Jet(m, al) for m, al in _fields(n)]


def phi1_expanded(gen: Generator, d: int, k: int, lam: int) -> Expr:
    """d_lam Phi - (d_lam H^m) d_m A + (d_lam A) dPhi/dA - (d_lam A)(d_m A) dH^m/dA."""
    Phi = gen.phi[d][k]
    x = Coordinate(lam)
    acc = Accumulator()
    acc.add(sk.partial(Phi, x))
    for m in range(4):
        acc.add_product(sk.partial(gen.h[m], x), _A1(d, k, m), -1)
    for fa in _field_atoms_of(gen):
        dA = _A1(fa[1], fa[2], lam)
        acc.add_product(dA, sk.partial(Phi, fa))
        for m in range(4):
            acc.add_product(dA * _A1(d, k, m), sk.partial(gen.h[m], fa), -1)
    return acc.result()


def phi2_expanded(gen: Generator, d: int, k: int, lam: int, pi: int) -> Expr:
    """The fully expanded second-order coefficient, term by term."""
    Phi = gen.phi[d][k]
    H = gen.h
    xl, xp = Coordinate(lam), Coordinate(pi)
    fields = _field_atoms_of(gen)
    P = sk.partial
    acc = Accumulator()
    acc.add(P(P(Phi, xl), xp))
    for m in range(4):
        acc.add_product(_A1(d, k, m), P(P(H[m], xl), xp), -1)
    for fa in fields:
        n, al = fa[1], fa[2]
        acc.add_product(_A1(n, al, lam), P(P(Phi, xp), fa))
        acc.add_product(_A1(n, al, pi), P(P(Phi, xl), fa))
        acc.add_product(sk.field(n, al, lam, pi), P(Phi, fa))
        for m in range(4):
            acc.add_product(_A1(n, al, lam) * _A1(d, k, m), P(P(H[m], xp), fa), -1)
            acc.add_product(_A1(n, al, pi) * _A1(d, k, m), P(P(H[m], xl), fa), -1)
            acc.add_product(_A1(n, al, pi) * sk.field(d, k, lam, m), P(H[m], fa), -1)
            acc.add_product(_A1(n, al, lam) * sk.field(d, k, pi, m), P(H[m], fa), -1)
            acc.add_product(_A1(d, k, m) * sk.field(n, al, lam, pi), P(H[m], fa), -1)
        for fb in fields:
            p_, be = fb[1], fb[2]
            two = _A1(p_, be, pi) * _A1(n, al, lam)
            acc.add_product(two, P(P(Phi, fb), fa))
            for m in range(4):
                acc.add_product(two * _A1(d, k, m), P(P(H[m], fb), fa), -1)
    for m in range(4):
        acc.add_product(sk.field(d, k, pi, m), P(H[m], xl), -1)
        acc.add_product(sk.field(d, k, lam, m), P(H[m], xp), -1)
    return acc.result()


def symmetry_condition_expanded(sc, prol: Prolongation, a: int, nu: int) -> Expr:
    """pr^2 v of Delta_a^nu written as a sum over prolongation coefficients.

    Transcribes the standard regrouping of the prolonged field equations,
    term by term, for comparison against :func:`apply_pr2`.
    """
    gen = prol.gen
    n = sc.n
    A = sk.field
    Phi = lambda d, k: gen.phi[d][k]
    acc = Accumulator()
    for d in range(n):
        for c in range(n):
            cadc = sc(a, d, c)
            if not cadc:
                continue
            for k in range(4):
                inner = A(c, nu, k).scale(2) - A(c, k, nu).scale(g(nu) * g(k))
                acc.add_product(Phi(d, k), inner, cadc)
                acc.add_product(prol.first(d, k, k), A(c, nu), cadc)
        for b in range(n):
            cabd = sc(a, b, d)
            if not cabd:
                continue
            for mu in range(4):
                acc.add_product(Phi(d, nu), A(b, mu, mu), cabd)
                acc.add_product(prol.first(d, nu, mu), A(b, mu), 2 * cabd)
                acc.add_product(prol.first(d, mu, nu), A(b, mu), -cabd * g(nu) * g(mu))
    for d in range(n):
        for b in range(n):
            for l_ in range(n):
                coef = sum(sc(a, b, c) * sc(c, d, l_) + sc(a, d, c) * sc(c, b, l_)
                           for c in range(n))
                if coef:
                    for k in range(4):
                        acc.add_product(Phi(d, k), A(l_, nu) * A(b, k), coef * g(k))
                coef2 = sum(sc(a, b, c) * sc(c, l_, d) for c in range(n))
                if coef2:
                    for mu in range(4):
                        acc.add_product(Phi(d, nu), A(l_, mu) * A(b, mu), coef2 * g(mu))
    for lam in range(4):
        acc.add(prol.second(a, nu, lam, lam), g(lam))
        acc.add(prol.second(a, lam, lam, nu), -g(nu))
    return acc.result()
