"""The conformal and gauge symmetry generators in closed form.

With constants a^m, b^{ml} = -b^{lm}, c^m, d and gauge functions chi_a(x),

    H^m     = -1/2 c^m x.x + c^l x^m x_l + b^{ml} x_l + d x^m + a^m
    Phi_a^m = (-c^m x_l + c_l x^m + b^m_l) A_a^l - (d + c.x) A_a^m
              + C_abd chi_d A_b^m + d^m chi_a
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import symkernel as sk
from .liealgebra import StructureConstants
from .prolongation import Generator
from .symkernel import Accumulator, Coordinate, Expr, FormalFunc, g


def chi_atom(a: int) -> FormalFunc:
    return FormalFunc("chi", (), (a,), (), (), 0)


def symbolic_chi(n: int) -> List[Expr]:
    return [Expr.atom(chi_atom(a)) for a in range(n)]


@dataclass(frozen=True)
class Constants:
    """Parameter values of the closed-form generator; entries are Exprs."""

    a: Tuple[Expr, ...]
    b: Dict[Tuple[int, int], Expr]      # keys m < l; b^{lm} = -b^{ml}
    c: Tuple[Expr, ...]
    d: Expr
    chi: Tuple[Expr, ...]

    def bb(self, m: int, l_: int) -> Expr:
        if m == l_:
            return sk.ZERO
        return self.b[(m, l_)] if m < l_ else -self.b[(l_, m)]

    @staticmethod
    def zero(n: int) -> "Constants":
        z = sk.ZERO
        return Constants((z,) * 4, {k: z for k in combinations(range(4), 2)}, (z,) * 4, z,
                         (z,) * n)

    @staticmethod
    def symbolic(n: int) -> "Constants":
        P = sk.param
        return Constants(tuple(P(f"a{m}") for m in range(4)),
                         {(m, l_): P(f"b{m}{l_}") for m, l_ in combinations(range(4), 2)},
                         tuple(P(f"c{m}") for m in range(4)), P("d"),
                         tuple(symbolic_chi(n)))


def closed_form(sc: StructureConstants, k: Constants) -> Generator:
    n = sc.n
    x = [sk.coord(m) for m in range(4)]
    xlow = [x[m].scale(g(m)) for m in range(4)]
    xx = sk.esum(x[m] * xlow[m] for m in range(4))
    cx = sk.esum(k.c[m] * xlow[m] for m in range(4))        # c_l x^l
    h = []
    for m in range(4):
        acc = Accumulator()
        acc.add_product(k.c[m], xx, sk.Fraction(-1, 2))
        acc.add_product(x[m], cx)
        for l_ in range(4):
            acc.add_product(k.bb(m, l_), xlow[l_])
        acc.add_product(k.d, x[m])
        acc.add(k.a[m])
        h.append(acc.result())
    phi = []
    for a in range(n):
        row = []
        for m in range(4):
            acc = Accumulator()
            for l_ in range(4):
                coef = -k.c[m] * xlow[l_] + k.c[l_].scale(g(l_)) * x[m] \
                    + k.bb(m, l_).scale(g(l_))
                acc.add_product(coef, sk.field(a, l_))
            acc.add_product(k.d + cx, sk.field(a, m), -1)
            for (a_, b, d), v in sc.c.items():
                if a_ == a:
                    acc.add_product(k.chi[d], sk.field(b, m), v)
            acc.add(sk.partial(k.chi[a], Coordinate(m)), g(m))
            row.append(acc.result())
        phi.append(tuple(row))
    return Generator(tuple(h), tuple(phi))


def general_solution(sc: StructureConstants, symbolic_gauge: bool = True) -> Generator:
    """All constants as parameters; chi symbolic or absent."""
    k = Constants.symbolic(sc.n)
    if not symbolic_gauge:
        k = Constants(k.a, k.b, k.c, k.d, (sk.ZERO,) * sc.n)
    return closed_form(sc, k)


# --------------------------------------------------------------------------
# names


@dataclass(frozen=True)
class Translation:
    mu: int


@dataclass(frozen=True)
class Lorentz:
    mu: int
    lam: int

    def __post_init__(self):
        if not 0 <= self.mu < self.lam <= 3:
            raise ValueError("Lorentz indices must satisfy mu < lam")


@dataclass(frozen=True)
class Acceleration:
    mu: int


@dataclass(frozen=True)
class Dilatation:
    pass


@dataclass(frozen=True)
class Gauge:
    """Gauge transformation with chi_a given by polynomials in x.

    ``chi = None`` means the symbolic, arbitrary chi_a(x).
    """

    chi: Optional[Tuple[Expr, ...]] = None

    def __post_init__(self):
        for e in self.chi or ():
            if any(a[0] != sk.COORD for a in e.atoms()):
                raise ValueError("gauge functions may depend on coordinates only")

    def is_constant(self) -> bool:
        return self.chi is not None and all(e.is_constant() for e in self.chi)


GeneratorName = Union[Translation, Lorentz, Acceleration, Dilatation, Gauge]


def make(name: GeneratorName, sc: StructureConstants) -> Generator:
    k = Constants.zero(sc.n)
    one = sk.ONE
    if isinstance(name, Translation):
        k = Constants(tuple(one if m == name.mu else sk.ZERO for m in range(4)),
                      k.b, k.c, k.d, k.chi)
    elif isinstance(name, Lorentz):
        b = dict(k.b)
        b[(name.mu, name.lam)] = one
        k = Constants(k.a, b, k.c, k.d, k.chi)
    elif isinstance(name, Acceleration):
        k = Constants(k.a, k.b, tuple(one if m == name.mu else sk.ZERO for m in range(4)),
                      k.d, k.chi)
    elif isinstance(name, Dilatation):
        k = Constants(k.a, k.b, k.c, one, k.chi)
    elif isinstance(name, Gauge):
        chi = tuple(symbolic_chi(sc.n)) if name.chi is None else tuple(name.chi)
        if len(chi) != sc.n:
            raise ValueError(f"gauge needs {sc.n} functions, got {len(chi)}")
        k = Constants(k.a, k.b, k.c, k.d, chi)
    else:
        raise TypeError(f"not a generator name: {name!r}")
    return closed_form(sc, k)


def conformal_names() -> List[GeneratorName]:
    return ([Translation(m) for m in range(4)]
            + [Lorentz(m, l_) for m, l_ in combinations(range(4), 2)]
            + [Acceleration(m) for m in range(4)] + [Dilatation()])


def constant_gauges(n: int) -> List[Gauge]:
    return [Gauge(tuple(sk.ONE if d == a else sk.ZERO for d in range(n))) for a in range(n)]


def lorentz_gauge_admissible(n: int = 3) -> List[GeneratorName]:
    """Names surviving the Lorentz gauge: Poincare, dilatation, global gauge."""
    return ([Translation(m) for m in range(4)]
            + [Lorentz(m, l_) for m, l_ in combinations(range(4), 2)]
            + [Dilatation()] + constant_gauges(n))


def is_lorentz_gauge_admissible(name: GeneratorName) -> bool:
    if isinstance(name, Gauge):
        return name.is_constant()
    return not isinstance(name, Acceleration)


def format_name(name: GeneratorName) -> str:
    if isinstance(name, Translation):
        return f"translation:{name.mu}"
    if isinstance(name, Lorentz):
        return f"lorentz:{name.mu},{name.lam}"
    if isinstance(name, Acceleration):
        return f"acceleration:{name.mu}"
    if isinstance(name, Dilatation):
        return "dilatation"
    if name.chi is None:
        return "gauge:symbolic"
    from .syntax import to_text
    return "gauge:" + ";".join(to_text(e) for e in name.chi)


def parse_name(text: str, n: int) -> GeneratorName:
    """Parse ``translation:0``, ``lorentz:0,1``, ``dilatation``, ``gauge:x1;0;0``...

    ``gauge:@file`` is resolved by the command line layer, not here.
    """
    kind, _, arg = text.strip().partition(":")
    try:
        if kind == "translation":
            return Translation(_index(arg))
        if kind == "acceleration":
            return Acceleration(_index(arg))
        if kind == "lorentz":
            mu, lam = (_index(s) for s in arg.split(","))
            return Lorentz(mu, lam)
        if kind == "dilatation" and not arg:
            return Dilatation()
        if kind == "gauge":
            if arg in ("", "symbolic"):
                return Gauge(None)
            from .syntax import parse
            parts = arg.split(";")
            if len(parts) != n:
                raise ValueError(f"gauge needs {n} functions")
            return Gauge(tuple(parse(p, n) for p in parts))
    except ValueError as exc:
        raise ValueError(f"bad generator name {text!r}: {exc}") from None
    raise ValueError(f"unknown generator name {text!r}")


def _index(s: str) -> int:
    v = int(s)
    if not 0 <= v <= 3:
        raise ValueError(f"index {v} out of range 0..3")
    return v


# --------------------------------------------------------------------------
# commutators


def vector_field_apply(gen: Generator, f: Expr) -> Expr:
    """v(f) for f a function of x and A."""
    acc = Accumulator()
    for a in f.atoms():
        if a[0] == sk.COORD:
            acc.add_product(gen.h[a[1]], sk.partial(f, a))
        elif a[0] == sk.JET and not a[3]:
            acc.add_product(gen.phi[a[1]][a[2]], sk.partial(f, a))
    return acc.result()


def commutator(v: Generator, w: Generator) -> Generator:
    """[v, w] acting on the (x, A) function algebra."""
    h = tuple(vector_field_apply(v, w.h[m]) - vector_field_apply(w, v.h[m]) for m in range(4))
    phi = tuple(tuple(vector_field_apply(v, w.phi[a][m]) - vector_field_apply(w, v.phi[a][m])
                      for m in range(4)) for a in range(v.n))
    return Generator(h, phi)


def in_span(target: Generator, basis: Sequence[Generator]) -> bool:
    """Whether ``target`` is a rational combination of ``basis``."""
    from .linalg import SparseEchelon
    cols: Dict[Tuple, int] = {}

    def vec(gen):
        out = {}
        for i, e in enumerate(gen.entries()):
            for m, c in e.terms.items():
                j = cols.setdefault((i, m), len(cols))
                out[j] = c
        return out

    vb = [vec(b) for b in basis]
    vt = vec(target)
    ech = SparseEchelon(len(cols))
    for r in vb:
        ech.add_row(r)
    r0 = ech.rank
    ech.add_row(vt)
    return ech.rank == r0
