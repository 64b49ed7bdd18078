"""Symmetry condition, determining equations and the polynomial ansatz solver."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import comb
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import symkernel as sk
from .linalg import SparseEchelon
from .prolongation import Generator, Prolongation, apply_pr2, formal_generator
from .symkernel import Accumulator, Atom, Coordinate, Expr, Jet, Param
from .yangmills import GaugeCondition, YMSystem, build_gauge

log = logging.getLogger(__name__)

TAGS = {(1, 1): "dA ddA", (0, 1): "ddA", (3, 0): "dA dA dA", (2, 0): "dA dA",
        (1, 0): "dA", (0, 0): "none"}
GAUGE_TAG = "gauge"


def symmetry_condition(sys: YMSystem, gen, order: int = sk.DEFAULT_ORDER) -> Dict[Tuple[int, int], Expr]:
    prol = gen if isinstance(gen, Prolongation) else Prolongation(gen, order)
    return {key: apply_pr2(prol, e) for key, e in sorted(sys.equations.items())}


def reduce_on_shell(e: Expr, sys: YMSystem, gauge: Optional[GaugeCondition] = None,
                    alternative: bool = False) -> Expr:
    return sys.reduce(e, gauge, alternative)


def lorentz_condition(prol: Prolongation, n: int) -> List[Expr]:
    """pr v of d_m A_a^m, i.e. the traces Phi_{a m}^m."""
    return [sk.esum(prol.first(a, m, m) for m in range(4)) for a in range(n)]


# --------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    residuals: Dict[Tuple, Expr]
    gauge_residuals: Dict[int, Expr] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals.values()) and \
            all(r.is_zero() for r in self.gauge_residuals.values())

    def nonzero(self) -> List[Tuple[Tuple, Expr]]:
        out = [(k, r) for k, r in sorted(self.residuals.items()) if not r.is_zero()]
        out += [(("gauge", a), r) for a, r in sorted(self.gauge_residuals.items())
                if not r.is_zero()]
        return out

    def leading_monomial(self):
        """First nonzero residual term, as (equation key, monomial, coefficient)."""
        for key, r in self.nonzero():
            m, c = r.sorted_terms()[0]
            return key, m, c
        return None


def verify_generator(sys: YMSystem, gen: Generator, gauge: Optional[GaugeCondition] = None,
                     alternative: bool = False) -> VerificationReport:
    """pr^2 v Delta reduced on shell, per equation; zero everywhere means a symmetry.

    With a gauge condition the Lorentz trace condition is checked as well.
    """
    prol = Prolongation(gen)
    res = {key: sys.reduce(e, gauge, alternative)
           for key, e in symmetry_condition(sys, prol).items()}
    gres = {}
    if gauge is not None:
        gres = {a: sys.reduce(e, gauge, alternative)
                for a, e in enumerate(lorentz_condition(prol, sys.n))}
    return VerificationReport(res, gres)


def gauge_constraint_residual(gen: Generator, gauge: Optional[GaugeCondition] = None,
                              alternative: bool = False) -> List[Expr]:
    """Phi_{a m}^m with the Lorentz condition used to eliminate d_0 A^0."""
    if gauge is None:
        gauge = build_gauge(gen.n)
    prol = Prolongation(gen)
    elim = gauge.eliminations(alternative)
    return [sk.substitute_many(e, elim) for e in lorentz_condition(prol, gen.n)]


def expected_gauge_residual(sc, c: Sequence[Expr], chi: Sequence[Expr]) -> List[Expr]:
    """2 c_k A_a^k + C_abd (d_m chi_d) A_b^m + d_m d^m chi_a."""
    out = []
    for a in range(sc.n):
        acc = Accumulator()
        for k in range(4):
            acc.add_product(c[k], sk.field(a, k), 2 * sk.g(k))
        for (a_, b, d), v in sc.c.items():
            if a_ == a:
                for m in range(4):
                    acc.add_product(sk.partial(chi[d], Coordinate(m)), sk.field(b, m), v)
        for m in range(4):
            acc.add(sk.partial_x(chi[a], (m, m)), sk.g(m))
        out.append(acc.result())
    return out


# --------------------------------------------------------------------------
# determining equations


@dataclass
class DeterminingSystem:
    equations: List[Expr]
    provenance: List[str]
    sources: List[Tuple] = field(default_factory=list)

    def __len__(self):
        return len(self.equations)

    def by_tag(self, tag: str) -> List[Expr]:
        return [e for e, t in zip(self.equations, self.provenance) if t == tag]

    def formal_atoms(self) -> set:
        return {a for e in self.equations for a in e.atoms() if a[0] == sk.FORMAL}


def classify_monomial(key) -> str:
    n1 = sum(1 for a in key if len(a[3]) == 1)
    n2 = sum(1 for a in key if len(a[3]) == 2)
    return TAGS.get((n1, n2), f"dA^{n1} ddA^{n2}")


def _normal(e: Expr):
    """Scale-invariant key used to drop repeated equations."""
    m, c = e.sorted_terms()[0]
    return e.scale(sk.Fraction(1) / c)


def _coefficients(e: Expr, tag_base) -> List[Tuple[str, Tuple, Expr]]:
    out = []
    for key, coef in sorted(sk.collect(e, sk.is_derivative_jet).items(),
                            key=lambda kv: (len(kv[0]), kv[0])):
        if not coef.is_zero():
            out.append((classify_monomial(key), (tag_base, key), coef))
    return out


def _extract_one(args):
    sys, gauge, alternative, key, cond = args
    return _coefficients(sys.reduce(cond, gauge, alternative), key)


def extract_determining(sys: YMSystem, gauge: Optional[GaugeCondition] = None,
                        threads: int = 1, alternative: bool = False) -> DeterminingSystem:
    """Determining equations for formal H, Phi, one per jet-monomial coefficient.

    Each prolonged equation is reduced on shell and collected over monomials
    in first and second derivatives of A.  Canonical monomials already merge
    exchange-equivalent products, which is the required symmetrization.
    """
    prol = Prolongation(formal_generator(sys.n))
    conds = list(symmetry_condition(sys, prol).items())
    if gauge is not None:
        conds += [(("L", a), e) for a, e in enumerate(lorentz_condition(prol, sys.n))]
    sys.eliminations(gauge, alternative)        # fill the cache before pickling
    jobs = [(sys, gauge, alternative, k, e) for k, e in conds]
    if threads > 1:
        with ProcessPoolExecutor(threads) as ex:
            parts = list(ex.map(_extract_one, jobs))
    else:
        parts = [_extract_one(j) for j in jobs]
    eqs, tags, srcs, seen = [], [], [], set()
    for part in parts:
        for tag, src, coef in part:
            if src[0][0] == "L":
                tag = GAUGE_TAG
            nk = _normal(coef)
            if nk in seen:
                continue
            seen.add(nk)
            eqs.append(coef)
            tags.append(tag)
            srcs.append(src)
    return DeterminingSystem(eqs, tags, srcs)


def realize(ds: DeterminingSystem, gen: Generator) -> List[Expr]:
    """Substitute a concrete generator (and its derivatives) for the formal atoms."""
    cache: Dict[Atom, Expr] = {}

    def value(a):
        if a[0] != sk.FORMAL or a[1] not in ("H", "Phi"):
            return None
        v = cache.get(a)
        if v is None:
            k = a[2][0]
            v = gen.h[k] if a[1] == "H" else gen.phi[a[3][0]][k]
            for mu in a[4]:
                v = sk.partial(v, Coordinate(mu))
            for n, al in a[5]:
                v = sk.partial(v, Jet(n, al))
            cache[a] = v
        return v

    mapping = {}
    for atom in ds.formal_atoms():
        v = value(atom)
        if v is not None:
            mapping[atom] = v
    return [sk.substitute_many(e, mapping) for e in ds.equations]


def _is_rational_in(e: Expr, allowed: Callable[[Atom], bool]) -> bool:
    return all(len(m) == 1 and allowed(m[0]) for m in e.terms)


@dataclass
class ImplicationReport:
    ok: bool
    used: int
    missing: List[Expr]


def implies(ds: DeterminingSystem, targets: Iterable[Expr], allowed: Callable[[Atom], bool],
            assume_zero: Optional[Callable[[Atom], bool]] = None) -> ImplicationReport:
    """Whether each target lies in the span of the equations over ``allowed`` atoms.

    Only equations that are rational combinations of allowed atoms take part;
    atoms matching ``assume_zero`` (conditions proved earlier) are set to 0
    first.
    """
    rows = []
    for e in ds.equations:
        if assume_zero is not None:
            e = sk.substitute_many(e, {a: sk.ZERO for a in e.atoms() if assume_zero(a)})
        if not e.is_zero() and _is_rational_in(e, allowed):
            rows.append(e)
    targets = list(targets)
    cols: Dict[Atom, int] = {}
    for e in rows + targets:
        for m in e.terms:
            cols.setdefault(m[0], len(cols))
    vec = lambda e: {cols[m[0]]: c for m, c in e.terms.items()}
    ech = SparseEchelon(len(cols))
    for r in rows:
        ech.add_row(vec(r))
    missing = []
    for t in targets:
        if not _is_rational_in(t, allowed):
            missing.append(t)
            continue
        r = ech._reduce(dict(vec(t)))
        if r:
            missing.append(t)
    return ImplicationReport(not missing, len(rows), missing)


# --------------------------------------------------------------------------
# ansatz solver


class AnsatzTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AnsatzSpec:
    deg_h: int
    deg_phi_linear: int
    deg_phi_inhom: int

    def __post_init__(self):
        if min(self.deg_h, self.deg_phi_linear, self.deg_phi_inhom) < 0:
            raise ValueError("ansatz degrees must be non-negative")


def x_monomials(deg: int) -> List[Tuple[int, ...]]:
    out = []
    for k in range(deg + 1):
        out.extend(combinations_with_replacement(range(4), k))
    return out


def _xmono(t) -> Expr:
    return Expr({tuple(Coordinate(m) for m in t): 1})


def _mono_tag(t) -> str:
    return "x" + "".join(str(m) for m in t) if t else "1"


def ansatz_generator(n: int, spec: AnsatzSpec) -> Tuple[Generator, List[Param]]:
    """H and Phi as polynomials with one parameter per coefficient."""
    params: List[Param] = []

    def fresh(name):
        p = Param(name)
        params.append(p)
        return Expr.atom(p)

    h = []
    for k in range(4):
        acc = Accumulator()
        for t in x_monomials(spec.deg_h):
            acc.add_product(fresh(f"h{k}_{_mono_tag(t)}"), _xmono(t))
        h.append(acc.result())
    phi = []
    for a in range(n):
        row = []
        for k in range(4):
            acc = Accumulator()
            for b in range(n):
                for be in range(4):
                    for t in x_monomials(spec.deg_phi_linear):
                        acc.add_product(fresh(f"f{a}{k}_{b}{be}_{_mono_tag(t)}"),
                                        _xmono(t) * sk.field(b, be))
            for t in x_monomials(spec.deg_phi_inhom):
                acc.add_product(fresh(f"F{a}{k}_{_mono_tag(t)}"), _xmono(t))
            row.append(acc.result())
        phi.append(tuple(row))
    return Generator(tuple(h), tuple(phi)), params


def ansatz_unknowns(n: int, spec: AnsatzSpec) -> int:
    c = lambda d: comb(d + 4, 4)
    return 4 * c(spec.deg_h) + 16 * n * n * c(spec.deg_phi_linear) + 4 * n * c(spec.deg_phi_inhom)


def expected_dimension(n: int, spec: AnsatzSpec, gauge: bool = False) -> int:
    """Parameter count of the closed-form solution restricted to the ansatz."""
    kh, k1, k2 = spec.deg_h, spec.deg_phi_linear, spec.deg_phi_inhom
    if gauge:
        return 4 + (6 + 1 if kh >= 1 else 0) + n
    dim = 4
    if kh >= 1:
        dim += 6 + 1
    if kh >= 2 and k1 >= 1:
        dim += 4
    # chi must fit in the A-linear part (degree k1) and d chi in the inhomogeneous one
    kc = min(k1, k2 + 1)
    return dim + n * comb(kc + 4, 4)


@dataclass
class SolutionSpace:
    dimension: int
    basis: List[Generator]
    unknowns: int
    rank: int
    reports: List[VerificationReport] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return len(self.reports) == len(self.basis) and all(r.ok for r in self.reports)


def _param_rows(e: Expr, cols: Dict[Param, int]):
    """Linear equations in the parameters: one per monomial in the other atoms."""
    buckets: Dict[Tuple, Dict[int, sk.Scalar]] = {}
    for m, c in e.terms.items():
        ps = [a for a in m if a[0] == sk.PARAM]
        if len(ps) != 1:
            raise ValueError("symmetry condition is not linear in the ansatz parameters")
        rest = tuple(a for a in m if a[0] != sk.PARAM)
        row = buckets.setdefault(rest, {})
        j = cols[ps[0]]
        row[j] = row.get(j, 0) + c
    return buckets.values()


def solve_ansatz(sys: YMSystem, spec: AnsatzSpec, gauge: Optional[GaugeCondition] = None,
                 cap: int = 20000, verify: bool = True,
                 alternative: bool = False) -> SolutionSpace:
    """Exact solution space of the determining equations under a polynomial ansatz.

    Phi is taken linear in A.  The rows are reduced incrementally; the basis
    has one generator per free parameter, in parameter order.
    """
    unknowns = ansatz_unknowns(sys.n, spec)
    if unknowns > cap:
        raise AnsatzTooLarge(f"ansatz has {unknowns} unknowns, cap is {cap}")
    gen, params = ansatz_generator(sys.n, spec)
    assert len(set(params)) == len(params), "ansatz parameter names collide"
    cols = {p: i for i, p in enumerate(params)}
    prol = Prolongation(gen)
    ech = SparseEchelon(len(params))
    conds = list(symmetry_condition(sys, prol).values())
    if gauge is not None:
        conds += lorentz_condition(prol, sys.n)
    for e in conds:
        for row in _param_rows(sys.reduce(e, gauge, alternative), cols):
            ech.add_row(row)
    null = ech.nullspace()
    basis = []
    for vec in null:
        mapping = {p: Expr.const(vec.get(i, 0)) for i, p in enumerate(params)}
        basis.append(gen.substitute(mapping))
    reports = [verify_generator(sys, b, gauge, alternative) for b in basis] if verify else []
    log.info("ansatz %s: %d unknowns, rank %d, dimension %d", spec, unknowns, ech.rank, len(basis))
    return SolutionSpace(len(basis), basis, unknowns, ech.rank, reports)


def linear_part(gen: Generator, a: int, m: int, b: int, k: int) -> Expr:
    """d Phi_a^m / d A_b^k."""
    return sk.partial(gen.phi[a][m], Jet(b, k))


def recovered_f(gen: Generator) -> Dict[Tuple[int, int], Expr]:
    """f^{m k} from the A-linear part: the coefficient of A_a^k in Phi_a^m, index raised.

    Off-diagonal (m != k) entries only; these do not involve h_ab.
    """
    out = {}
    for m in range(4):
        for k in range(4):
            if m != k:
                out[(m, k)] = linear_part(gen, 0, m, 0, k).scale(sk.g(k))
    return out


def f_antisymmetric(gen: Generator) -> bool:
    f = recovered_f(gen)
    return all((f[(m, k)] + f[(k, m)]).is_zero() for (m, k) in f)
