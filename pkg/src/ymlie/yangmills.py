"""The Yang-Mills system, its solved forms, and the Lorentz gauge.

Equations are stored as Delta_a^nu = 0 with

    Delta_a^nu = d_mu d^mu A_a^nu - d_mu d^nu A_a^mu + 2 C_abc A_b^mu d_mu A_c^nu
                 + C_abc (d_mu A_b^mu) A_c^nu - C_abc A_b,mu d^nu A_c^mu
                 + C_abc C_cdl A_d^mu A_l^nu A_b,mu
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from . import symkernel as sk
from .liealgebra import StructureConstants
from .linalg import RationalMatrix, rank
from .symkernel import Accumulator, Atom, Expr, Jet, g

# Atom eliminated from Delta_n^nu, per nu.
ELIMINATED = {0: (1, 1), 1: (2, 2), 2: (1, 1), 3: (1, 1)}


def A(a: int, nu: int, *derivs: int) -> Expr:
    return sk.field(a, nu, *derivs)


def _ym_equation(sc: StructureConstants, a: int, nu: int) -> Expr:
    acc = Accumulator()
    n = sc.n
    for mu in range(4):
        acc.add(A(a, nu, mu, mu), g(mu))
        acc.add(A(a, mu, mu, nu), -g(nu))
    for (a_, b, c), cabc in sc.c.items():
        if a_ != a:
            continue
        for mu in range(4):
            acc.add_product(A(b, mu), A(c, nu, mu), 2 * cabc)
            acc.add_product(A(b, mu, mu), A(c, nu), cabc)
            acc.add_product(A(b, mu), A(c, mu, nu), -cabc * g(mu) * g(nu))
        for d in range(n):
            for l_ in range(n):
                ccdl = sc(c, d, l_)
                if not ccdl:
                    continue
                for mu in range(4):
                    acc.add_product(A(d, mu) * A(l_, nu), A(b, mu), cabc * ccdl * g(mu))
    return acc.result()


def field_strength(sc: StructureConstants, mu: int, nu: int) -> List[Expr]:
    """F_a^{mu nu} = d^mu A_a^nu - d^nu A_a^mu + C_abc A_b^mu A_c^nu for every a."""
    out = []
    for a in range(sc.n):
        acc = Accumulator()
        acc.add(A(a, nu, mu), g(mu))
        acc.add(A(a, mu, nu), -g(nu))
        for (a_, b, c), v in sc.c.items():
            if a_ == a:
                acc.add_product(A(b, mu), A(c, nu), v)
        out.append(acc.result())
    return out


def equations_from_field_strength(sc: StructureConstants) -> Dict[Tuple[int, int], Expr]:
    """d_mu F_a^{mu nu} + C_abc A_b,mu F_c^{mu nu}, expanded."""
    F = {(mu, nu): field_strength(sc, mu, nu) for mu in range(4) for nu in range(4)}
    out = {}
    for a in range(sc.n):
        for nu in range(4):
            acc = Accumulator()
            for mu in range(4):
                acc.add(sk.total_derivative(F[(mu, nu)][a], mu))
                for (a_, b, c), v in sc.c.items():
                    if a_ == a:
                        acc.add_product(A(b, mu), F[(mu, nu)][c], v * g(mu))
            out[(a, nu)] = acc.result()
    return out


def _solve_for(eq: Expr, target: Atom) -> Expr:
    """Rearrange ``eq = 0``, linear in ``target``, as ``target = rhs``."""
    coef = eq.coefficient((target,))
    rest = eq - Expr.atom(target).scale(coef)
    if not coef or target in rest.atoms():
        raise ValueError(f"equation is not solvable for {target!r}")
    return rest.scale(sk.Fraction(-1, 1) / coef)


@dataclass(frozen=True)
class GaugeCondition:
    """Lorentz gauge d_mu A_a^mu = 0 and its derivatives."""

    n: int
    equations: Tuple[Expr, ...]
    derivative_constraints: Dict[Tuple[int, int], Expr]

    def eliminations(self, alternative: bool = False) -> Dict[Atom, Expr]:
        """Solved forms eliminating d_0 A^0 and d_lam d_0 A^0 (or the d_3 A^3 family)."""
        elim: Dict[Atom, Expr] = {}
        sigma = 3 if alternative else 0
        for a in range(self.n):
            elim[Jet(a, sigma, (sigma,))] = _solve_for(self.equations[a], Jet(a, sigma, (sigma,)))
            for lam in range(4):
                t = Jet(a, sigma, (lam, sigma))
                elim[t] = _solve_for(self.derivative_constraints[(a, lam)], t)
        return elim


def build_gauge(sc: StructureConstants | int) -> GaugeCondition:
    """The gauge depends only on the number of fields, which may be given directly."""
    n = sc if isinstance(sc, int) else sc.n
    eqs = tuple(sk.esum(A(a, mu, mu) for mu in range(4)) for a in range(n))
    cons = {(a, lam): sk.total_derivative(eqs[a], lam)
            for a in range(n) for lam in range(4)}
    return GaugeCondition(n, eqs, cons)


@dataclass
class YMSystem:
    sc: StructureConstants
    equations: Dict[Tuple[int, int], Expr]
    solved_forms: Dict[Atom, Expr]
    sources: Dict[Atom, Tuple[int, int]]
    _elims: Dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.sc.n

    def eliminations(self, gauge: Optional[GaugeCondition] = None,
                     alternative: bool = False) -> Dict[Atom, Expr]:
        """All solved forms in effect, with right-hand sides free of targets."""
        key = (gauge is not None, alternative)
        if key in self._elims:
            return self._elims[key]
        forms = dict(self.solved_forms)
        if gauge is not None:
            gforms = gauge.eliminations(alternative)
            clash = set(forms) & set(gforms)
            if clash:
                raise ValueError(f"gauge and field eliminations overlap: {sorted(clash)}")
            forms.update(gforms)
        forms = close_eliminations(forms)
        self._elims[key] = forms
        return forms

    def reduce(self, e: Expr, gauge: Optional[GaugeCondition] = None,
               alternative: bool = False) -> Expr:
        return sk.substitute_many(e, self.eliminations(gauge, alternative))


def close_eliminations(forms: Dict[Atom, Expr], max_rounds: int = 10) -> Dict[Atom, Expr]:
    """Substitute solved forms into each other until no target appears on a rhs."""
    forms = dict(forms)
    for _ in range(max_rounds):
        dirty = False
        for t, rhs in list(forms.items()):
            hit = {a: forms[a] for a in rhs.atoms() if a in forms}
            if hit:
                if t in hit:
                    raise ValueError(f"cyclic elimination through {t!r}")
                forms[t] = sk.substitute_many(rhs, hit)
                dirty = True
        if not dirty:
            return forms
    raise ValueError("eliminations did not close")


def build_system(sc: StructureConstants) -> YMSystem:
    eqs = {(a, nu): _ym_equation(sc, a, nu) for a in range(sc.n) for nu in range(4)}
    solved: Dict[Atom, Expr] = {}
    sources: Dict[Atom, Tuple[int, int]] = {}
    for a in range(sc.n):
        for nu, derivs in ELIMINATED.items():
            t = Jet(a, nu, derivs)
            solved[t] = _solve_for(eqs[(a, nu)], t)
            sources[t] = (a, nu)
    for t, rhs in solved.items():
        if rhs.atoms() & solved.keys():
            raise AssertionError("solved forms are not mutually free")
    return YMSystem(sc, eqs, solved, sources)


def second_order_jacobian_rank(sys: YMSystem) -> int:
    """Rank of d Delta / d(second-order jets) at the zero jet."""
    atoms = sorted({a for e in sys.equations.values() for a in e.atoms()
                    if a[0] == sk.JET and len(a[3]) == 2})
    rows = [[sk.partial(sys.equations[key], t).constant_term() for t in atoms]
            for key in sorted(sys.equations)]
    return rank(RationalMatrix(rows, len(atoms)))


@dataclass
class DivergenceReport:
    ok: bool
    residual_direct: Expr
    residual_solved: Expr
    agree: bool


def divergence(sys: YMSystem, a: int) -> Expr:
    """sum over nu of D_nu Delta_a^nu."""
    acc = Accumulator()
    for nu in range(4):
        acc.add(sk.total_derivative(sys.equations[(a, nu)], nu))
    return acc.result()


def divergence_identity_check(sys: YMSystem) -> DivergenceReport:
    """Check that the divergence of the field equations vanishes on shell.

    The direct route adds back C_abc A_b,mu Delta_c^mu, which absorbs every
    second-derivative term; the other route substitutes the solved forms.
    Both residuals must be the zero polynomial.
    """
    sc = sys.sc
    direct = Accumulator()
    solved = Accumulator()
    for a in range(sc.n):
        div = divergence(sys, a)
        if div.jet_order() > 2:
            raise AssertionError("third derivatives survived in the divergence")
        corr = Accumulator()
        corr.add(div)
        for (a_, b, c), v in sc.c.items():
            if a_ != a:
                continue
            for mu in range(4):
                corr.add_product(A(b, mu), sys.equations[(c, mu)], v * g(mu))
        r1 = corr.result()
        r2 = sys.reduce(div)
        # keep the algebra index visible in the combined residual
        tag = sk.param(f"row{a}")
        direct.add_product(r1, tag)
        solved.add_product(r2, tag)
    r1, r2 = direct.result(), solved.result()
    return DivergenceReport(r1.is_zero() and r2.is_zero(), r1, r2, r1 == r2)
