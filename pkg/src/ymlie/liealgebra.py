"""Structure constants of compact semisimple Lie algebras.

Constants are exact rationals.  The unit normalization C_acd C_bcd = delta_ab
would force irrational entries for su(2), so any rational factor kappa with
C_acd C_bcd = kappa delta_ab is accepted and recorded instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Dict, List, Optional, Tuple

from . import symkernel as sk
from .linalg import RationalMatrix, nullspace, rank
from .symkernel import Expr, Scalar, scalar


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class StructureConstants:
    """Sparse tensor C_abd on ``n`` algebra indices (zero-based)."""

    n: int
    c: Dict[Tuple[int, int, int], Scalar] = field(default_factory=dict)
    name: str = field(default="custom", compare=False)

    def __call__(self, a: int, b: int, d: int) -> Scalar:
        return self.c.get((a, b, d), 0)

    def __hash__(self):
        return hash((self.n, frozenset(self.c.items())))

    def nonzero(self):
        return sorted(self.c.items())

    def scaled(self, factor) -> "StructureConstants":
        f = scalar(factor)
        return StructureConstants(self.n, {k: scalar(v * f) for k, v in self.c.items()},
                                  f"{self.name}*{f}")

    def with_entry(self, key, value) -> "StructureConstants":
        c = dict(self.c)
        value = scalar(value)
        if value:
            c[key] = value
        else:
            c.pop(key, None)
        return StructureConstants(self.n, c, self.name + "~")

    def is_abelian(self) -> bool:
        return not self.c

    def adjoint(self, b: int) -> RationalMatrix:
        """Matrix (C_b)_{ad} = C_bad."""
        return RationalMatrix([[self(b, a, d) for d in range(self.n)] for a in range(self.n)])


def antisymmetric(n: int, entries: Dict[Tuple[int, int, int], Scalar], name="custom"):
    """Complete a set of entries to a totally antisymmetric tensor."""
    c: Dict[Tuple[int, int, int], Scalar] = {}
    for key, v in entries.items():
        v = scalar(v)
        for p in permutations(range(3)):
            k = tuple(key[i] for i in p)
            c[k] = scalar(_perm_sign(p) * v)
    return StructureConstants(n, {k: v for k, v in c.items() if v}, name)


def build_su2() -> StructureConstants:
    """su(2) with C_abc = epsilon_abc."""
    return antisymmetric(3, {(0, 1, 2): 1}, "su2")


def build_abelian(n: int) -> StructureConstants:
    return StructureConstants(n, {}, f"u1^{n}")


def build_direct_sum(left: StructureConstants, right: StructureConstants) -> StructureConstants:
    c = dict(left.c)
    off = left.n
    for (a, b, d), v in right.c.items():
        c[(a + off, b + off, d + off)] = v
    return StructureConstants(left.n + right.n, c, f"{left.name}+{right.name}")


ALGEBRAS = {
    "su2": build_su2,
    "su2+su2": lambda: build_direct_sum(build_su2(), build_su2()),
}


class UnknownAlgebra(KeyError):
    pass


def by_name(name: str) -> StructureConstants:
    try:
        return ALGEBRAS[name]()
    except KeyError:
        raise UnknownAlgebra(name) from None


def parse_triplets(text: str, n: Optional[int] = None, name="custom") -> StructureConstants:
    """Read ``a b d value`` lines; missing orientations follow antisymmetry.

    Orientations given explicitly are kept as written, so inconsistent input
    survives to be reported by :func:`jacobi_check`.
    """
    given: Dict[Tuple[int, int, int], Scalar] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'a b d value'")
        a, b, d = (int(x) for x in parts[:3])
        given[(a, b, d)] = scalar(Fraction(parts[3]))
    if n is None:
        n = 1 + max((max(k) for k in given), default=-1)
    c: Dict[Tuple[int, int, int], Scalar] = {}
    for key, v in given.items():
        for p in permutations(range(3)):
            k = tuple(key[i] for i in p)
            if k not in given:
                c[k] = scalar(_perm_sign(p) * v)
    c.update(given)
    return StructureConstants(n, {k: v for k, v in c.items() if v}, name)


# --------------------------------------------------------------------------
# checks


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    kind: Optional[str] = None          # "antisymmetry" or "jacobi"
    witness: Optional[Tuple[int, ...]] = None
    value: Scalar = 0


def jacobi_check(sc: StructureConstants) -> JacobiReport:
    """Exhaustive antisymmetry and Jacobi scan, returning the first violation."""
    n = sc.n
    for key in product(range(n), repeat=3):
        v = sc(*key)
        for p in permutations(range(3)):
            k = tuple(key[i] for i in p)
            if sc(*k) != _perm_sign(p) * v:
                return JacobiReport(False, "antisymmetry", key + k, v)
    for a, b, c, d in product(range(n), repeat=4):
        s = 0
        for e in range(n):
            s += sc(a, b, e) * sc(e, c, d) + sc(c, b, e) * sc(a, e, d) \
                + sc(d, b, e) * sc(a, c, e)
        if s:
            return JacobiReport(False, "jacobi", (a, b, c, d), scalar(s))
    return JacobiReport(True)


class NotNormalizable(ValueError):
    """C_acd C_bcd is not a multiple of delta_ab."""


def killing_contraction(sc: StructureConstants) -> RationalMatrix:
    n = sc.n
    return RationalMatrix([[sum(sc(a, c, d) * sc(b, c, d)
                                for c in range(n) for d in range(n))
                            for b in range(n)] for a in range(n)])


def normalization_factor(sc: StructureConstants) -> Scalar:
    k = killing_contraction(sc)
    kappa = k[0, 0] if sc.n else 0
    for a in range(sc.n):
        for b in range(sc.n):
            if k[a, b] != (kappa if a == b else 0):
                raise NotNormalizable(
                    f"not normalizable by scaling: C_acd C_bcd at ({a},{b}) is {k[a, b]}")
    return kappa


# --------------------------------------------------------------------------
# the adjoint equation for h_ab


def b1_operator(sc: StructureConstants) -> RationalMatrix:
    """Matrix of h -> C_abd h_dn - C_dbn h_ad + C_adn h_db.

    Rows are indexed by (a, b, n) and columns by the entry (r, s) of h, both
    in row-major order.
    """
    n = sc.n
    rows = []
    for a, b, m in product(range(n), repeat=3):
        row = [0] * (n * n)
        for d in range(n):
            row[d * n + m] += sc(a, b, d)
            row[a * n + d] -= sc(d, b, m)
            row[d * n + b] += sc(a, d, m)
        rows.append(row)
    return RationalMatrix(rows, n * n)


def _as_matrix(vec, n) -> RationalMatrix:
    return RationalMatrix([list(vec[i * n:(i + 1) * n]) for i in range(n)], n)


@dataclass
class B1Report:
    nullity: int
    basis: List[RationalMatrix]
    particular_check: bool
    adjoint_spans: bool
    antisymmetric: bool

    @property
    def ok(self) -> bool:
        return self.particular_check and self.adjoint_spans and self.antisymmetric


def b1_solution_space(sc: StructureConstants) -> B1Report:
    """Solve C_abn G + C_abd h_dn - C_dbn h_ad + C_adn h_db = 0 for h.

    The homogeneous part is solved by exact nullspace computation; the
    result is compared with the span of the adjoint matrices (E_d)_ab = C_abd,
    and h = -G delta is checked as a particular solution.
    """
    n = sc.n
    op = b1_operator(sc)
    ns = nullspace(op)
    basis = [_as_matrix(v, n) for v in ns]

    adj = [[sc(a, b, d) for a in range(n) for b in range(n)] for d in range(n)]
    adj_rank = rank(RationalMatrix(adj, n * n)) if n else 0
    in_kernel = all(all(x == 0 for x in op @ v) for v in adj)
    combined = rank(RationalMatrix(ns + adj, n * n)) if (ns or adj) else 0
    spans = in_kernel and adj_rank == len(ns) and combined == len(ns)

    # source term C_abn G with G = 1, candidate h = -delta
    h = [-int(r == s) for r in range(n) for s in range(n)]
    image = op @ h
    source = [sc(a, b, m) for a, b, m in product(range(n), repeat=3)]
    particular = all(x + y == 0 for x, y in zip(image, source))

    antisym = all((m + m.transpose()).is_zero() for m in basis)
    return B1Report(len(ns), basis, particular, spans, antisym)


def b1_symbolic_residuals(sc: StructureConstants) -> Dict[Tuple[int, int, int], Expr]:
    """Residuals of the h_ab equation at h = -G delta + C chi, G and chi symbolic."""
    n = sc.n
    G = sk.param("G")
    chi = [sk.param(f"chi{d}") for d in range(n)]

    def h(r, s):
        e = -G if r == s else sk.ZERO
        for d in range(n):
            if sc(r, s, d):
                e = e + chi[d] * sc(r, s, d)
        return e

    out = {}
    for a, b, m in product(range(n), repeat=3):
        acc = sk.Accumulator()
        acc.add(G, sc(a, b, m))
        for d in range(n):
            acc.add(h(d, m), sc(a, b, d))
            acc.add(h(a, d), -sc(d, b, m))
            acc.add(h(d, b), sc(a, d, m))
        out[(a, b, m)] = acc.result()
    return out
