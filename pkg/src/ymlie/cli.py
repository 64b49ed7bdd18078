"""Command line interface and the generator file format.

A generator file holds ``key = expr`` lines, with ``#`` starting a comment::

    algebra = su2
    H[0] = x0
    Phi[1,2] = A[1,2]
    p(d) = 1/2

Keys are ``algebra``, ``H[k]``, ``Phi[a,k]`` and ``p(name)`` (a value for a
parameter appearing in the other entries).  Missing H and Phi entries are 0.
A gauge file for ``gauge:@file`` uses ``chi[a] = expr`` lines.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from . import catalog as cat
from . import detsys as ds
from . import symkernel as sk
from .liealgebra import (UnknownAlgebra, b1_solution_space, b1_symbolic_residuals, by_name,
                         jacobi_check, normalization_factor)
from .prolongation import Generator
from .syntax import ExprSyntaxError, IndexRangeError, Parser, monomial_text, to_text
from .yangmills import build_gauge, build_system, divergence_identity_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_KEY = re.compile(r"\s*(algebra|H\[\s*(\d+)\s*\]|Phi\[\s*(\d+)\s*,\s*(\d+)\s*\]|"
                  r"chi\[\s*(\d+)\s*\]|p\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\))\s*=")


class GeneratorFileError(ExprSyntaxError):
    pass


def _entries(text: str):
    """Yield (line, column of expression, match, expression text)."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _KEY.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise GeneratorFileError(f"expected 'key = expr', found {line.strip()!r}",
                                     lineno, col)
        yield lineno, m.end(), m, line[m.end():]


def _read_algebra(text: str) -> Optional[str]:
    for _, _, m, rest in _entries(text):
        if m.group(1) == "algebra":
            return rest.strip()
    return None


def parse_generator(text: str, algebra: Optional[str] = None) -> Tuple[Generator, str]:
    """Parse a generator file; returns the generator and its algebra name.

    ``algebra`` overrides a missing ``algebra =`` line; a conflicting one is
    an error.
    """
    declared = _read_algebra(text)
    if declared and algebra and declared != algebra:
        raise GeneratorFileError(f"file is for algebra {declared!r}, not {algebra!r}")
    name = declared or algebra
    if not name:
        raise GeneratorFileError("no algebra given")
    sc = by_name(name)
    n = sc.n
    h: List[sk.Expr] = [sk.ZERO] * 4
    phi = [[sk.ZERO] * 4 for _ in range(n)]
    values: Dict[sk.Param, sk.Expr] = {}
    seen = set()
    for lineno, col, m, rest in _entries(text):
        key = m.group(1)
        if key == "algebra":
            continue
        if key in seen:
            raise GeneratorFileError(f"duplicate entry {key}", lineno, 1)
        seen.add(key)
        e = Parser(rest, n, line=lineno, col_offset=col).parse()
        if m.group(2) is not None:
            k = int(m.group(2))
            _check_range(k, 4, "spacetime", lineno)
            h[k] = e
        elif m.group(3) is not None:
            a, k = int(m.group(3)), int(m.group(4))
            _check_range(a, n, "algebra", lineno)
            _check_range(k, 4, "spacetime", lineno)
            phi[a][k] = e
        elif m.group(6) is not None:
            if not e.is_constant():
                raise GeneratorFileError(f"parameter {m.group(6)} needs a rational value",
                                         lineno, col + 1)
            values[sk.Param(m.group(6))] = e
        else:
            raise GeneratorFileError("chi entries belong in a gauge file", lineno, 1)
    try:
        gen = Generator(tuple(h), tuple(tuple(r) for r in phi))
    except ValueError as exc:
        raise GeneratorFileError(str(exc)) from None
    if values:
        gen = gen.substitute(values)
    return gen, name


def _check_range(v, bound, what, lineno):
    if not 0 <= v < bound:
        raise IndexRangeError(f"{what} index {v} out of range 0..{bound - 1}", lineno, 1)


def print_generator(gen: Generator, algebra: str) -> str:
    lines = [f"algebra = {algebra}"]
    lines += [f"H[{k}] = {to_text(e)}" for k, e in enumerate(gen.h)]
    lines += [f"Phi[{a},{k}] = {to_text(e)}"
              for a, row in enumerate(gen.phi) for k, e in enumerate(row)]
    return "\n".join(lines) + "\n"


def parse_gauge_file(text: str, n: int) -> cat.Gauge:
    chi = [sk.ZERO] * n
    for lineno, col, m, rest in _entries(text):
        if m.group(1) == "algebra":
            continue
        if m.group(5) is None:
            raise GeneratorFileError("gauge files contain chi[a] entries only", lineno, 1)
        a = int(m.group(5))
        _check_range(a, n, "algebra", lineno)
        chi[a] = Parser(rest, n, line=lineno, col_offset=col).parse()
    try:
        return cat.Gauge(tuple(chi))
    except ValueError as exc:
        raise GeneratorFileError(str(exc)) from None


def resolve_generator(spec: str, algebra: str):
    """A catalog name, ``gauge:@file`` or a generator file path."""
    sc = by_name(algebra)
    if spec.startswith("gauge:@"):
        name = parse_gauge_file(Path(spec[7:]).read_text(encoding="utf-8"), sc.n)
        return cat.make(name, sc), cat.format_name(name)
    path = Path(spec)
    if path.is_file():
        gen, _ = parse_generator(path.read_text(encoding="utf-8"), algebra)
        return gen, spec
    name = cat.parse_name(spec, sc.n)
    return cat.make(name, sc), cat.format_name(name)


# --------------------------------------------------------------------------
# reports


def schema() -> dict:
    return json.loads(resources.files("ymlie").joinpath("data/report.schema.json")
                      .read_text(encoding="utf-8"))


def report(mode, algebra, residual_zero, equations, ansatz=None, dimension=None, **extra):
    out = {"mode": mode, "algebra": algebra, "ansatz": ansatz, "dimension": dimension,
           "residual_zero": residual_zero, "equations": equations}
    out.update(extra)
    return out


def dump(rep: dict, dest: Optional[str]) -> None:
    if not dest:
        return
    text = json.dumps(rep, sort_keys=True, indent=1) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def say(args, text: str) -> None:
    """Human summary; moved to stderr when the JSON report goes to stdout."""
    dest = getattr(args, "report", None) or getattr(args, "out", None)
    print(text, file=sys.stderr if dest == "-" else sys.stdout)


def _eq_entry(key, e):
    return {"key": list(key) if isinstance(key, tuple) else [key], "expr": to_text(e)}


# --------------------------------------------------------------------------
# commands


def _gauge_for(args, sc):
    return build_gauge(sc) if args.lorentz_gauge else None


def cmd_verify(args) -> int:
    sc = by_name(args.algebra)
    gen, label = resolve_generator(args.generator, args.algebra)
    system = build_system(sc)
    rep = ds.verify_generator(system, gen, _gauge_for(args, sc))
    eqs = [_eq_entry(k, r) for k, r in rep.nonzero()]
    lead = rep.leading_monomial()
    extra = {"generator": label}
    if lead:
        extra["leading_monomial"] = {"key": list(lead[0]), "monomial": monomial_text(lead[1]),
                                     "coefficient": str(lead[2])}
    dump(report("verify", args.algebra, rep.ok, eqs, lorentz_gauge=args.lorentz_gauge,
                **extra), args.report)
    if rep.ok:
        say(args, f"{label}: residual zero")
        return EXIT_OK
    say(args, f"{label}: nonzero residual in {len(eqs)} equations; "
        f"first term {lead[2]}*{monomial_text(lead[1])} in {lead[0]}")
    return EXIT_FAIL


def cmd_detsys(args) -> int:
    sc = by_name(args.algebra)
    system = build_system(sc)
    dsys = ds.extract_determining(system, _gauge_for(args, sc), threads=args.threads)
    eqs = [{"tag": t, "source": [list(src[0]), monomial_text(src[1])], "expr": to_text(e)}
           for e, t, src in zip(dsys.equations, dsys.provenance, dsys.sources)]
    counts: Dict[str, int] = {}
    for t in dsys.provenance:
        counts[t] = counts.get(t, 0) + 1
    dump(report("detsys", args.algebra, None, eqs, dimension=len(eqs),
                lorentz_gauge=args.lorentz_gauge, classes=counts), args.out)
    say(args, f"{len(eqs)} determining equations")
    for t in sorted(counts):
        say(args, f"  {t}: {counts[t]}")
    return EXIT_OK


def cmd_solve(args) -> int:
    sc = by_name(args.algebra)
    spec = ds.AnsatzSpec(args.deg_h, args.deg_phi, args.deg_inhom)
    system = build_system(sc)
    sol = ds.solve_ansatz(system, spec, _gauge_for(args, sc), cap=args.cap)
    ansatz = {"deg_h": spec.deg_h, "deg_phi_linear": spec.deg_phi_linear,
              "deg_phi_inhom": spec.deg_phi_inhom}
    if args.basis_dir:
        out = Path(args.basis_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, b in enumerate(sol.basis):
            (out / f"basis_{i:03d}.gen").write_text(print_generator(b, args.algebra),
                                                     encoding="utf-8")
    eqs = [{"key": [i], "expr": print_generator(b, args.algebra)}
           for i, b in enumerate(sol.basis)]
    dump(report("solve", args.algebra, sol.verified, eqs, ansatz=ansatz,
                dimension=sol.dimension, unknowns=sol.unknowns, rank=sol.rank,
                lorentz_gauge=args.lorentz_gauge), args.report)
    say(args, f"dimension {sol.dimension}")
    return EXIT_OK if sol.verified else EXIT_FAIL


def cmd_check(args) -> int:
    sc = by_name(args.algebra)
    if args.which == "appendix-a":
        r = divergence_identity_check(build_system(sc))
        eqs = [{"key": ["direct"], "expr": to_text(r.residual_direct)},
               {"key": ["solved"], "expr": to_text(r.residual_solved)}]
        ok = r.ok and r.agree
        dump(report("appendix-a", args.algebra, ok, eqs, agree=r.agree), args.report)
        say(args, "divergence identity " + ("holds" if ok else "FAILS"))
        return EXIT_OK if ok else EXIT_FAIL
    jac = jacobi_check(sc)
    r = b1_solution_space(sc)
    sym = b1_symbolic_residuals(sc)
    sym_ok = all(e.is_zero() for e in sym.values())
    ok = jac.ok and r.ok and sym_ok and r.nullity == sc.n
    eqs = [{"key": [i], "expr": json.dumps(m.entries, default=str)}
           for i, m in enumerate(r.basis)]
    dump(report("appendix-b", args.algebra, ok, eqs, dimension=r.nullity,
                kappa=str(normalization_factor(sc)), jacobi=jac.ok,
                particular=r.particular_check, adjoint_spans=r.adjoint_spans,
                antisymmetric=r.antisymmetric, symbolic=sym_ok), args.report)
    say(args, f"nullity {r.nullity}")
    return EXIT_OK if ok else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ymlie", description="Lie point symmetries of the Yang-Mills equations.")
    p.add_argument("--threads", type=int, default=1, help="worker processes for extraction")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, gauge=True, report_flag=True):
        sp.add_argument("--algebra", required=True, help="su2 or su2+su2")
        if gauge:
            sp.add_argument("--lorentz-gauge", action="store_true")
        if report_flag:
            sp.add_argument("--report", help="write the JSON report here ('-' for stdout)")
        sp.add_argument("--threads", type=int, default=argparse.SUPPRESS)

    v = sub.add_parser("verify", help="check a generator against the field equations")
    common(v)
    v.add_argument("--generator", required=True, help="catalog name or generator file")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("detsys", help="extract the determining equations")
    common(d, report_flag=False)
    d.add_argument("--out", required=True, help="path of the JSON report")
    d.set_defaults(func=cmd_detsys)

    s = sub.add_parser("solve", help="solve the determining equations under an ansatz")
    common(s)
    s.add_argument("--deg-h", type=int, required=True)
    s.add_argument("--deg-phi", type=int, required=True)
    s.add_argument("--deg-inhom", type=int, required=True)
    s.add_argument("--cap", type=int, default=20000, help="maximum number of unknowns")
    s.add_argument("--basis-dir", help="write one generator file per basis element")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", help="appendix identities")
    c.add_argument("which", choices=["appendix-a", "appendix-b"])
    common(c, gauge=False)
    c.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnknownAlgebra as exc:
        parser.print_usage(sys.stderr)
        print(f"ymlie: error: unknown algebra {exc.args[0]!r}", file=sys.stderr)
    except (ExprSyntaxError, ValueError, OSError) as exc:
        print(f"ymlie: error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
