"""Scaling the field alone is not a symmetry; the residual shows where it fails."""

from ymlie import symkernel as sk
from ymlie.detsys import verify_generator
from ymlie.liealgebra import by_name
from ymlie.prolongation import Generator
from ymlie.syntax import monomial_text
from ymlie.yangmills import build_system

system = build_system(by_name("su2"))
impostor = Generator.make([0] * 4, [[sk.field(a, m) for m in range(4)] for a in range(3)])

report = verify_generator(system, impostor)
print("symmetry:", report.ok)
key, mono, coef = report.leading_monomial()
print(f"first surviving term in equation {key}: {coef} * {monomial_text(mono)}")
print("nonzero equations:", len(report.nonzero()))
