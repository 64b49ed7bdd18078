"""Solve the determining equations exactly under a polynomial ansatz.

H of degree 2 in x, Phi linear in A with coefficients of degree 1 and
constant inhomogeneous part.  The solution space should be exactly the
conformal algebra plus the gauge generators reachable at this degree.
"""

from ymlie.catalog import conformal_names, make, in_span
from ymlie.detsys import AnsatzSpec, expected_dimension, solve_ansatz
from ymlie.liealgebra import by_name
from ymlie.yangmills import build_gauge, build_system

spec = AnsatzSpec(2, 1, 0)
for name in ("su2", "su2+su2"):
    sc = by_name(name)
    system = build_system(sc)
    for gauge in (None, build_gauge(sc)):
        sol = solve_ansatz(system, spec, gauge)
        mode = "gauge" if gauge else "free"
        print(f"{name:8} {mode:5} unknowns {sol.unknowns:4}  dimension {sol.dimension:3}"
              f"  (predicted {expected_dimension(sc.n, spec, gauge is not None)})"
              f"  all verified: {sol.verified}")

# The free su2 space contains every conformal generator.
sc = by_name("su2")
basis = solve_ansatz(build_system(sc), spec).basis
print("conformal generators in span:",
      all(in_span(make(n, sc), basis) for n in conformal_names()))
