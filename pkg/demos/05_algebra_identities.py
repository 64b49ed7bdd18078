"""Two identities used along the way, checked exactly.

The divergence of the field equations vanishes on shell, so the 4N
equations carry N differential relations among themselves.  The h_ab
equation is solved by h = -G delta + C chi, and its homogeneous part has
no other solutions.
"""

from ymlie.liealgebra import b1_solution_space, b1_symbolic_residuals, build_abelian, by_name
from ymlie.yangmills import build_system, divergence_identity_check

for name in ("su2", "su2+su2"):
    sc = by_name(name)
    div = divergence_identity_check(build_system(sc))
    b1 = b1_solution_space(sc)
    sym = all(e.is_zero() for e in b1_symbolic_residuals(sc).values())
    print(f"{name:8} divergence ok {div.ok}, routes agree {div.agree};"
          f" nullity {b1.nullity}, antisymmetric {b1.antisymmetric}, symbolic {sym}")

# For an abelian algebra every h solves the homogeneous equation.
print("abelian(2) nullity:", b1_solution_space(build_abelian(2)).nullity)
