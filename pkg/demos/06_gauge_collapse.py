"""Why the Lorentz gauge removes accelerations and local gauge freedom.

Applying the prolonged generator to d_mu A^mu and imposing the gauge leaves
2 c_k A^k + C (d chi) A + box chi.  A generator survives only if this
vanishes identically.
"""

from ymlie import symkernel as sk
from ymlie.catalog import Gauge, general_solution, make
from ymlie.detsys import gauge_constraint_residual
from ymlie.liealgebra import by_name
from ymlie.syntax import to_text

sc = by_name("su2")
for a, e in enumerate(gauge_constraint_residual(general_solution(sc))):
    print(f"a={a}: {to_text(e)}")

x = sk.coord
for chi in [(sk.ONE, sk.ZERO, sk.ZERO), (x(1), sk.ZERO, sk.ZERO),
            (x(0) * x(0) - x(1) * x(1), sk.ZERO, sk.ZERO)]:
    res = gauge_constraint_residual(make(Gauge(chi), sc))
    print("chi_0 =", to_text(chi[0]), "->", [to_text(e) for e in res])
