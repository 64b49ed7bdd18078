"""Check the conformal and gauge generators against the su(2) field equations.

Each generator is prolonged to second order, applied to the field
equations, and reduced with the equations solved for a few second
derivatives.  A symmetry leaves the zero polynomial.
"""

from ymlie.catalog import Gauge, conformal_names, format_name, make
from ymlie.detsys import verify_generator
from ymlie.liealgebra import by_name
from ymlie.yangmills import build_gauge, build_system

sc = by_name("su2")
system = build_system(sc)
gauge = build_gauge(sc)

print(f"{'generator':<16} {'free':>6} {'Lorentz gauge':>14}")
for name in conformal_names() + [Gauge(None)]:
    gen = make(name, sc)
    free = verify_generator(system, gen).ok
    gauged = verify_generator(system, gen, gauge).ok
    print(f"{format_name(name):<16} {str(free):>6} {str(gauged):>14}")

# The accelerations and local gauge transformations drop out in the gauge:
# they do not preserve d_mu A^mu = 0.
