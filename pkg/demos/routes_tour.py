"""Compute the first few Euler-Kronecker constants of a handful of fields
by two independent routes and show how the estimates settle as x grows.

    python demos/routes_tour.py [x_max]
"""
import sys

import numpy as np

from ekron import ek_dirichlet, ek_ihara, lambda_stream
from ekron.number_fields import field_from_cyclotomic, field_from_quadratic, field_rational

x_max = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**6
fields = [field_rational(), field_from_quadratic(-1), field_from_quadratic(5), field_from_cyclotomic(5)]

for K in fields:
    stream = lambda_stream(K, x_max)
    print(f"\n{K.label}  (degree {K.degree}, disc {K.disc})")
    for r in range(4):
        d = ek_dirichlet(K, r, x_max, stream=stream)
        i = ek_ihara(K, r, x_max, stream=stream)
        print(f"  r={r}  dirichlet {d.value:+.6f} +- {d.error_bar:.1e}"
              f"   ihara {i.value:+.6f} +- {i.error_bar:.1e}   gap {abs(d.value - i.value):.1e}")

# how the boundary-corrected partials for Q, r=0 approach Euler's constant
K = fields[0]
xs = np.geomspace(1e3, x_max, 7)
est = ek_dirichlet(K, 0, x_max, checkpoints=xs)
print("\nQ, r=0: fit over", ", ".join(f"{x:.0e}" for x in xs))
print(f"  extrapolated {est.value:.8f}  last partial {est.metadata['last_partial']:.8f}  (Euler 0.57721566)")
