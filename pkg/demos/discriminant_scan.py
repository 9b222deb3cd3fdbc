"""Scan imaginary quadratic fields and compare gamma_{K,1} with the size of
the explicit bounds. Same as ``ekron scan --quad-range=-200..-3 --r 1``.

    python demos/discriminant_scan.py
"""
from ekron import ek_dirichlet, grh_bound
from ekron.number_fields import field_from_fundamental_discriminant, is_fundamental_discriminant

rows = []
for D in range(-200, -2):
    if not is_fundamental_discriminant(D):
        continue
    K = field_from_fundamental_discriminant(D)
    est = ek_dirichlet(K, 1, 2 * 10**5)
    rep = grh_bound(K, 1, est)
    rows.append((D, est.value, rep.grh_main_term, rep.ratio))

print(f"{'D':>5} {'gamma_K,1':>11} {'GRH main':>10} {'|g|/(4log|d|)^3':>16}")
for D, g, main, ratio in rows:
    print(f"{D:>5} {g:>+11.5f} {main:>10.3f} {ratio:>16.2e}")
worst = max(rows, key=lambda row: abs(row[1] / row[2]))
print(f"\nlargest |gamma/main term|: D={worst[0]}  {abs(worst[1] / worst[2]):.3f}")
