"""Li coefficients and Dedekind-zeta Stieltjes constants assembled from the
computed Euler-Kronecker constants.

    python demos/li_and_stieltjes.py
"""
from ekron import ek_dirichlet, lambda_stream, li_coefficient, stieltjes_dedekind
from ekron.number_fields import field_from_quadratic, field_rational

X = 10**6
for K in (field_rational(), field_from_quadratic(-1), field_from_quadratic(5)):
    stream = lambda_stream(K, X)
    gammas = [ek_dirichlet(K, r, X, stream=stream) for r in range(3)]
    lis = [li_coefficient(K, n, gammas) for n in (1, 2, 3)]
    print(K.label)
    print("  lambda_n:", "  ".join(f"{li.value:.5f}+-{li.error_bar:.0e}" for li in lis))
    if K.degree == 1:
        for n in range(3):
            s = stieltjes_dedekind(K, n, X)
            print(f"  Stieltjes-type coefficient n={n}: {s.value:+.6f} +- {s.error_bar:.1e}")
