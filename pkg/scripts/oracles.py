"""Reference values for the test suite, computed with mpmath.

gamma_{K,r} is the coefficient of (s-1)^r in zeta_K'/zeta_K at s=1. For
abelian K, zeta_K is zeta times Dirichlet L-functions, so gamma_{K,r} is the
rational value plus the Taylor coefficients of L'/L(s, chi) at s=1. All
expansions come from (generalised) Stieltjes constants, with no numerical
differentiation.

    python scripts/oracles.py
"""
import mpmath as mp
from sympy import jacobi_symbol

mp.mp.dps = 30
ORDER = 4


def log_deriv(c):
    """Coefficients of f'/f at s=1 from the Taylor coefficients c of f."""
    d = [(k + 1) * c[k + 1] for k in range(ORDER)]
    q = []
    for k in range(ORDER):
        q.append((d[k] - sum(q[j] * c[k - j] for j in range(k))) / c[0])
    return q


def rational():
    # (s-1) zeta(s) = 1 + sum_n (-1)^n s_n/n! (s-1)^(n+1)
    c = [mp.mpf(1)] + [(-1) ** n * mp.stieltjes(n) / mp.factorial(n) for n in range(ORDER)]
    return log_deriv(c)


def l_taylor(chi):
    """Taylor coefficients at s=1 of L(s, chi) for a non-principal chi mod q = len(chi)."""
    q = len(chi)
    # regular part of sum_a chi(a) zeta(s, a/q); the poles cancel
    reg = [sum(chi[a] * (-1) ** n * mp.stieltjes(n, mp.mpf(a) / q) for a in range(1, q)) / mp.factorial(n)
           for n in range(ORDER + 1)]
    # q^-s = (1/q) exp(-(s-1) log q)
    e = [(-mp.log(q)) ** k / mp.factorial(k) / q for k in range(ORDER + 1)]
    return [sum(e[k - j] * reg[j] for j in range(k + 1)) for k in range(ORDER + 1)]


def kronecker(D, n):
    """Kronecker symbol (D/n) for a fundamental discriminant D and n >= 1."""
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    two = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
    odd = jacobi_symbol(D % n, n) if n > 1 else 1
    return (two**v if v else 1) * odd


def quadratic(D):
    chi = [kronecker(D, n) if n else 0 for n in range(abs(D))]
    return [a + b for a, b in zip(rational(), log_deriv(l_taylor(chi)))]


def cyclotomic5():
    tot = rational()
    for k in (1, 2, 3):
        chi = [0] * 5
        for e in range(4):
            chi[pow(2, e, 5)] = mp.mpc(0, 1) ** (k * e)
        tot = [a + b for a, b in zip(tot, log_deriv(l_taylor(chi)))]
    return [mp.re(v) for v in tot]


def li_coefficients(D=None, n_max=3):
    """lambda_n = 1/(n-1)! d^n/ds^n [s^(n-1) log xi_K(s)] at s=1, directly from xi_K.

    xi_K(s) = s (s-1) A^s Gamma(s/2)^r1 Gamma(s)^r2 zeta_K(s), A = sqrt|d|/(2^r2 pi^(n/2)).
    """
    if D is None:
        r1, r2, d, L = 1, 0, 1, (lambda s: 1)
    else:
        chi = [kronecker(D, n) if n else 0 for n in range(abs(D))]
        r1, r2, d = (2, 0, D) if D > 0 else (0, 1, -D)
        L = lambda s: mp.dirichlet(s, chi)
    nK = r1 + 2 * r2
    logA = mp.log(d) / 2 - r2 * mp.log(2) - nK / 2 * mp.log(mp.pi)

    def log_xi(s):
        sz = (s - 1) * mp.zeta(s) if s != 1 else mp.mpf(1)
        return (mp.log(s) + s * logA + r1 * mp.loggamma(s / 2) + r2 * mp.loggamma(s)
                + mp.log(sz) + mp.log(L(s)))

    out = []
    for n in range(1, n_max + 1):
        c = mp.taylor(lambda s: s ** (n - 1) * log_xi(s), 1, n)
        out.append(c[n] * mp.factorial(n) / mp.factorial(n - 1))
    return out


def dedekind_stieltjes_quadratic(D, n_max=2):
    """Coefficients of (s-1)^n in zeta_K(s) - L(1, chi)/(s-1) for K of discriminant D."""
    chi = [kronecker(D, n) if n else 0 for n in range(abs(D))]
    l = l_taylor(chi)
    z = [(-1) ** n * mp.stieltjes(n) / mp.factorial(n) for n in range(ORDER + 1)]
    return l[0], [sum(z[j] * l[n - j] for j in range(n + 1)) + l[n + 1] for n in range(n_max + 1)]


if __name__ == "__main__":
    for name, vals in [("Q", rational()), ("Q(i)", quadratic(-4)), ("Q(sqrt5)", quadratic(5)),
                       ("Q(zeta5)", cyclotomic5()), ("stieltjes", [mp.stieltjes(n) for n in range(ORDER)])]:
        print(name, [mp.nstr(v, 17) for v in vals])
    print("lambda_1(Q)", mp.nstr(1 + mp.euler / 2 - mp.log(4 * mp.pi) / 2, 17))
    print("L(1,chi_-4) - pi/4:", mp.nstr(l_taylor([0, 1, 0, -1])[0] - mp.pi / 4, 5))
    for D in (None, -4, 5):
        print("li", D, [mp.nstr(v, 17) for v in li_coefficients(D)])
    res, s = dedekind_stieltjes_quadratic(-4)
    print("Q(i) residue", mp.nstr(res, 17), "stieltjes", [mp.nstr(v, 17) for v in s])
