import csv
import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from ekron.arithmetic_stream import (
    MAX_INDEX,
    delta,
    export_stream_csv,
    ideal_count_stream,
    lambda_stream,
    phi,
)
from ekron.number_fields import (
    SplittingDataError,
    field_from_cyclotomic,
    field_from_quadratic,
    field_from_table,
    field_rational,
    load_splitting_table,
)

from oracles import (
    dirichlet_convolve,
    eisenstein_ideal_counts,
    kronecker_table,
    mangoldt_table,
    sum_two_squares_ideal_counts,
)

L2, L3, L5, L7 = (math.log(p) for p in (2, 3, 5, 7))
N_IDENTITY = 10**6


@lru_cache(maxsize=None)
def cached_lambda(K, N):
    return lambda_stream(K, N)


@lru_cache(maxsize=None)
def cached_counts(K, N):
    return ideal_count_stream(K, N)


@pytest.fixture(scope="module")
def lam_q():
    return mangoldt_table(N_IDENTITY)


def dense(stream):
    out = np.zeros(stream.x_max + 1)
    out[stream.n] = stream.values
    return out


def test_rational_examples():
    s = lambda_stream(field_rational(), 100)
    assert s.value_at(8) == pytest.approx(L2)
    assert s.value_at(6) == 0
    assert s.value_at(97) == pytest.approx(math.log(97))


def test_gaussian_examples():
    s = lambda_stream(field_from_quadratic(-1), 100)
    assert s.value_at(5) == pytest.approx(2 * L5)
    assert s.value_at(3) == 0
    assert s.value_at(9) == pytest.approx(2 * L3)
    assert s.value_at(2) == pytest.approx(L2)
    assert s.value_at(4) == pytest.approx(L2)


def test_value_at_outside_range():
    s = lambda_stream(field_rational(), 100)
    with pytest.raises(IndexError):
        s.value_at(101)


@pytest.mark.parametrize("D", [-4, 5, -3])
def test_quadratic_lambda_identity(D, lam_q):
    """Lambda_K(n) = Lambda(n) (1 + chi_D(n)) for every n <= 10^6."""
    K = field_from_quadratic(D if D != -4 else -1)
    assert K.disc == D
    got = dense(lambda_stream(K, N_IDENTITY))
    want = lam_q * (1 + kronecker_table(D, N_IDENTITY))
    assert np.max(np.abs(got - want) / np.maximum(1.0, want)) <= 1e-9


def test_cyclotomic5_lambda_identity(lam_q):
    """Sum over the primitive characters attached to Q(zeta_5)."""
    N = N_IDENTITY
    n = np.arange(N + 1)
    weight = np.where(n % 5 == 1, 4, 0) + np.where(n % 5 == 0, 1, 0)
    got = dense(lambda_stream(field_from_cyclotomic(5), N))
    assert np.max(np.abs(got - lam_q * weight)) <= 1e-9 * 4 * math.log(N)


@pytest.mark.parametrize("K", [field_rational(), field_from_quadratic(-1), field_from_quadratic(5),
                               field_from_cyclotomic(5), field_from_cyclotomic(12)], ids=lambda K: K.label)
def test_lambda_bounded_by_degree(K, lam_q):
    N = 10**5
    s = lambda_stream(K, N)
    assert np.all(s.values >= 0)
    assert np.all(s.values <= K.degree * lam_q[s.n] + 1e-9)
    assert np.all(lam_q[s.n] > 0)  # only prime powers


def test_stream_is_deterministic_across_threads_and_blocks():
    K = field_from_cyclotomic(5)
    a = lambda_stream(K, 300_000)
    b = lambda_stream(K, 300_000, block_size=4096, threads=4)
    assert np.array_equal(a.n, b.n)
    assert a.values.tobytes() == b.values.tobytes()


def test_stream_bounds():
    with pytest.raises(ValueError):
        lambda_stream(field_rational(), 1)
    with pytest.raises(OverflowError):
        lambda_stream(field_rational(), MAX_INDEX)
    with pytest.raises(OverflowError):
        ideal_count_stream(field_rational(), MAX_INDEX)


def test_missing_splitting_data_propagates():
    K = field_from_table(load_splitting_table("# n_K=2, r1=0, r2=1, disc=-4\n2,2,1,1\n3,1,2,1\n"))
    lambda_stream(K, 4)
    with pytest.raises(SplittingDataError, match="insufficient"):
        lambda_stream(K, 10)


def test_custom_field_matches_builtin():
    # Q(i) written out for p < 50 with a split default would be wrong; list every prime instead
    K0 = field_from_quadratic(-1)
    from ekron.number_fields import split_prime
    from sympy import primerange
    rows = [f"{p},{e},{f},{g}" for p in primerange(2, 200) for e, f, g in split_prime(K0, p).factors]
    K = field_from_table(load_splitting_table("# n_K=2, r1=0, r2=1, disc=-4\n" + "\n".join(rows)))
    a, b = lambda_stream(K, 199), lambda_stream(K0, 199)
    assert np.array_equal(a.n, b.n) and np.allclose(a.values, b.values, rtol=0, atol=0)


class TestDelta:
    def test_examples(self):
        s = lambda_stream(field_rational(), 100)
        assert delta(s, 10) == pytest.approx(3 * L2 + 2 * L3 + L5 + L7 - 10, abs=1e-12)
        assert delta(s, 10) == pytest.approx(-2.1680, abs=1e-4)
        assert delta(s, 2) == pytest.approx(L2 - 2)
        assert delta(lambda_stream(field_from_cyclotomic(5), 10), 1.5) == -1.5

    def test_range(self):
        with pytest.raises(ValueError):
            delta(lambda_stream(field_rational(), 100), 101)


class TestPhi:
    def test_examples(self):
        Q = field_rational()
        assert phi(Q, 0, 3).value == pytest.approx(L2 / 4, abs=1e-15)
        assert phi(Q, 0, 3).value == pytest.approx(0.173287, abs=1e-6)
        assert phi(Q, 1, 3).value == pytest.approx(L2**2 / 4, abs=1e-15)
        assert phi(Q, 1, 3).value == pytest.approx(0.120113, abs=1e-6)
        for K in (Q, field_from_quadratic(-1), field_from_cyclotomic(5)):
            v = phi(K, 3, 1.0 + 1e-9)
            assert v.value == 0 and v.term_count == 0

    def test_domain(self):
        with pytest.raises(ValueError):
            phi(field_rational(), 0, 1.0)
        with pytest.raises(ValueError):
            phi(field_rational(), 0, 50, stream=lambda_stream(field_rational(), 20))

    def test_brute_force(self):
        # Q(zeta_5): P above 11 (four of norm 11), the one above 5 (norm 5), 2 inert with f=4 (norm 16)
        K = field_from_cyclotomic(5)
        x, r = 30.0, 2
        terms = [(5, 1, 1, L5), (25, 2, 1, L5), (11, 1, 4, math.log(11)), (16, 1, 1, 4 * L2)]
        want = sum(g * (x / N - 1) * k**r * lp ** (r + 1) for N, k, g, lp in terms) / (x - 1)
        assert phi(K, r, x).value == pytest.approx(want, rel=1e-14)

    def test_rational_log_bound(self):
        Q = field_rational()
        s = lambda_stream(Q, 10**4 + 1)
        for n in range(2, 10**4 + 1):
            assert phi(Q, 0, n + 1, stream=s).value <= math.log(n) + 1e-12

    @settings(max_examples=150, deadline=None)
    @given(st.sampled_from([-1, 5, -3, 2]), st.integers(0, 6), st.floats(1.01, 5e4))
    def test_bound_chain(self, d, r, x):
        K = field_from_quadratic(d)
        s = cached_lambda(K, 50_000)
        v = phi(K, r, x, stream=s).value
        v0 = phi(K, 0, x, stream=s).value
        L = math.log(x)
        assert 0 <= v <= L**r * v0 * (1 + 1e-12) + 1e-300
        assert L**r * v0 <= K.degree * L ** (r + 1) * (1 + 1e-12)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 4), st.floats(1.01, 2e4), st.floats(1e-6, 50.0))
    def test_monotone(self, r, x, h):
        K = field_from_cyclotomic(5)
        s = cached_lambda(K, 20_100)
        assert phi(K, r, x, s).value <= phi(K, r, x + h, s).value * (1 + 1e-13) + 1e-300

    def test_continuous_at_prime_power_norms(self):
        K = field_from_quadratic(-1)
        s = lambda_stream(K, 1000)
        for x0 in (2, 4, 5, 9, 25, 49, 125, 961):
            gaps = [abs(phi(K, 2, x0 + e, s).value - phi(K, 2, x0 - e, s).value) for e in (1e-3, 1e-5, 1e-7)]
            assert gaps[0] > gaps[1] > gaps[2] and gaps[2] < 1e-5


class TestIdealCounts:
    def test_examples(self):
        Q = ideal_count_stream(field_rational(), 1000)
        assert np.all(Q.values == 1)
        s = ideal_count_stream(field_from_quadratic(-1), 100)
        assert [s.value_at(n) for n in (1, 2, 3, 5, 9)] == [1, 1, 0, 2, 1]
        assert ideal_count_stream(field_from_quadratic(5), 100).value_at(4) == 1

    def test_gaussian_lattice_oracle(self):
        N = 20_000
        a = ideal_count_stream(field_from_quadratic(-1), N).values
        assert np.array_equal(a, sum_two_squares_ideal_counts(N)[1:])

    def test_eisenstein_lattice_oracle(self):
        N = 20_000
        a = ideal_count_stream(field_from_quadratic(-3), N).values
        assert np.array_equal(a, eisenstein_ideal_counts(N)[1:])

    def test_cyclotomic5_character_oracle(self):
        N = 5000
        chis = []
        for k in range(4):
            c = np.zeros(5, dtype=complex)
            for e in range(4):
                c[pow(2, e, 5)] = 1j ** (k * e)
            if k == 0:
                c[0] = 1  # the trivial character is primitive of conductor 1
            chis.append(c[np.arange(N + 1) % 5])
        want = dirichlet_convolve(chis, N)
        a = ideal_count_stream(field_from_cyclotomic(5), N).values
        assert np.allclose(a, want[1:].real, atol=1e-6) and np.allclose(want.imag, 0, atol=1e-6)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(1, 300), st.integers(1, 300))
    def test_multiplicative(self, m, n):
        assume(math.gcd(m, n) == 1)
        s = cached_counts(field_from_cyclotomic(12), 90_000)
        assert s.value_at(m * n) == s.value_at(m) * s.value_at(n)

    def test_dirichlet_identity_at_two(self):
        """sum a/n^2 * sum Lambda/n^2 = sum a log n/n^2, up to truncation."""
        K = field_from_quadratic(5)
        N = 10**5
        a = ideal_count_stream(K, N)
        lam = lambda_stream(K, N)
        n = a.n.astype(float)
        lhs = math.fsum(a.values / n**2) * math.fsum(lam.values / lam.n.astype(float) ** 2)
        rhs = math.fsum(a.values * np.log(n) / n**2)
        assert lhs == pytest.approx(rhs, abs=K.degree**2 * 3 * math.log(N) ** 2 / N)

    def test_ideal_count_nonnegative_and_unit(self):
        s = ideal_count_stream(field_from_cyclotomic(8), 10_000)
        assert s.values[0] == 1 and np.all(s.values >= 0)


def test_export_csv(tmp_path):
    s = lambda_stream(field_from_quadratic(-1), 50)
    out = tmp_path / "stream.csv"
    export_stream_csv(s, out)
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "value"]
    assert [int(r[0]) for r in rows[1:]] == s.n.tolist()
    assert [float(r[1]) for r in rows[1:]] == s.values.tolist()
