"""Exact ring arithmetic, norms, traces, and embeddings."""

from __future__ import annotations

import math

import numpy as np
import pytest

from radixion import algebra
from radixion.algebra import MinimalPolynomial
from radixion.errors import DomainError, UsageError

GAUSS_TWO = MinimalPolynomial((2, 2, 1))  # base -1+i
SHIFTED = MinimalPolynomial((7, -6, 1))  # roots 3 +- sqrt(2)
CUBIC = MinimalPolynomial((2, 0, 0, 1))  # base -2^(1/3)


# ------------------------------------------------------------ construction


def test_construction_rejects_short_and_nonmonic():
    with pytest.raises(DomainError):
        MinimalPolynomial((5,))
    with pytest.raises(DomainError):
        MinimalPolynomial((2, 2, 3))


def test_construction_rejects_small_constant_term():
    with pytest.raises(DomainError):
        MinimalPolynomial((1, 3, 1))


def test_construction_rejects_reducible():
    # x^2 - 3x + 2 = (x - 1)(x - 2)
    with pytest.raises(DomainError):
        MinimalPolynomial((2, -3, 1))


def test_construction_rejects_non_expanding():
    # x^2 - 4x + 2 is irreducible but has the root 2 - sqrt(2) < 1
    with pytest.raises(DomainError):
        MinimalPolynomial((2, -4, 1))


def test_degree_four_warns_and_is_accepted():
    with pytest.warns(UserWarning):
        m = MinimalPolynomial((2, 0, 0, 0, 1))
    assert m.degree == 4 and m.Q == 2


def test_parse_and_str_round_trip():
    m = MinimalPolynomial.parse("2,2,1")
    assert m == GAUSS_TWO
    assert str(m) == "2,2,1"
    with pytest.raises(UsageError):
        MinimalPolynomial.parse("2,x,1")


def test_parse_element_arity_and_format():
    assert algebra.parse_element("-1,0", 2) == (-1, 0)
    assert algebra.parse_element("3", 1) == (3,)
    with pytest.raises(UsageError):
        algebra.parse_element("1,2,3", 2)
    assert algebra.format_element((-1, 0)) == "-1,0"


# -------------------------------------------------------------- arithmetic


def test_mul_reduces_modulo_base_polynomial():
    # q * q = -2 - 2q when q^2 + 2q + 2 = 0
    assert algebra.mul(GAUSS_TWO, (0, 1), (0, 1)) == (-2, -2)


def test_arity_mismatch_is_a_usage_error():
    with pytest.raises(UsageError):
        algebra.add(GAUSS_TWO, (1,), (1, 2))
    with pytest.raises(UsageError):
        algebra.mul(GAUSS_TWO, (1, 2, 3), (1, 0))


def test_ring_axioms_on_random_triples():
    rng = np.random.default_rng(7)
    for _ in range(2000):
        x, y, z = (tuple(int(v) for v in rng.integers(-10, 11, 2)) for _ in range(3))
        assert algebra.add(GAUSS_TWO, x, y) == algebra.add(GAUSS_TWO, y, x)
        assert algebra.add(GAUSS_TWO, algebra.add(GAUSS_TWO, x, y), z) == algebra.add(
            GAUSS_TWO, x, algebra.add(GAUSS_TWO, y, z)
        )
        assert algebra.mul(GAUSS_TWO, x, y) == algebra.mul(GAUSS_TWO, y, x)
        assert algebra.mul(GAUSS_TWO, algebra.mul(GAUSS_TWO, x, y), z) == algebra.mul(
            GAUSS_TWO, x, algebra.mul(GAUSS_TWO, y, z)
        )
        assert algebra.mul(GAUSS_TWO, x, algebra.add(GAUSS_TWO, y, z)) == algebra.add(
            GAUSS_TWO,
            algebra.mul(GAUSS_TWO, x, y),
            algebra.mul(GAUSS_TWO, x, z),
        )
        assert algebra.sub(GAUSS_TWO, x, x) == (0, 0)


def test_mul_matches_complex_embedding_numerically():
    # independent oracle: multiply the complex images instead
    root = complex(-1, 1)
    rng = np.random.default_rng(3)
    for _ in range(200):
        x, y = (tuple(int(v) for v in rng.integers(-8, 9, 2)) for _ in range(2))
        p = algebra.mul(GAUSS_TWO, x, y)
        zx = x[0] + x[1] * root
        zy = y[0] + y[1] * root
        zp = p[0] + p[1] * root
        assert abs(zx * zy - zp) < 1e-9


# ------------------------------------------------------------ norm / trace


def test_norm_examples():
    assert algebra.norm(GAUSS_TWO, (0, 1)) == 2
    assert algebra.norm(GAUSS_TWO, (1, 1)) == 1
    assert algebra.norm(GAUSS_TWO, (2, 1)) == 2


def test_norm_is_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        x, y = (tuple(int(v) for v in rng.integers(-10, 11, 2)) for _ in range(2))
        assert algebra.norm(GAUSS_TWO, algebra.mul(GAUSS_TWO, x, y)) == algebra.norm(
            GAUSS_TWO, x
        ) * algebra.norm(GAUSS_TWO, y)


def test_norm_matches_numpy_determinant():
    rng = np.random.default_rng(5)
    for m in (GAUSS_TWO, CUBIC):
        d = m.degree
        for _ in range(300):
            x = tuple(int(v) for v in rng.integers(-9, 10, d))
            exact = algebra.norm(m, x)
            approx = np.linalg.det(np.array(algebra.mult_matrix(m, x), dtype=float))
            assert abs(exact - approx) < 1e-6 * (1 + abs(approx))


def test_is_unit():
    assert algebra.is_unit(GAUSS_TWO, (1, 1))
    assert not algebra.is_unit(GAUSS_TWO, (0, 1))
    assert not algebra.is_unit(GAUSS_TWO, (0, 0))


def test_power_sums_knuth_prefix():
    assert algebra.power_sums(GAUSS_TWO, 3) == [2, -2, 0, 4]


def test_power_sums_match_embedding_sums():
    for m in (GAUSS_TWO, SHIFTED, CUBIC):
        roots = m.embeddings().roots
        newton = algebra.power_sums(m, 8)
        for k in range(9):
            direct = sum(z**k for z in roots)
            assert abs(newton[k] - direct.real) < 1e-6 * (1 + abs(direct))
            assert abs(direct.imag) < 1e-6 * (1 + abs(direct))


def test_trace_matrix_knuth():
    assert algebra.trace_matrix(GAUSS_TWO) == ((2, -2), (-2, 0))


def test_trace_is_linear():
    rng = np.random.default_rng(13)
    for _ in range(300):
        x, y = (tuple(int(v) for v in rng.integers(-10, 11, 2)) for _ in range(2))
        for k in range(4):
            assert algebra.trace_pow(GAUSS_TWO, algebra.add(GAUSS_TWO, x, y), k) == (
                algebra.trace_pow(GAUSS_TWO, x, k) + algebra.trace_pow(GAUSS_TWO, y, k)
            )
    with pytest.raises(UsageError):
        algebra.trace_pow(GAUSS_TWO, (1, 0), -1)


# ------------------------------------------------------- exact division


def test_divide_exact_by_q_examples():
    assert algebra.divide_exact_by_q(GAUSS_TWO, (2, 0)) == (-2, -1)
    assert algebra.divide_exact_by_q(GAUSS_TWO, (-2, -2)) == (0, 1)
    assert algebra.divide_exact_by_q(GAUSS_TWO, (1, 0)) is None


def test_divide_inverts_multiplication_by_q():
    q = algebra.q_element(GAUSS_TWO)
    for a in range(-3, 4):
        for b in range(-3, 4):
            x = (a, b)
            assert algebra.divide_exact_by_q(GAUSS_TWO, algebra.mul(GAUSS_TWO, q, x)) == x


def test_divide_exact_with_negative_constant_term():
    # base q = 2 from x - 2: halving is division by q
    m = MinimalPolynomial((-2, 1))
    assert algebra.divide_exact_by_q(m, (6,)) == (3,)
    assert algebra.divide_exact_by_q(m, (7,)) is None


# -------------------------------------------------------------- embeddings


def test_embeddings_of_shifted_base():
    roots = SHIFTED.embeddings().roots
    expected = sorted([3 - math.sqrt(2), 3 + math.sqrt(2)])
    assert len(roots) == 2
    for z, w in zip(roots, expected):
        assert abs(z - w) < 1e-9


def test_embeddings_sorted_and_consistent():
    roots = GAUSS_TWO.embeddings().roots
    assert roots == tuple(sorted(roots, key=lambda z: (z.real, z.imag)))
    for z in roots:
        assert abs(z * z + 2 * z + 2) < 1e-9
    prod = 1.0
    for mod in GAUSS_TWO.embeddings().moduli:
        prod *= mod
    assert abs(prod - GAUSS_TWO.Q) < 1e-9


def test_distortion_quadratic_split():
    report = algebra.distortion(SHIFTED)
    assert abs(report.theta_max - 2 * math.log(3 + math.sqrt(2)) / math.log(7)) < 1e-9
    assert abs(report.theta_max + report.theta_min - 2.0) < 1e-12
    assert abs(report.theta_max - 1.526103) < 5e-7


def test_distortion_balanced_base():
    report = algebra.distortion(GAUSS_TWO)
    assert abs(report.theta_max - 1.0) < 1e-12
    assert abs(report.theta_min - 1.0) < 1e-12
