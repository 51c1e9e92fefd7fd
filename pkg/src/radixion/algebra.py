"""Exact arithmetic in the order Z[q] of an algebraic integer q.

Elements are integer coordinate vectors over the power basis
1, q, ..., q^{d-1}, where q is a root of a monic integer polynomial
P(x) = c_0 + c_1 x + ... + c_{d-1} x^{d-1} + x^d.  All ring operations
are exact; floating point only enters through the complex embeddings.
"""

from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError, UsageError

# d integer coordinates over the power basis 1, q, ..., q^{d-1}
FieldElement = tuple

RESIDUAL_TOL = 1e-10
PRODUCT_TOL = 1e-9


def _poly_eval(coeffs, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _poly_eval_deriv(coeffs, z: complex) -> complex:
    acc = 0j
    for k in range(len(coeffs) - 1, 0, -1):
        acc = acc * z + k * coeffs[k]
    return acc


@functools.lru_cache(maxsize=None)
def _embedding_roots(coeffs: tuple) -> tuple:
    """Polished, validated, (re, im)-sorted roots of the base polynomial."""
    d = len(coeffs) - 1
    raw = np.roots(coeffs[::-1])  # np.roots wants the leading coefficient first
    polished = []
    for z0 in raw:
        z = complex(z0)
        for _ in range(50):
            dp = _poly_eval_deriv(coeffs, z)
            if dp == 0:
                break
            step = _poly_eval(coeffs, z) / dp
            z -= step
            if abs(step) <= 1e-16 * (1.0 + abs(z)):
                break
        if abs(_poly_eval(coeffs, z)) > RESIDUAL_TOL * (1.0 + abs(z)) ** d:
            raise ConvergenceError(
                "root refinement stalled for %s at %s" % (",".join(map(str, coeffs)), z)
            )
        polished.append(z)
    big_q = abs(coeffs[0])
    product = 1.0
    for z in polished:
        product *= abs(z)
    if abs(product - big_q) > PRODUCT_TOL * big_q:
        raise ConvergenceError(
            "root moduli multiply to %.12g, expected %d" % (product, big_q)
        )
    if any(abs(z) <= 1.0 for z in polished):
        raise DomainError(
            "base is not expanding: some conjugate has modulus <= 1"
        )
    return tuple(sorted(polished, key=lambda z: (z.real, z.imag)))


@dataclass(frozen=True)
class EmbeddingSet:
    """Complex embeddings q -> C, sorted by (real, imaginary) part."""

    roots: tuple

    @property
    def moduli(self) -> tuple:
        return tuple(abs(z) for z in self.roots)


@dataclass(frozen=True)
class Distortion:
    """Extremal logarithmic weights d*ln|q^pi| / ln Q over the embeddings."""

    theta_max: float
    theta_min: float


@dataclass(frozen=True)
class MinimalPolynomial:
    """Monic integer polynomial defining the base q, coefficients c_0..c_d."""

    coeffs: tuple

    def __post_init__(self):
        try:
            coeffs = tuple(int(c) for c in self.coeffs)
        except (TypeError, ValueError):
            raise UsageError("polynomial coefficients must be integers") from None
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise DomainError("polynomial must have degree at least 1")
        if coeffs[-1] != 1:
            raise DomainError("polynomial must be monic")
        if abs(coeffs[0]) < 2:
            raise DomainError("constant term must have absolute value >= 2")
        self._check_irreducible()
        _embedding_roots(coeffs)  # rejects non-expanding bases eagerly

    def _check_irreducible(self):
        d = self.degree
        if d == 1:
            return
        if d > 3:
            warnings.warn(
                "irreducibility is only verified up to degree 3; "
                "degree %d polynomial is accepted unchecked" % d,
                stacklevel=3,
            )
            return
        # degree 2 or 3: reducible over Q iff there is an integer root,
        # and any integer root divides c_0
        c0 = abs(self.coeffs[0])
        for r in range(1, math.isqrt(c0) + 1):
            if c0 % r:
                continue
            for root in {r, -r, c0 // r, -(c0 // r)}:
                acc = 0
                for cf in reversed(self.coeffs):
                    acc = acc * root + cf
                if acc == 0:
                    raise DomainError(
                        "polynomial is reducible: x = %d is a root" % root
                    )

    @classmethod
    def parse(cls, text: str) -> "MinimalPolynomial":
        """Parse the comma-separated encoding "c0,c1,...,cd"."""
        try:
            coeffs = tuple(int(tok) for tok in text.split(","))
        except ValueError:
            raise UsageError("cannot parse polynomial %r" % text) from None
        return cls(coeffs)

    def __str__(self):
        return ",".join(str(c) for c in self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def Q(self) -> int:
        """Absolute norm of the base; the number of residue classes mod q."""
        return abs(self.coeffs[0])

    def embeddings(self) -> EmbeddingSet:
        return EmbeddingSet(_embedding_roots(self.coeffs))


def parse_element(text: str, degree: int) -> FieldElement:
    """Parse the comma-separated encoding "a0,a1,...,a{d-1}"."""
    try:
        coords = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError("cannot parse element %r" % text) from None
    if len(coords) != degree:
        raise UsageError(
            "element %r has %d coordinates, base has degree %d"
            % (text, len(coords), degree)
        )
    return coords


def format_element(x: FieldElement) -> str:
    return ",".join(str(c) for c in x)


def _check_arity(m: MinimalPolynomial, *elements):
    for x in elements:
        if len(x) != m.degree:
            raise UsageError(
                "element has %d coordinates, base has degree %d"
                % (len(x), m.degree)
            )


def add(m: MinimalPolynomial, x: FieldElement, y: FieldElement) -> FieldElement:
    _check_arity(m, x, y)
    return tuple(a + b for a, b in zip(x, y))


def neg(m: MinimalPolynomial, x: FieldElement) -> FieldElement:
    _check_arity(m, x)
    return tuple(-a for a in x)


def sub(m: MinimalPolynomial, x: FieldElement, y: FieldElement) -> FieldElement:
    _check_arity(m, x, y)
    return tuple(a - b for a, b in zip(x, y))


def mul(m: MinimalPolynomial, x: FieldElement, y: FieldElement) -> FieldElement:
    """Product in Z[q], reduced with x^d = -(c_0 + c_1 x + ... + c_{d-1} x^{d-1})."""
    _check_arity(m, x, y)
    d = m.degree
    prod = [0] * (2 * d - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    for k in range(2 * d - 2, d - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(d):
                prod[k - d + j] -= c * m.coeffs[j]
    return tuple(prod[:d])


def mul_by_q(m: MinimalPolynomial, x: FieldElement) -> FieldElement:
    """Shift by one basis power, folding q^d back into the basis."""
    _check_arity(m, x)
    d = m.degree
    top = x[d - 1]
    return tuple((x[k - 1] if k else 0) - m.coeffs[k] * top for k in range(d))


def q_element(m: MinimalPolynomial) -> FieldElement:
    """Coordinates of the base q itself."""
    if m.degree == 1:
        return (-m.coeffs[0],)
    return (0, 1) + (0,) * (m.degree - 2)


def q_power(m: MinimalPolynomial, k: int) -> FieldElement:
    """Coordinates of q^k, k >= 0."""
    x = (1,) + (0,) * (m.degree - 1)
    for _ in range(k):
        x = mul_by_q(m, x)
    return x


def u_element(m: MinimalPolynomial) -> FieldElement:
    """The cofactor u with q*u = c_0, namely -(c_1 + c_2 q + ... + c_d q^{d-1})."""
    return tuple(-c for c in m.coeffs[1:])


def mult_matrix(m: MinimalPolynomial, x: FieldElement) -> tuple:
    """Matrix of multiplication by x over the power basis; column j is x*q^j."""
    _check_arity(m, x)
    d = m.degree
    cols = [tuple(x)]
    for _ in range(1, d):
        cols.append(mul_by_q(m, cols[-1]))
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _det_bareiss(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free elimination)."""
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def norm(m: MinimalPolynomial, x: FieldElement) -> int:
    """Field norm of x, the determinant of multiplication by x."""
    _check_arity(m, x)
    return _det_bareiss(mult_matrix(m, x))


def is_unit(m: MinimalPolynomial, x: FieldElement) -> bool:
    return abs(norm(m, x)) == 1


def power_sums(m: MinimalPolynomial, upto: int) -> list:
    """Traces p_k = Tr(q^k) for k = 0..upto, by Newton's identities."""
    d = m.degree
    a = [m.coeffs[d - i] for i in range(d + 1)]  # a_i = c_{d-i}, a_0 = 1
    p = [d]
    for k in range(1, upto + 1):
        s = -sum(a[i] * p[k - i] for i in range(1, min(k - 1, d) + 1))
        if k <= d:
            s -= k * a[k]
        p.append(s)
    return p


def trace_pow(m: MinimalPolynomial, x: FieldElement, k: int) -> int:
    """Trace of q^k * x."""
    _check_arity(m, x)
    if k < 0:
        raise UsageError("trace power must be nonnegative")
    p = power_sums(m, k + m.degree - 1)
    return sum(x[j] * p[k + j] for j in range(m.degree))


def trace_matrix(m: MinimalPolynomial, size: int | None = None) -> tuple:
    """Symmetric table T[k][j] = Tr(q^{k+j}); defaults to size d."""
    n = m.degree if size is None else size
    p = power_sums(m, 2 * n - 2)
    return tuple(tuple(p[k + j] for j in range(n)) for k in range(n))


def divide_exact_by_q(m: MinimalPolynomial, x: FieldElement):
    """x/q when q divides x in Z[q], else None.

    Uses the cofactor u with q*u = c_0: x/q = (x*u)/c_0, which lies in
    Z[q] exactly when every coordinate of x*u is divisible by c_0.
    """
    _check_arity(m, x)
    w = mul(m, x, u_element(m))
    c0 = m.coeffs[0]
    if any(c % c0 for c in w):
        return None
    return tuple(c // c0 for c in w)


def embeddings(m: MinimalPolynomial) -> EmbeddingSet:
    return m.embeddings()


def distortion(m: MinimalPolynomial) -> Distortion:
    """Spread of the embedding moduli on a logarithmic scale.

    Each embedding pi gets weight d*ln|q^pi| / ln Q; the weights average
    to 1 and collapse to 1 exactly when all conjugates share one modulus.
    """
    d = m.degree
    log_q = math.log(m.Q)
    weights = [d * math.log(abs(z)) / log_q for z in _embedding_roots(m.coeffs)]
    return Distortion(theta_max=max(weights), theta_min=min(weights))
