"""Prime elements, Weyl sums, and empirical Fourier decay over N_lambda.

Exponential sums S = sum e(h * value(n)) are taken over the full
length-bounded set N_lambda or its prime elements; value(n) is either a
linear form in the traces of the digit-sum element or a scalar multiple
of the adjacent-nonzero-pair count.  Decay of |S|/count as lambda grows
is the finite-scale signature of equidistribution modulo 1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import algebra, bulk
from .algebra import MinimalPolynomial
from .errors import CapExceeded, UsageError
from .numeration import NumberSystem, enumerate_N

TWO_PI = 2.0 * math.pi
DEFAULT_GRANULARITY = 64  # contiguous reduction blocks per sum
PRIME_DIVISOR_CAP = 1 << 32
LOG_FLOOR = 1e-300

PRIME_KINDS = ("prime_split", "prime_inert")


# ---------------------------------------------------------------- primes


@dataclass(frozen=True)
class PrimeVerdict:
    kind: str  # zero | unit | prime_split | prime_inert | composite | unsupported_degree
    norm: int


def _is_prime_u64(n: int) -> bool:
    """Deterministic trial division; divisors are capped at 2^32."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    limit = math.isqrt(n)
    if limit > PRIME_DIVISOR_CAP:
        raise CapExceeded("primality test for %d needs divisors beyond 2^32" % n)
    f = 3
    while f <= limit:
        if n % f == 0:
            return False
        f += 2
    return True


def _poly_has_root_mod(coeffs, ell: int) -> bool:
    for r in range(ell):
        acc = 0
        for cf in reversed(coeffs):
            acc = (acc * r + cf) % ell
        if acc == 0:
            return True
    return False


def is_prime_element(ns: NumberSystem, n) -> PrimeVerdict:
    """Classify n as zero, unit, prime, or composite via its norm.

    A prime rational norm always means a prime element; in quadratic
    rings, norm ell^2 with n an associate of the inert rational prime
    ell (both coordinates divisible, no root of the base polynomial
    mod ell) is the remaining prime case.
    """
    m = ns.poly
    nm = algebra.norm(m, tuple(n))
    size = abs(nm)
    if size == 0:
        return PrimeVerdict("zero", nm)
    if size == 1:
        return PrimeVerdict("unit", nm)
    if _is_prime_u64(size):
        return PrimeVerdict("prime_split", nm)
    if m.degree == 2:
        ell = math.isqrt(size)
        if (
            ell * ell == size
            and _is_prime_u64(ell)
            and all(c % ell == 0 for c in n)
            and not _poly_has_root_mod(m.coeffs, ell)
        ):
            return PrimeVerdict("prime_inert", nm)
        return PrimeVerdict("composite", nm)
    if m.degree == 1:
        return PrimeVerdict("composite", nm)
    return PrimeVerdict("unsupported_degree", nm)


def enumerate_primes(ns: NumberSystem, lam: int):
    """Stream the prime elements of N_lambda in enumeration order."""
    if ns.degree > 2:
        raise UsageError("prime enumeration supports degree <= 2 only")
    stream = enumerate_N(ns, lam)
    return (v for v in stream if is_prime_element(ns, v).kind in PRIME_KINDS)


def _prime_sieve(n: int) -> np.ndarray:
    sieve = np.ones(n + 1, dtype=bool)
    sieve[: min(2, n + 1)] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return sieve


def prime_mask(ns: NumberSystem, coords) -> np.ndarray:
    """Vectorized prime verdicts (split or inert) for rows of coordinates."""
    m = ns.poly
    if m.degree > 2:
        raise UsageError("prime enumeration supports degree <= 2 only")
    c = m.coeffs
    coords = np.asarray(coords, dtype=np.int64)
    a = coords[:, 0]
    if m.degree == 1:
        absnorm = np.abs(a)
    else:
        b = coords[:, 1]
        absnorm = np.abs(a * a - c[1] * a * b + c[0] * b * b)
    sieve = _prime_sieve(int(absnorm.max(initial=2)))
    mask = sieve[absnorm]
    if m.degree == 2:
        root = np.rint(np.sqrt(absnorm.astype(np.float64))).astype(np.int64)
        inert = (root * root == absnorm) & (root >= 2)
        if inert.any():
            safe = np.where(inert, root, 1)
            inert &= sieve[np.where(inert, root, 0)]
            inert &= (a % safe == 0) & (b % safe == 0)
            for ell in np.unique(root[inert]):
                if _poly_has_root_mod(c, int(ell)):
                    inert &= root != ell
            mask |= inert
    return mask


# ------------------------------------------------------------ linear forms


@dataclass(frozen=True)
class LinearForm:
    """Coefficients t_0..t_{d-1} of phi(x) = sum_k t_k Tr(q^k x).

    Rational-tagged coefficients are kept exactly; floating inputs can
    never witness irrationality, so the tag is part of the input.
    """

    values: tuple  # float value per coefficient
    rationals: tuple  # Fraction for rational-tagged, None for irrational

    @classmethod
    def parse(cls, text: str) -> "LinearForm":
        """Comma-separated coefficients: "p/q" and bare integers are
        rational-tagged; decimal or exponent literals are irrational."""
        values, rationals = [], []
        for tok in text.split(","):
            tok = tok.strip()
            try:
                if "." in tok or "e" in tok.lower():
                    values.append(float(tok))
                    rationals.append(None)
                else:
                    frac = Fraction(tok)
                    values.append(float(frac))
                    rationals.append(frac)
            except (ValueError, ZeroDivisionError):
                raise UsageError("cannot parse linear form coefficient %r" % tok) from None
        return cls(tuple(values), tuple(rationals))


def phase_weights(form: LinearForm, m: MinimalPolynomial) -> np.ndarray:
    """Coordinate weights w with phi(x) = <w, x>, via w_j = sum_k t_k Tr(q^{k+j})."""
    d = m.degree
    if len(form.values) != d:
        raise UsageError("linear form needs %d coefficients, got %d" % (d, len(form.values)))
    p = algebra.power_sums(m, 2 * d - 2)
    return np.array(
        [sum(form.values[k] * p[k + j] for k in range(d)) for j in range(d)]
    )


def phi_is_irrational(form: LinearForm, m: MinimalPolynomial, x) -> bool:
    """Symbolic tag rule: an irrational coefficient meets a nonzero trace."""
    return any(
        form.rationals[k] is None and algebra.trace_pow(m, x, k) != 0
        for k in range(len(form.values))
    )


def phi_exact(form: LinearForm, m: MinimalPolynomial, x):
    """Exact Fraction value of phi(x), or None when an irrational term contributes."""
    if phi_is_irrational(form, m, x):
        return None
    return sum(
        (form.rationals[k] * algebra.trace_pow(m, x, k) for k in range(len(form.values)) if form.rationals[k] is not None),
        Fraction(0),
    )


def phi_float(form: LinearForm, m: MinimalPolynomial, x) -> float:
    return float(
        sum(form.values[k] * algebra.trace_pow(m, x, k) for k in range(len(form.values)))
    )


def equidist_condition(ns: NumberSystem, form: LinearForm) -> bool:
    """True iff some digit b makes phi(b) irrational (by the tag rule)."""
    return any(phi_is_irrational(form, ns.poly, b) for b in ns.digits)


# ------------------------------------------------- sum-of-digits constants


@dataclass(frozen=True)
class SumDigitConstants:
    mu_q: int
    big_m_q: int
    digit_trace_norms: tuple  # per digit: ||phi(mu_q b)||^2 mod 1
    digit_norm_sum: float
    decay_factor: float  # digit_norm_sum / (M_q (d+1)); true constant is this times delta_Q
    scale_note: str


def sumdigit_fourier_constants(ns: NumberSystem, form: LinearForm) -> SumDigitConstants:
    m = ns.poly
    mu_q = sum(m.coeffs)
    big_m_q = sum(cf * cf for cf in m.coeffs)
    norms = []
    for b in ns.digits:
        scaled = tuple(mu_q * t for t in b)
        exact = phi_exact(form, m, scaled)
        if exact is not None:
            fracpart = exact - math.floor(exact)
            dist = float(min(fracpart, 1 - fracpart))
        else:
            v = phi_float(form, m, scaled)
            dist = abs(v - round(v))
        norms.append(dist * dist)
    total = float(sum(norms))
    return SumDigitConstants(
        mu_q,
        big_m_q,
        tuple(norms),
        total,
        total / (big_m_q * (m.degree + 1)),
        "up to delta_Q",
    )


# -------------------------------------------------------------- Weyl sums


@dataclass(frozen=True)
class WeylRow:
    lam: int
    h: int
    filter: str
    count: int
    re_sum: float
    im_sum: float
    normalized: float


def _integer_digit_values(ns: NumberSystem):
    if any(any(b[1:]) for b in ns.digits):
        raise UsageError(
            "a scalar coefficient on digit sums needs digits in Z; pass a linear form"
        )
    return [b[0] for b in ns.digits]


def _phase_values(ns: NumberSystem, fn: str, phase, table: bulk.DigitTable) -> np.ndarray:
    """Real phase value per table row; e(h * value) is the summand."""
    if fn == "rs":
        if isinstance(phase, LinearForm):
            raise UsageError("pair counting takes a scalar coefficient, not a form")
        return float(phase) * table.r.astype(np.float64)
    if fn == "sod":
        if isinstance(phase, LinearForm):
            w = phase_weights(phase, ns.poly)
            return table.s_coords.astype(np.float64) @ w
        _integer_digit_values(ns)
        return float(phase) * table.s_coords[:, 0].astype(np.float64)
    raise UsageError("fn must be 'sod' or 'rs'")


def weyl_sum(
    ns: NumberSystem,
    fn: str,
    phase,
    h: int,
    lam: int,
    filter: str = "all",
    threads: int = 1,
    granularity: int = DEFAULT_GRANULARITY,
    table: bulk.DigitTable | None = None,
) -> WeylRow:
    """S = sum of e(h * value) over N_lambda or its primes.

    The sum is reduced over `granularity` contiguous row blocks merged
    in ascending order, so results are bit-identical for any thread
    count at fixed granularity.
    """
    if filter not in ("all", "primes"):
        raise UsageError("filter must be 'all' or 'primes'")
    if table is None or table.lam != lam:
        table = bulk.digit_table(ns, lam)
    values = _phase_values(ns, fn, phase, table)
    mask = prime_mask(ns, table.coords) if filter == "primes" else None
    phases = np.exp((TWO_PI * h) * 1j * values)
    count = len(values) if mask is None else int(mask.sum())
    blocks = np.array_split(np.arange(len(values)), min(granularity, len(values)))

    def block_sum(idx):
        z = phases[idx] if mask is None else phases[idx][mask[idx]]
        return complex(z.sum())

    partials = bulk.ordered_map(block_sum, blocks, threads)
    total = 0j
    for part in partials:  # ascending block order
        total += part
    normalized = abs(total) / count if count else 0.0
    return WeylRow(
        lam, h, filter, count, float(total.real), float(total.imag), float(normalized)
    )


def sod_factorization_reference(ns: NumberSystem, alpha: float, h: int, lam: int) -> complex:
    """(sum_b e(h alpha b))^lam, the exact value of the full digit-sum Weyl sum."""
    base = sum(cmath.exp((TWO_PI * h * alpha * v) * 1j) for v in _integer_digit_values(ns))
    return base**lam


# ----------------------------------------------------------- Fourier decay


@dataclass(frozen=True)
class FourierDecayRow:
    lam: int
    samples: int
    max_logq: float
    gamma_emp: float


@dataclass(frozen=True)
class FourierDecayReport:
    fn: str
    lam_max: int
    t_samples: int
    seed: int
    kappa: int
    mu_q: int
    big_m_q: int
    digit_norm_sum: float | None
    rs_bound_slope: float | None
    rows: tuple


def rs_bound_slope(alpha: float) -> float:
    """Per-lambda decay slope (lambda/2) log2(2/(1+|cos pi alpha|)) / lambda."""
    return 0.5 * math.log2(2.0 / (1.0 + abs(math.cos(math.pi * alpha))))


def fourier_decay(
    ns: NumberSystem,
    fn: str,
    phase,
    lam_max: int,
    t_samples: int,
    seed: int,
    threads: int = 1,
) -> FourierDecayReport:
    """Empirical decay of sup_t |S(t)| with S(t) = sum f(v) e(<t, v>).

    t is sampled uniformly in [0,1)^d (t = 0 is always forced in) and
    paired with v through the trace form; f twists by the chosen digit
    function.  Reported gamma_emp = lambda - max_t log_Q|S(t)| is a
    lower bound for the true decay exponent, so only bounds of the form
    "every sample stays below ..." are sound to check against it.
    """
    if lam_max < 1:
        raise UsageError("lam_max must be at least 1")
    if t_samples < 0:
        raise UsageError("t_samples must be nonnegative")
    d = ns.degree
    rng = np.random.default_rng(seed)
    t_rows = np.concatenate([np.zeros((1, d)), rng.random((t_samples, d))], axis=0)
    trace = np.array(algebra.trace_matrix(ns.poly), dtype=np.float64)
    weights = t_rows @ trace  # row-wise coordinate weights <t, v> = <w, coords(v)>
    log_q = math.log(ns.Q)
    rows = []
    for lam in range(1, lam_max + 1):
        table = bulk.digit_table(ns, lam)
        values = _phase_values(ns, fn, phase, table)
        coords = table.coords.astype(np.float64)
        starts = range(0, len(weights), 32)

        def block_max(start, coords=coords, values=values):
            wblk = weights[start : start + 32]
            ang = coords @ wblk.T
            ang += values[:, None]
            return float(np.abs(np.exp(TWO_PI * 1j * ang).sum(axis=0)).max())

        best = max(bulk.ordered_map(block_max, starts, threads))
        max_logq = math.log(max(best, LOG_FLOOR)) / log_q
        rows.append(FourierDecayRow(lam, len(t_rows), max_logq, lam - max_logq))
    mu_q = sum(ns.poly.coeffs)
    big_m_q = sum(cf * cf for cf in ns.poly.coeffs)
    digit_norm_sum = None
    slope = None
    if fn == "sod":
        if isinstance(phase, LinearForm):
            digit_norm_sum = sumdigit_fourier_constants(ns, phase).digit_norm_sum
        else:
            ints = _integer_digit_values(ns)
            digit_norm_sum = 0.0
            for v in ints:
                x = float(phase) * mu_q * v
                digit_norm_sum += (x - round(x)) ** 2
    elif fn == "rs" and not isinstance(phase, LinearForm):
        slope = rs_bound_slope(float(phase))
    return FourierDecayReport(
        fn,
        lam_max,
        t_samples,
        seed,
        0,
        mu_q,
        big_m_q,
        digit_norm_sum,
        slope,
        tuple(rows),
    )
