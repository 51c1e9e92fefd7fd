"""Digit expansions in number systems (q, D).

A number system pairs an expanding base q (given by its minimal
polynomial) with a digit set D of Q = |N(q)| elements forming a
complete residue system modulo q and containing zero.  Every element
of Z[q] then has at most one expansion n = sum_j b_{i_j} q^j with
digits read least significant first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import algebra
from .algebra import FieldElement, MinimalPolynomial, _poly_eval
from .caps import ENUM_CAP, FNS_BOX_CAP, effective_cap
from .errors import CapExceeded, CycleDetected, DomainError, UsageError

FNS_BOX_SLACK = 1.5  # coordinate box inflation over the attractor ball

INF = math.inf


def parse_digits(text: str, degree: int) -> tuple:
    """Parse the semicolon-separated digit-set encoding "b;b;...";"""
    return tuple(algebra.parse_element(tok, degree) for tok in text.split(";"))


def format_digits(digits) -> str:
    return ";".join(algebra.format_element(b) for b in digits)


@dataclass(frozen=True)
class NumberSystem:
    """An expanding base with a digit set; validated on construction."""

    poly: MinimalPolynomial
    digits: tuple

    def __post_init__(self):
        try:
            digits = tuple(tuple(int(c) for c in b) for b in self.digits)
        except (TypeError, ValueError):
            raise UsageError("digits must be integer coordinate vectors") from None
        object.__setattr__(self, "digits", digits)
        validate_system(self)

    @classmethod
    def parse(cls, poly_text: str, digits_text: str) -> "NumberSystem":
        poly = MinimalPolynomial.parse(poly_text)
        return cls(poly, parse_digits(digits_text, poly.degree))

    def encode(self) -> str:
        return "%s|%s" % (self.poly, format_digits(self.digits))

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def Q(self) -> int:
        return self.poly.Q

    @property
    def is_binary(self) -> bool:
        return self.Q == 2

    @cached_property
    def zero(self) -> FieldElement:
        return (0,) * self.degree

    @cached_property
    def digit_is_nonzero(self) -> tuple:
        return tuple(any(b) for b in self.digits)


def validate_system(ns: NumberSystem):
    """Reject digit sets that cannot define a number system."""
    m = ns.poly
    d = m.degree
    for b in ns.digits:
        if len(b) != d:
            raise UsageError(
                "digit %s has %d coordinates, base has degree %d"
                % (algebra.format_element(b), len(b), d)
            )
    m.embeddings()  # re-raises for non-expanding bases
    if len(ns.digits) != m.Q:
        raise DomainError(
            "digit set has %d elements, a complete residue system needs %d"
            % (len(ns.digits), m.Q)
        )
    for i in range(len(ns.digits)):
        for j in range(i + 1, len(ns.digits)):
            diff = algebra.sub(m, ns.digits[i], ns.digits[j])
            if algebra.divide_exact_by_q(m, diff) is not None:
                raise DomainError(
                    "digits %s and %s lie in the same residue class mod q"
                    % (
                        algebra.format_element(ns.digits[i]),
                        algebra.format_element(ns.digits[j]),
                    )
                )
    if (0,) * d not in ns.digits:
        raise DomainError("digit set must contain zero")


@dataclass(frozen=True)
class Expansion:
    """Digit indices of a finite expansion, least significant first."""

    digit_indices: tuple

    def __len__(self):
        return len(self.digit_indices)


@dataclass(frozen=True)
class FnsVerdict:
    is_fns: bool
    witness_cycle: tuple | None
    candidates_examined: int


def _strip_one(ns: NumberSystem, n: FieldElement):
    """One backward division step: the unique digit index t and (n - b_t)/q."""
    m = ns.poly
    for t, b in enumerate(ns.digits):
        quotient = algebra.divide_exact_by_q(m, algebra.sub(m, n, b))
        if quotient is not None:
            return t, quotient
    raise DomainError(
        "no digit matches %s; digit set is not a complete residue system"
        % algebra.format_element(n)
    )


def expand(ns: NumberSystem, x: FieldElement) -> Expansion:
    """Digit expansion of x, or CycleDetected when none terminates."""
    algebra._check_arity(ns.poly, x)
    n = tuple(x)
    seen = {}
    trajectory = []
    indices = []
    while n != ns.zero:
        if n in seen:
            raise CycleDetected(tuple(x), trajectory[seen[n]:])
        seen[n] = len(trajectory)
        trajectory.append(n)
        t, n = _strip_one(ns, n)
        indices.append(t)
    return Expansion(tuple(indices))


def evaluate(ns: NumberSystem, expansion: Expansion) -> FieldElement:
    """Value sum_j b_{i_j} q^j of a digit string, Horner from the top."""
    m = ns.poly
    acc = ns.zero
    for t in reversed(expansion.digit_indices):
        acc = algebra.add(m, algebra.mul_by_q(m, acc), ns.digits[t])
    return acc


def digit_slice(ns: NumberSystem, x: FieldElement, nu: int, mu) -> FieldElement:
    """Value of the digit window [nu, mu) of x, shifted down by q^nu.

    mu may be math.inf, in which case the slice is the whole residual
    element left after stripping nu digits.
    """
    if nu < 0 or mu < nu:
        raise UsageError("digit window needs 0 <= nu <= mu")
    n = tuple(x)
    for _ in range(nu):
        _, n = _strip_one(ns, n)
    if mu == INF:
        return n
    indices = []
    for _ in range(int(mu) - nu):
        t, n = _strip_one(ns, n)
        indices.append(t)
    return evaluate(ns, Expansion(tuple(indices)))


def _search_box(ns: NumberSystem) -> list:
    """Per-coordinate bounds covering the attractor of the backward map."""
    roots = ns.poly.embeddings().roots
    d = ns.degree
    radii = [
        max(abs(_poly_eval(b, z)) for b in ns.digits) / (abs(z) - 1.0)
        for z in roots
    ]
    vandermonde = np.array([[z**k for k in range(d)] for z in roots])
    vinv = np.linalg.inv(vandermonde)
    return [
        int(math.floor(FNS_BOX_SLACK * sum(abs(vinv[k, p]) * radii[p] for p in range(d))))
        for k in range(d)
    ]


def is_fns(ns: NumberSystem) -> FnsVerdict:
    """Decide whether every element of Z[q] has a finite expansion.

    Finiteness only needs checking on the attractor ball of the backward
    division map; a covering coordinate box is enumerated exhaustively
    and each orbit is followed until it reaches zero, a state already
    known to be finite, or repeats (yielding a witness cycle).
    """
    bounds = _search_box(ns)
    total = 1
    for b in bounds:
        total *= 2 * b + 1
    if total > effective_cap(FNS_BOX_CAP):
        raise CapExceeded(
            "finiteness search box holds %d candidates, cap is %d"
            % (total, effective_cap(FNS_BOX_CAP))
        )
    known_finite = {ns.zero}
    examined = 0
    for cand in itertools.product(*[range(-b, b + 1) for b in bounds]):
        examined += 1
        position = {}
        order = []
        n = cand
        while n not in known_finite:
            if n in position:
                cycle = tuple(order[position[n]:])
                return FnsVerdict(False, cycle, examined)
            position[n] = len(order)
            order.append(n)
            _, n = _strip_one(ns, n)
        known_finite.update(order)
    return FnsVerdict(True, None, examined)


def enumerate_N(ns: NumberSystem, lam: int):
    """Stream the Q^lam values with expansions of length <= lam.

    Element i carries digit index (i // Q^j) % Q in position j, so a
    fixed top digit corresponds to one contiguous block of indices.
    Runs in O(lam) memory via delta updates of an odometer.
    """
    if lam < 0:
        raise UsageError("expansion length must be nonnegative")
    total = ns.Q**lam
    if total > effective_cap(ENUM_CAP):
        raise CapExceeded(
            "enumeration of %d elements exceeds cap %d"
            % (total, effective_cap(ENUM_CAP))
        )
    return _enumerate_inner(ns, lam, total)


def _enumerate_inner(ns: NumberSystem, lam: int, total: int):
    m = ns.poly
    d, big_q = ns.degree, ns.Q
    # contrib[j][t] = coordinates of digit t shifted into position j
    contrib = []
    shifted = list(ns.digits)
    for _ in range(lam):
        contrib.append(tuple(shifted))
        shifted = [algebra.mul_by_q(m, b) for b in shifted]
    counters = [0] * lam
    cur = [0] * d
    for j in range(lam):
        for k in range(d):
            cur[k] += contrib[j][0][k]
    yield tuple(cur)
    for _ in range(total - 1):
        j = 0
        while counters[j] == big_q - 1:
            for k in range(d):
                cur[k] += contrib[j][0][k] - contrib[j][big_q - 1][k]
            counters[j] = 0
            j += 1
        for k in range(d):
            cur[k] += contrib[j][counters[j] + 1][k] - contrib[j][counters[j]][k]
        counters[j] += 1
        yield tuple(cur)


def sum_of_digits(ns: NumberSystem, x: FieldElement) -> FieldElement:
    """Sum of the digit values of x as an element of Z[q]."""
    acc = ns.zero
    for t in expand(ns, x).digit_indices:
        acc = algebra.add(ns.poly, acc, ns.digits[t])
    return acc


def rudin_shapiro(ns: NumberSystem, x: FieldElement) -> int:
    """Number of adjacent digit pairs with both digits nonzero."""
    if not ns.is_binary:
        import warnings

        warnings.warn(
            "pair counting is tuned for binary systems; Q = %d" % ns.Q,
            stacklevel=2,
        )
    idx = expand(ns, x).digit_indices
    nonzero = ns.digit_is_nonzero
    return sum(
        1 for a, b in zip(idx, idx[1:]) if nonzero[a] and nonzero[b]
    )
