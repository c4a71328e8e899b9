"""
Exact arithmetic for Hua's formula: partitions, polynomials and rational
functions in q, and multivariate power series truncated against a bound.

Polynomials are elements of ``QRING = ZZ[q]`` and rational functions are
elements of ``QFIELD = ZZ(q)``; sympy keeps the latter gcd-reduced with a
canonical denominator, so equal values compare equal.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

from sympy import ZZ, sympify
from sympy.ntheory import factorint
from sympy.polys.fields import field
from sympy.polys.rings import ring
from sympy.utilities.iterables import partitions

from kac_cover.errors import DomainError

QFIELD, _q_frac = field("q", ZZ)
QRING = QFIELD.ring
q = QRING.gens[0]
TRING, t = ring("t", ZZ)

Partition = tuple  # weakly decreasing tuple of positive ints
Key = tuple  # multi-degree, one entry per vertex


# ---------------------------------------------------------------------------
# Partitions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of ``n`` as descending tuples, in lexicographic order."""
    if n < 0:
        raise ValueError(f"cannot partition a negative integer: {n}")
    if n == 0:
        return ((),)
    found = []
    for multiplicities in partitions(n):
        parts = itertools.chain.from_iterable([k] * m for k, m in multiplicities.items())
        found.append(tuple(sorted(parts, reverse=True)))
    return tuple(sorted(found))


def conjugate(partition: Partition) -> Partition:
    if not partition:
        return ()
    return tuple(sum(1 for part in partition if part > k) for k in range(partition[0]))


@lru_cache(maxsize=None)
def hua_pairing(lam: Partition, mu: Partition) -> int:
    """<lam, mu> = sum_k lam'_k mu'_k over conjugate parts."""
    return sum(a * b for a, b in zip(conjugate(lam), conjugate(mu)))


def _multiplicities(partition: Partition) -> list[int]:
    return [len(list(group)) for _, group in itertools.groupby(partition)]


@lru_cache(maxsize=None)
def b_poly(partition: Partition):
    """b_lam(t) = prod_k prod_{j=1}^{m_k} (1 - t^j), an element of ZZ[t]."""
    result = TRING.one
    for multiplicity in _multiplicities(partition):
        for j in range(1, multiplicity + 1):
            result *= 1 - t**j
    return result


@lru_cache(maxsize=None)
def cleared_b_at_inverse_q(partition: Partition) -> tuple:
    """b_lam(q^{-1}) written as ``(P, D)`` with b_lam(q^{-1}) = P(q) / q^D.

    Each factor 1 - q^{-j} becomes (q^j - 1) / q^j.
    """
    numerator = QRING.one
    shift = 0
    for multiplicity in _multiplicities(partition):
        for j in range(1, multiplicity + 1):
            numerator *= q**j - 1
            shift += j
    return numerator, shift


def q_power_ratio(exponent: int, denominator):
    """q^exponent / denominator as a reduced rational function, any sign of exponent."""
    if exponent >= 0:
        return QFIELD.new(q**exponent, denominator)
    return QFIELD.new(QRING.one, denominator * q ** (-exponent))


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


def as_polynomial(value):
    """Return the ZZ[q] polynomial of a rational function with denominator 1, else None."""
    if value.denom == QRING.one:
        return value.numer
    if value.denom == -QRING.one:
        return -value.numer
    return None


def render_polynomial(poly) -> str:
    """Render in descending powers, e.g. ``q^6+q^5+3*q^4+4*q^3+5*q^2+3*q+2``."""
    if not poly:
        return "0"
    pieces = []
    for (exponent,), coefficient in sorted(poly.items(), reverse=True):
        coefficient = int(coefficient)
        sign = "-" if coefficient < 0 else "+"
        magnitude = abs(coefficient)
        if exponent == 0:
            body = str(magnitude)
        else:
            power = "q" if exponent == 1 else f"q^{exponent}"
            body = power if magnitude == 1 else f"{magnitude}*{power}"
        pieces.append(sign + body)
    text = "".join(pieces)
    return text[1:] if text.startswith("+") else text


_POLYNOMIAL_TEXT = re.compile(r"^[0-9q+\-*^ ]+$")


def parse_polynomial(text: str):
    """Inverse of ``render_polynomial``."""
    text = text.strip()
    if not text or not _POLYNOMIAL_TEXT.match(text):
        raise ValueError(f"not a polynomial in q: {text!r}")
    try:
        return QRING.from_expr(sympify(text.replace("^", "**")))
    except Exception as exc:
        raise ValueError(f"not a polynomial in q: {text!r}") from exc


def evaluate(poly, value: int) -> int:
    return int(poly(value)) if poly else 0


def is_monic(poly) -> bool:
    return bool(poly) and poly.LC == 1


def coefficients(poly) -> list[int]:
    """Coefficients in ascending degree order."""
    if not poly:
        return []
    return [int(poly.get((k,), 0)) for k in range(poly.degree() + 1)]


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


def keys_up_to(bound: Sequence[int]) -> list[Key]:
    """All multi-degrees <= bound, ordered by total degree then lexicographically."""
    keys = list(itertools.product(*(range(b + 1) for b in bound)))
    keys.sort(key=lambda k: (sum(k), k))
    return keys


def _fits(key: Key, bound: Key) -> bool:
    return all(k <= b for k, b in zip(key, bound))


class XSeries:
    """Power series in x_1..x_n with ZZ(q) coefficients, truncated at ``bound``."""

    __slots__ = ("bound", "terms")

    def __init__(self, bound: Iterable[int], terms: Optional[Mapping[Key, object]] = None):
        self.bound: Key = tuple(int(b) for b in bound)
        if any(b < 0 for b in self.bound):
            raise ValueError(f"series bound must be non-negative: {self.bound}")
        self.terms: dict[Key, object] = {}
        for key, value in (terms or {}).items():
            key = tuple(key)
            if len(key) != len(self.bound):
                raise ValueError(f"key {key} does not match bound {self.bound}")
            if _fits(key, self.bound):
                value = QFIELD(value)
                if value:
                    self.terms[key] = value

    @classmethod
    def one(cls, bound: Iterable[int]) -> "XSeries":
        bound = tuple(bound)
        return cls(bound, {(0,) * len(bound): QFIELD.one})

    @property
    def zero_key(self) -> Key:
        return (0,) * len(self.bound)

    def coefficient(self, key: Iterable[int]):
        return self.terms.get(tuple(key), QFIELD.zero)

    @property
    def constant_term(self):
        return self.coefficient(self.zero_key)

    def items(self) -> Iterator[tuple[Key, object]]:
        for key in sorted(self.terms):
            yield key, self.terms[key]

    def _check(self, other: "XSeries") -> None:
        if self.bound != other.bound:
            raise ValueError(f"series bounds differ: {self.bound} vs {other.bound}")

    def __add__(self, other: "XSeries") -> "XSeries":
        self._check(other)
        terms = dict(self.terms)
        for key, value in other.terms.items():
            terms[key] = terms.get(key, QFIELD.zero) + value
        return XSeries(self.bound, terms)

    def __sub__(self, other: "XSeries") -> "XSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "XSeries") -> "XSeries":
        self._check(other)
        terms: dict[Key, object] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                key = tuple(a + b for a, b in zip(k1, k2))
                if _fits(key, self.bound):
                    terms[key] = terms.get(key, QFIELD.zero) + v1 * v2
        return XSeries(self.bound, terms)

    def scale(self, factor) -> "XSeries":
        factor = QFIELD(factor)
        return XSeries(self.bound, {k: v * factor for k, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, XSeries):
            return NotImplemented
        return self.bound == other.bound and self.terms == other.terms

    def __repr__(self) -> str:
        shown = ", ".join(f"{k}: {v}" for k, v in self.items())
        return f"XSeries(bound={self.bound}, {{{shown}}})"


def formal_log(series: XSeries) -> XSeries:
    """log S for a series with constant term 1.

    Uses the Euler-operator identity E(S) = S * E(log S), which gives
    |b| L_b = |b| S_b - sum_{0 < c < b} |c| L_c S_{b-c}.
    """
    if series.constant_term != QFIELD.one:
        raise DomainError("formal_log needs a series with constant term 1")
    zero = series.zero_key
    nonconstant = [(k, v) for k, v in series.terms.items() if k != zero]
    log_terms: dict[Key, object] = {}
    for key in keys_up_to(series.bound):
        weight = sum(key)
        if weight == 0:
            continue
        value = series.coefficient(key) * weight
        for delta, s_value in nonconstant:
            if delta == key:
                continue
            gamma = tuple(a - b for a, b in zip(key, delta))
            if min(gamma) < 0:
                continue
            l_value = log_terms.get(gamma)
            if l_value is not None:
                value -= l_value * s_value * sum(gamma)
        value = value / QFIELD(weight)
        if value:
            log_terms[key] = value
    return XSeries(series.bound, log_terms)


def formal_exp(series: XSeries) -> XSeries:
    """exp L for a series with constant term 0; |b| S_b = sum_{0 < c <= b} |c| L_c S_{b-c}."""
    if series.constant_term:
        raise DomainError("formal_exp needs a series with constant term 0")
    zero = series.zero_key
    exp_terms: dict[Key, object] = {zero: QFIELD.one}
    for key in keys_up_to(series.bound):
        weight = sum(key)
        if weight == 0:
            continue
        value = QFIELD.zero
        for gamma, l_value in series.terms.items():
            rest = tuple(a - b for a, b in zip(key, gamma))
            if min(rest) < 0:
                continue
            s_value = exp_terms.get(rest)
            if s_value is not None:
                value += l_value * s_value * sum(gamma)
        value = value / QFIELD(weight)
        if value:
            exp_terms[key] = value
    return XSeries(series.bound, exp_terms)


def _inflate(value, d: int):
    return QFIELD.new(value.numer.inflate((d,)), value.denom.inflate((d,)))


def adams(series: XSeries, d: int) -> XSeries:
    """Substitute q -> q^d and x_i -> x_i^d, truncating at the same bound."""
    if d < 1:
        raise ValueError(f"Adams operation needs d >= 1, got {d}")
    if d == 1:
        return XSeries(series.bound, series.terms)
    terms = {}
    for key, value in series.terms.items():
        scaled = tuple(d * k for k in key)
        if _fits(scaled, series.bound):
            terms[scaled] = _inflate(value, d)
    return XSeries(series.bound, terms)


def mobius(n: int) -> int:
    exponents = factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def _adams_range(series: XSeries) -> range:
    return range(1, max(series.bound, default=0) + 1)


def plethystic_log(series: XSeries) -> XSeries:
    """Log S = sum_d mu(d)/d * adams(log S, d)."""
    log_series = formal_log(series)
    result = XSeries(series.bound)
    for d in _adams_range(series):
        mu = mobius(d)
        if mu:
            result = result + adams(log_series, d).scale(QFIELD(mu) / QFIELD(d))
    return result


def plethystic_exp(series: XSeries) -> XSeries:
    """Exp F = exp(sum_d adams(F, d) / d), the inverse of ``plethystic_log``."""
    if series.constant_term:
        raise DomainError("plethystic_exp needs a series with constant term 0")
    total = XSeries(series.bound)
    for d in _adams_range(series):
        total = total + adams(series, d).scale(QFIELD.one / QFIELD(d))
    return formal_exp(total)
