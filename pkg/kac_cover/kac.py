"""
Kac polynomials via Hua's formula.

a_alpha(q) is the coefficient of x^alpha in (q - 1) * Log P(q, x), where P is
the generating series summed over multipartitions (see ``hua_series``).
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Sequence

import pandas as pd

from kac_cover.errors import InternalError, QuiverInputError
from kac_cover.qseries import (
    QFIELD,
    QRING,
    XSeries,
    as_polynomial,
    cleared_b_at_inverse_q,
    coefficients,
    evaluate,
    hua_pairing,
    keys_up_to,
    partitions_of,
    plethystic_log,
    q,
    q_power_ratio,
    render_polynomial,
)
from kac_cover.quiver import DimVector, Quiver, canonical_form, dim_vector, support_subquiver

logger = logging.getLogger(__name__)

# canonical_form key -> polynomial, least recently used first
MEMO_LIMIT = 4096
_POLYNOMIALS: OrderedDict[tuple, object] = OrderedDict()


def hua_series(quiver: Quiver, bound: Sequence[int]) -> XSeries:
    """Hua's generating series truncated componentwise at ``bound``.

    Each multipartition pi contributes
    prod_{a: i->j} q^<pi_i, pi_j> / prod_i (q^<pi_i, pi_i> b_{pi_i}(q^{-1}))
    to the coefficient of x^{|pi|}.
    """
    bound = dim_vector(quiver, bound)
    choices = [
        [lam for n in range(b + 1) for lam in partitions_of(n)]
        for b in bound
    ]
    terms: dict[tuple, object] = {}
    for multipartition in itertools.product(*choices):
        exponent = sum(hua_pairing(multipartition[s], multipartition[t]) for s, t in quiver.arrow_pairs)
        denominator = QRING.one
        for lam in multipartition:
            cleared, shift = cleared_b_at_inverse_q(lam)
            exponent += shift - hua_pairing(lam, lam)
            denominator *= cleared
        key = tuple(sum(lam) for lam in multipartition)
        terms[key] = terms.get(key, QFIELD.zero) + q_power_ratio(exponent, denominator)
    return XSeries(bound, terms)


def _polynomial_from_log(log_series: XSeries, alpha: Sequence[int]):
    value = log_series.coefficient(alpha) * QFIELD(q - 1)
    poly = as_polynomial(value)
    if poly is None:
        raise InternalError(f"Kac coefficient at {tuple(alpha)} is not a polynomial: {value}")
    if any(c < 0 for c in coefficients(poly)):
        raise InternalError(f"Kac polynomial at {tuple(alpha)} has a negative coefficient: {poly}")
    return poly


def _nonzero(quiver: Quiver, alpha: Sequence[int]) -> DimVector:
    alpha = dim_vector(quiver, alpha)
    if alpha.is_zero():
        raise QuiverInputError("Kac polynomial needs a non-zero dimension vector")
    return alpha


def kac_polynomial(quiver: Quiver, alpha: Sequence[int]):
    """Kac polynomial a_{Q,alpha}(q) as an element of ZZ[q].

    Computed on the full subquiver carrying alpha and memoised on an
    isomorphism-invariant key.
    """
    alpha = _nonzero(quiver, alpha)
    sub, sub_alpha = support_subquiver(quiver, alpha)
    key = canonical_form(sub, sub_alpha)
    poly = _POLYNOMIALS.get(key)
    if poly is not None:
        _POLYNOMIALS.move_to_end(key)
        return poly
    logger.debug("Hua series for %s at %s", sub.describe(), sub_alpha.render())
    poly = _polynomial_from_log(plethystic_log(hua_series(sub, sub_alpha)), sub_alpha)
    _POLYNOMIALS[key] = poly
    while len(_POLYNOMIALS) > MEMO_LIMIT:
        _POLYNOMIALS.popitem(last=False)
    return poly


def kac_polynomials_upto(quiver: Quiver, bound: Sequence[int]) -> dict[tuple, object]:
    """Every a_alpha with 0 < alpha <= bound from a single Hua series."""
    bound = dim_vector(quiver, bound)
    log_series = plethystic_log(hua_series(quiver, bound))
    return {
        key: _polynomial_from_log(log_series, key)
        for key in keys_up_to(bound)
        if any(key)
    }


def kac_at_one(quiver: Quiver, alpha: Sequence[int]) -> int:
    return evaluate(kac_polynomial(quiver, alpha), 1)


def clear_memo() -> None:
    _POLYNOMIALS.clear()


def memo_size() -> int:
    return len(_POLYNOMIALS)


def quiver_hash(quiver: Quiver) -> str:
    return hashlib.sha256(quiver.serialize().encode("utf-8")).hexdigest()


def dim_text(quiver: Quiver, alpha: Sequence[int]) -> str:
    """``vertex=value`` pairs sorted by vertex id, independent of declaration order."""
    pairs = sorted(zip(quiver.vertices, alpha))
    return ",".join(f"{vertex}={value}" for vertex, value in pairs)


@dataclass(frozen=True)
class KacResult:
    quiver_key: str
    dim: DimVector
    polynomial: object
    value_at_one: int

    @classmethod
    def build(cls, quiver: Quiver, alpha: Sequence[int], polynomial) -> "KacResult":
        return cls(quiver_hash(quiver), dim_vector(quiver, alpha), polynomial, evaluate(polynomial, 1))

    @property
    def rendering(self) -> str:
        return render_polynomial(self.polynomial)


def kac_result(quiver: Quiver, alpha: Sequence[int]) -> KacResult:
    return KacResult.build(quiver, alpha, kac_polynomial(quiver, alpha))


def kac_growth_sequence(quiver: Quiver, alpha: Sequence[int], n_max: int) -> pd.DataFrame:
    """a_{n alpha}(1) and ln(a_{n alpha}(1)) / n for n = 1..n_max."""
    alpha = _nonzero(quiver, alpha)
    if n_max < 1:
        raise QuiverInputError(f"n_max must be >= 1, got {n_max}")
    rows = []
    for n in range(1, n_max + 1):
        multiple = DimVector(n * x for x in alpha)
        value = kac_at_one(quiver, multiple)
        rows.append(
            {
                "n": n,
                "dim": multiple.render(),
                "a_at_one": value,
                "log_growth": math.log(value) / n if value > 0 else float("nan"),
            }
        )
    return pd.DataFrame(rows, columns=["n", "dim", "a_at_one", "log_growth"])
