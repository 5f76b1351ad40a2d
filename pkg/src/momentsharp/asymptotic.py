"""Large-q regime: the closed-form threshold in q and the |N| <= 3 criterion."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv

from .partitions import _check_d, _check_q, poset
from .weights import build_weight_table, w_cardinality

_DPS = 40


@dataclass(frozen=True)
class ThresholdReport:
    d: int
    threshold: float
    ceiling: int

    @property
    def q_search_max(self) -> int:
        """Largest q that still needs an explicit Hall check."""
        return self.ceiling - 1

    @property
    def search_range(self) -> range:
        return range(self.d + 1, self.q_search_max + 1)


def _threshold_interval(d: int):
    iv.dps = _DPS
    return iv.mpf(d * (d - 1)) / (2 * iv.log(6)) + iv.mpf(2 * d - 1) / 3


def threshold(d: int) -> ThresholdReport:
    """q >= d(d-1)/(2 log 6) + (2d-1)/3, with the ceiling taken from an upper interval bound."""
    _check_d(d)
    box = _threshold_interval(d)
    upper = mpmath.mpf(box.b)
    return ThresholdReport(d, float(upper), int(mpmath.ceil(upper)))


def small_N_partitions(d: int) -> list[tuple[int, ...]]:
    """(1,...,1), (2,1,...,1,0), (2,2,1,...,1,0,0), whichever exist for d."""
    out = [(1,) * d, (2,) + (1,) * (d - 2) + (0,)]
    if d >= 4:
        out.append((2, 2) + (1,) * (d - 4) + (0, 0))
    return out


def small_N_condition(d: int, q: int) -> bool:
    """True iff d!/A <= 6, decided exactly.

    When it holds, N is checked to sit inside :func:`small_N_partitions` and
    below every member of P.
    """
    _check_d(d)
    _check_q(d, q)
    table = build_weight_table(d, q)
    if Fraction(math.factorial(d)) / table.A > 6:
        return False
    allowed = set(small_N_partitions(d))
    pos = poset(d)
    for n in table.N:
        if table.rows[n].partition not in allowed:
            raise AssertionError(f"unexpected member of N: {table.rows[n].partition}")
        for p in table.P:
            if not pos.leq(n, p):
                raise AssertionError(f"N element {n} not below P element {p}")
    return True


def large_q_chain(d: int, q: int) -> dict[str, bool]:
    """Evaluate each implication used to derive the threshold at one (d, q).

    Integer links are exact; the logarithmic ones use 40-digit arithmetic.
    """
    _check_d(d)
    rep = threshold(d)
    if q < max(2 * d, rep.ceiling):
        raise ValueError(
            f"need q >= max(2d, ceil(threshold)) = {max(2 * d, rep.ceiling)}, got q={q}"
        )
    table = build_weight_table(d, q)
    second_moment = sum(r.binom_d**2 * r.W_card for r in table.rows)
    fact = math.factorial(d)
    falling = math.perm(q, d)

    mpmath.mp.dps = _DPS
    log6 = mpmath.log(6)
    xs = [mpmath.mpf(j) / q for j in range(1, d)]
    neg_log = -mpmath.fsum(mpmath.log1p(-x) for x in xs)
    lin = mpmath.mpf(d * (d - 1)) / (2 * q)
    quad = mpmath.mpf((d - 1) * d * (2 * d - 1)) / (6 * q * q)
    root = (
        3 * d * (d - 1) * (1 + mpmath.sqrt(1 + (8 * log6 / 3) * mpmath.mpf(2 * d - 1) / (d * (d - 1))))
        / (12 * log6)
    )
    return {
        # d!/6 q^d <= sum binom^2 |W|
        "small_N_sum": fact * q**d <= 6 * second_moment,
        # keep only l = (1,...,1): (d!)^2 |W| = d! q(q-1)...(q-d+1)
        "single_term": fact * fact * w_cardinality((1,) * d, q) == fact * falling
        and q**d <= 6 * falling,
        "log_form": log6 >= neg_log,
        "x_plus_x2": all(x + x * x >= -mpmath.log1p(-x) for x in xs),
        "sum_bound": log6 >= lin + quad,
        "quadratic": 6 * log6 * q * q - 3 * d * (d - 1) * q - (d - 1) * d * (2 * d - 1) >= 0,
        "root_bound": q >= root,
    }


def large_q_chain_check(d: int, q: int) -> bool:
    return all(large_q_chain(d, q).values())
