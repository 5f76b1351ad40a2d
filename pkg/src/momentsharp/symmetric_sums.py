"""Normalized symmetric sums, Muirhead comparisons and the weighted master inequality."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .hall_matching import MatchingCertificate
from .partitions import Partition, dominance_leq, rho
from .weights import WeightTable, w_cardinality

CASE_I, CASE_II, CASE_III, CASE_IV, STRICT = "i", "ii", "iii", "iv", "strict"


def _as_fractions(x: Sequence) -> list[Fraction]:
    out = [Fraction(v) for v in x]
    if any(v < 0 for v in out):
        raise ValueError("variables must be non-negative")
    return out


def _monomial_sum(exponents: Sequence[int], x: Sequence[int]) -> int:
    """Monomial symmetric polynomial m_lambda(x) over integer x.

    Dynamic programme over the variables with the multiset of still-unplaced
    exponents as state.
    """
    exps = sorted(Counter(e for e in exponents if e > 0).items())
    values = [e for e, _ in exps]
    start = tuple(c for _, c in exps)
    states: dict[tuple[int, ...], int] = {start: 1}
    for xi in x:
        powers = [xi**e for e in values]
        nxt: dict[tuple[int, ...], int] = dict(states)
        for state, acc in states.items():
            if not acc:
                continue
            for j, c in enumerate(state):
                if c:
                    key = state[:j] + (c - 1,) + state[j + 1 :]
                    nxt[key] = nxt.get(key, 0) + acc * powers[j]
        states = nxt
    return states.get(tuple(0 for _ in start), 0)


def sigma_ell(ell: Partition, x: Sequence) -> Fraction:
    """Sum over all of S_q of x_tau(1)^l_1 ... x_tau(d)^l_d, without enumerating S_q.

    Equals (q - rho)! * prod_j b_j! * m_l(x); evaluated on the integer vector
    obtained by clearing denominators, then rescaled (the sum is homogeneous
    of degree d).
    """
    xs = _as_fractions(x)
    q, d = len(xs), len(ell)
    if q < d:
        raise ValueError(f"need at least d={d} variables, got {q}")
    scale = 1
    for v in xs:
        scale = math.lcm(scale, v.denominator)
    ints = [int(v * scale) for v in xs]
    mult = math.factorial(q - rho(ell))
    for c in Counter(e for e in ell if e > 0).values():
        mult *= math.factorial(c)
    return Fraction(mult * _monomial_sum(ell, ints), scale**d)


def muirhead_equality_classify(a: Partition, b: Partition, x: Sequence) -> str:
    """Which equality case of Muirhead's inequality applies, or ``"strict"``."""
    if not dominance_leq(a, b):
        raise ValueError(f"{a} is not dominated by {b}")
    xs = _as_fractions(x)
    q = len(xs)
    if tuple(a) == tuple(b):
        return CASE_I
    if all(v == xs[0] for v in xs):
        return CASE_II
    zeros = sum(1 for v in xs if v == 0)
    if zeros >= q - rho(b) + 1:
        return CASE_III
    positive = {v for v in xs if v > 0}
    if rho(a) == rho(b) and zeros <= q - rho(b) and len(positive) == 1:
        return CASE_IV
    return STRICT


def muirhead_compare(a: Partition, b: Partition, x: Sequence) -> tuple[Fraction, Fraction, bool]:
    if not dominance_leq(a, b):
        raise ValueError(f"{a} is not dominated by {b}")
    sa, sb = sigma_ell(a, x), sigma_ell(b, x)
    if sa > sb:
        raise ArithmeticError(f"Muirhead violated: {a} vs {b} at {list(x)}")
    return sa, sb, sa == sb


@dataclass(frozen=True)
class MasterReport:
    lhs: Fraction
    rhs: Fraction
    # per certificate edge: tau * (Sigma_p - Sigma_n)
    link_slack: tuple[tuple[int, int, Fraction], ...]
    holds: bool

    @property
    def equality(self) -> bool:
        return self.lhs == self.rhs


def master_inequality(table: WeightTable, cert: MatchingCertificate, x: Sequence) -> MasterReport:
    """Evaluate both weighted sides and every link of the tau-weighted chain."""
    if (cert.d, cert.q) != (table.d, table.q):
        raise ValueError("certificate and table disagree on (d, q)")
    if len(x) != table.q:
        raise ValueError(f"expected {table.q} variables, got {len(x)}")
    sig = [sigma_ell(r.partition, x) for r in table.rows]
    om = table.omegas
    lhs = sum((-om[n] * sig[n] for n in table.N), Fraction(0))
    rhs = sum((om[p] * sig[p] for p in table.P), Fraction(0))
    left_chain = sum((t * sig[n] for n, _, t in cert.tau), Fraction(0))
    right_chain = sum((t * sig[p] for _, p, t in cert.tau), Fraction(0))
    slack = tuple((n, p, t * (sig[p] - sig[n])) for n, p, t in cert.tau)
    ok = (
        lhs == left_chain
        and right_chain == rhs
        and all(s >= 0 for _, _, s in slack)
        and lhs <= rhs
    )
    return MasterReport(lhs, rhs, slack, ok)


def verify_master_inequality(table: WeightTable, cert: MatchingCertificate, x: Sequence) -> bool:
    return master_inequality(table, cert, x).holds


def w_restricted_sum_identity(
    ell: Partition, x: Sequence, roots_by_partition: Mapping[Partition, Sequence[Sequence[int]]]
) -> bool:
    """Check sum over W_l of |pi_zeta(f)|^2 == |W_l| / q! * Sigma_l exactly.

    ``roots_by_partition[ell]`` lists, for every zeta in W_l, one solution
    (t_1, ..., t_d) of the power-sum system; ``x[t] = |f(gamma(t))|^2``.
    """
    xs = _as_fractions(x)
    q = len(xs)
    reps = roots_by_partition[tuple(ell)]
    lhs = Fraction(0)
    for ts in reps:
        term = Fraction(1)
        for t in ts:
            term *= xs[t]
        lhs += term
    if len(reps) != w_cardinality(tuple(ell), q):
        return False
    rhs = Fraction(w_cardinality(tuple(ell), q), math.factorial(q)) * sigma_ell(ell, xs)
    return lhs == rhs
