"""Exact weights for one (d, q): the constant A, |W_l|, omega_l and the N/P split."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .partitions import (
    Partition,
    _check_d,
    _check_q,
    ell_factorial,
    multinomial_d,
    multinomial_q,
    poset,
)


class IdentityCheckError(ArithmeticError):
    """An internal exact identity failed; indicates a bug, not bad input."""


@dataclass(frozen=True)
class WeightRow:
    partition: Partition
    W_card: int
    binom_d: int
    omega: Fraction

    @property
    def negative(self) -> bool:
        return self.omega < 0


@dataclass(frozen=True)
class WeightTable:
    d: int
    q: int
    A: Fraction
    rows: tuple[WeightRow, ...]

    @property
    def partitions(self) -> tuple[Partition, ...]:
        return tuple(r.partition for r in self.rows)

    @property
    def omegas(self) -> tuple[Fraction, ...]:
        return tuple(r.omega for r in self.rows)

    @property
    def N(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.rows) if r.omega < 0)

    @property
    def P(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.rows) if r.omega >= 0)

    def sharp_constant(self, digits: int = 12) -> str:
        """Decimal display of A^(1/(2d))."""
        value = math.exp(
            (math.log(self.A.numerator) - math.log(self.A.denominator)) / (2 * self.d)
        )
        return f"{value:.{digits}g}"

    def digest(self) -> str:
        payload = json.dumps(
            {
                "d": self.d,
                "q": self.q,
                "A": fraction_str(self.A),
                "partitions": [list(r.partition) for r in self.rows],
                "omega": [fraction_str(r.omega) for r in self.rows],
            },
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    if not sep:
        raise ValueError(f"expected 'num/den', got {text!r}")
    den_i = int(den)
    if den_i <= 0:
        raise ValueError(f"non-positive denominator in {text!r}")
    return Fraction(int(num), den_i)


def w_cardinality(ell: Partition, q: int) -> int:
    """Number of zeta whose polynomial splits with multiplicity pattern ``ell``."""
    return multinomial_q(ell, q)


def constant_A(d: int, q: int) -> Fraction:
    _check_d(d)
    _check_q(d, q)
    total = 0
    for ell in poset(d).elements:
        c = multinomial_d(ell)
        total += c * c * w_cardinality(ell, q)
    return Fraction(total, q**d)


def omega(ell: Partition, table: WeightTable) -> Fraction:
    c = multinomial_d(ell)
    return (table.A - c) * c * w_cardinality(ell, table.q)


@lru_cache(maxsize=256)
def build_weight_table(d: int, q: int) -> WeightTable:
    """Weight table with both exact identities re-checked before returning."""
    _check_d(d)
    _check_q(d, q)
    elements = poset(d).elements
    binoms = [multinomial_d(ell) for ell in elements]
    cards = [w_cardinality(ell, q) for ell in elements]
    qd = q**d
    if sum(c * w for c, w in zip(binoms, cards)) != qd:
        raise IdentityCheckError(f"sum binom*|W| != q^d at d={d}, q={q}")
    second_moment = sum(c * c * w for c, w in zip(binoms, cards))
    A = Fraction(second_moment, qd)

    rows = []
    for ell, c, w in zip(elements, binoms, cards):
        om = (A - c) * c * w
        # second route: integer numerator over q^d
        if om != Fraction(c * w * (second_moment - c * qd), qd):
            raise IdentityCheckError(f"omega mismatch at {ell}, d={d}, q={q}")
        if (om < 0) != (ell_factorial(ell) * A < math.factorial(d)):
            raise IdentityCheckError(f"sign criterion fails at {ell}, d={d}, q={q}")
        rows.append(WeightRow(ell, w, c, om))
    if sum(r.omega for r in rows) != 0:
        raise IdentityCheckError(f"sum of omega != 0 at d={d}, q={q}")
    return WeightTable(d, q, A, tuple(rows))
