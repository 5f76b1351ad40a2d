"""Brute-force ground truth over a prime field F_p with p > d.

Everything here is enumeration: solution counts of the power-sum system,
splitting patterns of P_zeta, the d-fold self-convolution of the curve, and a
direct character-sum evaluation of the extension operator.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .partitions import Partition, as_partition, multinomial_d, poset
from .weights import constant_A, w_cardinality

CENSUS_BUDGET = 10**7
TRANSFORM_BUDGET = 10**8


class BudgetExceeded(ValueError):
    def __init__(self, what: str, required: int, limit: int):
        super().__init__(f"{what} needs {required} evaluations, limit is {limit}")
        self.required = required
        self.limit = limit


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        return pow(a, -1, self.p)

    def curve_point(self, t: int, d: int) -> tuple[int, ...]:
        """gamma(t) = (t, t^2, ..., t^d)."""
        return tuple(pow(t, k, self.p) for k in range(1, d + 1))


def _check_dp(d: int, p: int) -> PrimeField:
    field_ = PrimeField(p)
    if d < 2:
        raise ValueError("d must be >= 2")
    if p <= d:
        raise ValueError(f"need p > d, got p={p}, d={d}")
    return field_


def _census_guard(d: int, p: int) -> None:
    if p**d > CENSUS_BUDGET:
        raise BudgetExceeded("census", p**d, CENSUS_BUDGET)


# -- solution counts ---------------------------------------------------------

@lru_cache(maxsize=16)
def _census(d: int, p: int) -> np.ndarray:
    out = kernels.power_sum_census(d, p)
    out.setflags(write=False)
    return out


def solution_count(zeta: Sequence[int], d: int, p: int) -> int:
    """Number of (t_1..t_d) in F_p^d with sum_i t_i^k = zeta_k for k = 1..d."""
    _check_dp(d, p)
    _census_guard(d, p)
    if len(zeta) != d:
        raise ValueError(f"zeta must have {d} coordinates")
    code = int(kernels.encode_points(np.asarray(zeta, dtype=np.int64) % p, p))
    return int(_census(d, p)[code])


def convolution_counts(d: int, p: int) -> np.ndarray:
    """sigma^{*d} on F_p^d as counts, via FFT of the curve indicator over Z_p^d.

    Returned flat in :func:`kernels.encode_points` order.
    """
    _check_dp(d, p)
    _census_guard(d, p)
    ind = np.zeros((p,) * d)
    for t in range(p):
        pt = tuple(pow(t, k, p) for k in range(1, d + 1))
        ind[pt[::-1]] = 1.0  # reversed so C-order flattening matches encode_points
    spectrum = np.fft.fftn(ind) ** d
    counts = np.rint(np.fft.ifftn(spectrum).real).astype(np.int64)
    return counts.ravel()


# -- Newton identities and splitting ----------------------------------------

def elementary_from_power_sums(psums: Sequence[int], p: int) -> list[int]:
    """e_0..e_d from power sums via k e_k = sum_i (-1)^(i-1) e_(k-i) p_i."""
    d = len(psums)
    e = [1] + [0] * d
    for k in range(1, d + 1):
        acc = 0
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * e[k - i] * psums[i - 1]
        e[k] = acc * pow(k, -1, p) % p
    return e


def zeta_polynomial(zeta: Sequence[int], p: int) -> list[int]:
    """Coefficients of P_zeta, highest degree first (monic)."""
    e = elementary_from_power_sums([z % p for z in zeta], p)
    return [((-1) ** k * e[k]) % p for k in range(len(e))]


def _divide_linear(coef: list[int], r: int, p: int) -> tuple[list[int], int]:
    out = [coef[0]]
    for c in coef[1:]:
        out.append((c + out[-1] * r) % p)
    return out[:-1], out[-1]


def factor_zeta(zeta: Sequence[int], d: int, p: int) -> list[tuple[int, int]] | None:
    """Roots of P_zeta with multiplicities if it splits over F_p, else None."""
    _check_dp(d, p)
    if len(zeta) != d:
        raise ValueError(f"zeta must have {d} coordinates")
    poly = zeta_polynomial(zeta, p)
    roots = []
    for r in range(p):
        mult = 0
        while len(poly) > 1:
            quo, rem = _divide_linear(poly, r, p)
            if rem:
                break
            poly = quo
            mult += 1
        if mult:
            roots.append((r, mult))
    if len(poly) > 1:
        return None
    return roots


def classify_zeta(zeta: Sequence[int], d: int, p: int) -> Partition | None:
    roots = factor_zeta(zeta, d, p)
    if roots is None:
        return None
    return as_partition(sorted((m for _, m in roots), reverse=True))


def w_counts_bruteforce(d: int, p: int, method: str = "kernel") -> dict[Partition, int]:
    """Tally of splitting patterns over all of F_p^d.

    ``method="python"`` runs :func:`classify_zeta` point by point;
    ``"kernel"`` uses the vectorized derivative test in :mod:`kernels`.
    """
    _check_dp(d, p)
    _census_guard(d, p)
    counts = {ell: 0 for ell in poset(d).elements}
    if method == "python":
        for zeta in itertools.product(range(p), repeat=d):
            ell = classify_zeta(zeta, d, p)
            if ell is not None:
                counts[ell] += 1
        return counts
    if method != "kernel":
        raise ValueError(f"unknown method {method!r}")
    patterns = kernels.split_patterns(d, p)
    split = patterns[patterns[:, 0] > 0]
    uniq, freq = np.unique(split, axis=0, return_counts=True)
    for row, c in zip(uniq, freq):
        counts[tuple(int(v) for v in row)] = int(c)
    return counts


def roots_by_partition(d: int, p: int) -> dict[Partition, list[tuple[int, ...]]]:
    """For each l, one solution tuple (with multiplicity) per zeta in W_l."""
    _check_dp(d, p)
    _census_guard(d, p)
    out: dict[Partition, list[tuple[int, ...]]] = {ell: [] for ell in poset(d).elements}
    for zeta in itertools.product(range(p), repeat=d):
        roots = factor_zeta(zeta, d, p)
        if roots is None:
            continue
        ell = as_partition(sorted((m for _, m in roots), reverse=True))
        out[ell].append(tuple(r for r, m in roots for _ in range(m)))
    return out


# -- extension operator ------------------------------------------------------

def _check_f(f, p: int) -> np.ndarray:
    arr = np.asarray(f, dtype=np.complex128)
    if arr.shape[0] != p:
        raise ValueError(f"f must have {p} values (one per curve point)")
    return arr


def _phase_exponents(d: int, p: int, start: int, stop: int) -> np.ndarray:
    # (x . gamma(xi)) mod p for encoded x in [start, stop) and all xi
    codes = np.arange(start, stop, dtype=np.int64)
    x = np.stack([(codes // p**k) % p for k in range(d)], axis=1)
    t = np.arange(p, dtype=np.int64)
    gamma = np.stack([np.array([pow(int(s), k, p) for s in t]) for k in range(1, d + 1)])
    return (x @ gamma) % p


def extension_transform(f, d: int, p: int, chunk: int = 1 << 16) -> np.ndarray:
    """(f sigma)^vee(x) = (1/p) sum_xi f(xi) e(x . gamma(xi)) for all x in F_p^d.

    ``f`` may be one function (shape ``(p,)``) or a batch (shape ``(p, m)``).
    Output rows follow :func:`kernels.encode_points`.
    """
    _check_dp(d, p)
    if p ** (d + 1) > TRANSFORM_BUDGET:
        raise BudgetExceeded("extension transform", p ** (d + 1), TRANSFORM_BUDGET)
    fa = _check_f(f, p)
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    n = p**d
    out = np.empty((n,) + fa.shape[1:], dtype=np.complex128)
    for start in range(0, n, chunk):
        stop = min(n, start + chunk)
        phases = roots[_phase_exponents(d, p, start, stop)]
        out[start:stop] = phases @ fa / p
    return out


def l2d_power(f, d: int, p: int) -> np.ndarray | float:
    """sum_x |(f sigma)^vee(x)|^(2d)."""
    F = extension_transform(f, d, p)
    return np.sum(np.abs(F) ** (2 * d), axis=0)


def norm_ratio(f, d: int, p: int):
    """||(f sigma)^vee||_{L^2d} / ||f||_{L^2(sigma)}; batched along axis 1."""
    fa = _check_f(f, p)
    l2 = np.sqrt(np.sum(np.abs(fa) ** 2, axis=0) / p)
    if np.any(l2 == 0):
        raise ValueError("f must not vanish identically")
    return l2d_power(fa, d, p) ** (1.0 / (2 * d)) / l2


def sharp_constant(d: int, p: int) -> float:
    A = constant_A(d, p)
    return math.exp((math.log(A.numerator) - math.log(A.denominator)) / (2 * d))


@dataclass(frozen=True)
class LhsValues:
    brute: float
    partition_formula: float
    transform: float
    exact_brute: Fraction | None = None
    exact_partition: Fraction | None = None


def combinatorial_lhs(f, d: int, p: int) -> LhsValues:
    """sum_zeta |sum_{xi_1+..+xi_d = zeta} prod f(xi_i)|^2 by three routes.

    Exact values accompany the float ones when ``f`` is real and rational.
    """
    _check_dp(d, p)
    _census_guard(d, p)
    vals = list(f)
    fa = _check_f(vals, p)

    # brute force over Gamma^d, bucketed by the endpoint zeta
    grids = np.meshgrid(*([np.arange(p)] * d), indexing="ij")
    ts = np.stack([g.ravel() for g in grids], axis=1)
    psums = np.stack([np.sum(ts**k, axis=1) % p for k in range(1, d + 1)], axis=1)
    codes = kernels.encode_points(psums, p)
    prods = np.prod(fa[ts], axis=1)
    re = np.bincount(codes, weights=prods.real, minlength=p**d)
    im = np.bincount(codes, weights=prods.imag, minlength=p**d)
    brute = float(np.sum(re**2 + im**2))

    reps = roots_by_partition(d, p)
    mod2 = np.abs(fa) ** 2
    part = 0.0
    for ell, tuples in reps.items():
        c = multinomial_d(ell)
        for tt in tuples:
            part += c * c * float(np.prod(mod2[list(tt)]))

    transform = float(p**d * l2d_power(fa, d, p))

    exact_b = exact_p = None
    if all(isinstance(v, (int, Fraction)) for v in vals):
        fr = [Fraction(v) for v in vals]
        buckets: dict[tuple[int, ...], Fraction] = {}
        for tt in itertools.product(range(p), repeat=d):
            key = tuple(sum(t**k for t in tt) % p for k in range(1, d + 1))
            term = Fraction(1)
            for t in tt:
                term *= fr[t]
            buckets[key] = buckets.get(key, Fraction(0)) + term
        exact_b = sum((v * v for v in buckets.values()), Fraction(0))
        exact_p = Fraction(0)
        for ell, tuples in reps.items():
            c = multinomial_d(ell)
            for tt in tuples:
                term = Fraction(c * c)
                for t in tt:
                    term *= fr[t] * fr[t]
                exact_p += term
    return LhsValues(brute, part, transform, exact_b, exact_p)


# -- the battery -------------------------------------------------------------

@dataclass
class OracleReport:
    d: int
    p: int
    W_counts: dict[Partition, dict[str, int]] = field(default_factory=dict)
    checks: list[dict] = field(default_factory=list)

    def add(self, name: str, passed: bool, **detail) -> None:
        self.checks.append({"name": name, "passed": bool(passed), **detail})

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "p": self.p,
            "W_counts": [
                {"partition": list(ell), "bruteforce": v["bruteforce"], "formula": v["formula"]}
                for ell, v in self.W_counts.items()
            ],
            "checks": self.checks,
            "passed": self.passed,
        }


def random_constant_modulus(rng: np.random.Generator, p: int, m: int) -> np.ndarray:
    radius = rng.uniform(0.5, 2.0, size=m)
    return radius * np.exp(2j * np.pi * rng.random((p, m)))


def random_varying_modulus(rng: np.random.Generator, p: int, m: int) -> np.ndarray:
    mod = rng.uniform(0.0, 1.0, size=(p, m))
    return mod * np.exp(2j * np.pi * rng.random((p, m)))


def _fmt(x: float) -> str:
    return f"{x:.6e}"


def run_oracle(d: int, p: int, trials: int = 100, seed: int = 0, tol: float = 1e-9) -> OracleReport:
    """Full census and norm battery for one (d, p)."""
    _check_dp(d, p)
    _census_guard(d, p)
    if p ** (d + 1) > TRANSFORM_BUDGET:
        raise BudgetExceeded("extension transform", p ** (d + 1), TRANSFORM_BUDGET)
    rng = np.random.default_rng(seed)
    rep = OracleReport(d, p)
    elements = poset(d).elements

    counts = w_counts_bruteforce(d, p)
    formula_ok = True
    for ell in elements:
        w = w_cardinality(ell, p)
        rep.W_counts[ell] = {"bruteforce": counts[ell], "formula": w}
        formula_ok &= counts[ell] == w
    rep.add("W_cardinality_formula", formula_ok)
    total = sum(multinomial_d(ell) * counts[ell] for ell in elements)
    rep.add("binom_W_sum_equals_p_to_d", total == p**d, value=total)

    patterns = kernels.split_patterns(d, p)
    census = _census(d, p)
    law_ok = True
    for row, c in zip(patterns, census):
        if row[0] == 0:
            law_ok &= c == 0
        else:
            law_ok &= c == multinomial_d(tuple(int(v) for v in row))
    rep.add("solution_count_law", bool(law_ok))
    conv = convolution_counts(d, p)
    rep.add("convolution_equals_solution_count", bool(np.array_equal(conv, census)))

    # orthogonality: sum_x e(x . v) vanishes for v != 0
    roots = np.exp(2j * np.pi * np.arange(p) / p)
    codes = np.arange(p**d, dtype=np.int64)
    xs = np.stack([(codes // p**k) % p for k in range(d)], axis=1)
    worst = 0.0
    for _ in range(100):
        v = rng.integers(0, p, size=d)
        if not v.any():
            v[rng.integers(d)] = 1 + rng.integers(p - 1)
        worst = max(worst, abs(roots[(xs @ v) % p].sum()))
    rep.add("orthogonality", worst < tol * p**d, max_abs=_fmt(worst))

    bound = sharp_constant(d, p)
    ones = np.ones(p)
    r1 = float(norm_ratio(ones, d, p))
    rep.add("constant_attains_bound", abs(r1 - bound) <= tol, ratio=_fmt(r1), bound=_fmt(bound))

    f_const = random_constant_modulus(rng, p, trials)
    rc = norm_ratio(f_const, d, p)
    dev = float(np.max(np.abs(rc - bound)))
    rep.add("constant_modulus_attains_bound", dev <= tol, max_deviation=_fmt(dev))

    f_var = random_varying_modulus(rng, p, trials)
    rv = norm_ratio(f_var, d, p)
    margin = float(np.min(bound - rv))
    rep.add("varying_modulus_strictly_below", margin > tol, min_margin=_fmt(margin), max_ratio=_fmt(float(rv.max())))

    # Plancherel: sum_x |sum_xi f e(x.xi)|^2 = p^d sum |f|^2
    f0 = f_var[:, 0]
    F = extension_transform(f0, d, p) * p
    lhs_pl = float(np.sum(np.abs(F) ** 2)) / p**d
    rhs_pl = float(p * np.sum(np.abs(f0) ** 2)) / p
    rep.add("plancherel", abs(lhs_pl - rhs_pl) <= tol * max(1.0, rhs_pl), lhs=_fmt(lhs_pl), rhs=_fmt(rhs_pl))

    # three routes to the combinatorial left-hand side
    vals = combinatorial_lhs(f0, d, p)
    spread = max(vals.brute, vals.partition_formula, vals.transform) - min(
        vals.brute, vals.partition_formula, vals.transform
    )
    rep.add("lhs_three_routes", spread <= tol * max(1.0, vals.brute), spread=_fmt(spread))
    rat = [Fraction(int(k), 16) for k in rng.integers(0, 17, size=p)]
    if not any(rat):
        rat[0] = Fraction(1)
    exact = combinatorial_lhs(rat, d, p)
    rep.add("lhs_exact_routes", exact.exact_brute == exact.exact_partition)
    return rep
