"""Hot numeric kernels, each with a numba body and a pure-numpy twin.

The public functions dispatch on :mod:`momentsharp._accel`; the ``*_numpy``
and ``*_numba`` variants stay importable so tests and the benchmark can run
both side by side.
"""

import numpy as np

from . import _accel

__all__ = [
    "dominance_matrix",
    "power_sum_census",
    "split_patterns",
    "encode_points",
]


# -- dominance order --------------------------------------------------------

def dominance_matrix_numpy(parts: np.ndarray) -> np.ndarray:
    cs = np.cumsum(parts, axis=1)
    return np.all(cs[:, None, :] <= cs[None, :, :], axis=2)


@_accel.jit
def _dominance_matrix_jit(parts):
    m, d = parts.shape
    cs = np.empty((m, d), dtype=np.int64)
    for i in range(m):
        acc = 0
        for k in range(d):
            acc += parts[i, k]
            cs[i, k] = acc
    out = np.empty((m, m), dtype=np.bool_)
    for i in range(m):
        for j in range(m):
            ok = True
            for k in range(d):
                if cs[i, k] > cs[j, k]:
                    ok = False
                    break
            out[i, j] = ok
    return out


def dominance_matrix_numba(parts: np.ndarray) -> np.ndarray:
    return _dominance_matrix_jit(np.ascontiguousarray(parts, dtype=np.int64))


def dominance_matrix(parts) -> np.ndarray:
    """``out[i, j]`` is True iff row ``i`` is dominated by row ``j``."""
    parts = np.asarray(parts, dtype=np.int64)
    if _accel.HAVE_NUMBA:
        return dominance_matrix_numba(parts)
    return dominance_matrix_numpy(parts)


# -- power-sum census over F_p^d --------------------------------------------

def encode_points(points: np.ndarray, p: int) -> np.ndarray:
    """Encode rows of F_p^d as integers, first coordinate least significant."""
    points = np.asarray(points, dtype=np.int64)
    d = points.shape[-1]
    weights = p ** np.arange(d, dtype=np.int64)
    return points @ weights


def power_sum_census_numpy(d: int, p: int) -> np.ndarray:
    t = np.arange(p, dtype=np.int64)
    code = np.zeros((p,) * d, dtype=np.int64)
    power = np.ones(p, dtype=np.int64)
    for k in range(d):
        power = (power * t) % p
        s = np.zeros((p,) * d, dtype=np.int64)
        for axis in range(d):
            shape = [1] * d
            shape[axis] = p
            s = s + power.reshape(shape)
        code += (s % p) * p**k
    return np.bincount(code.ravel(), minlength=p**d)


@_accel.jit
def _power_sum_census_jit(d, p):
    powers = np.empty((p, d), dtype=np.int64)
    for t in range(p):
        acc = 1
        for k in range(d):
            acc = (acc * t) % p
            powers[t, k] = acc
    place = np.empty(d, dtype=np.int64)
    acc = 1
    for k in range(d):
        place[k] = acc
        acc *= p
    counts = np.zeros(acc, dtype=np.int64)
    idx = np.zeros(d, dtype=np.int64)
    sums = np.zeros(d, dtype=np.int64)
    total = acc
    for _ in range(total):
        for k in range(d):
            sums[k] = 0
        for i in range(d):
            for k in range(d):
                sums[k] += powers[idx[i], k]
        code = 0
        for k in range(d):
            code += (sums[k] % p) * place[k]
        counts[code] += 1
        # odometer
        i = 0
        while i < d:
            idx[i] += 1
            if idx[i] < p:
                break
            idx[i] = 0
            i += 1
    return counts


def power_sum_census_numba(d: int, p: int) -> np.ndarray:
    return _power_sum_census_jit(d, p)


def power_sum_census(d: int, p: int) -> np.ndarray:
    """Number of (t_1..t_d) in F_p^d hitting each power-sum vector.

    Entry ``c`` counts tuples with ``sum_i t_i^k = zeta_k`` where ``zeta`` is
    the point encoded as ``c`` by :func:`encode_points`.
    """
    if _accel.HAVE_NUMBA:
        return power_sum_census_numba(d, p)
    return power_sum_census_numpy(d, p)


# -- splitting pattern of P_zeta for every zeta -----------------------------

def _modinv_table(p: int, d: int) -> np.ndarray:
    inv = np.zeros(d + 1, dtype=np.int64)
    for k in range(1, d + 1):
        inv[k] = pow(k, -1, p)
    return inv


def _falling_table(d: int, p: int) -> np.ndarray:
    # ff[m, k] = m (m-1) ... (m-k+1) mod p
    ff = np.zeros((d + 1, d + 1), dtype=np.int64)
    for m in range(d + 1):
        acc = 1
        for k in range(d + 1):
            ff[m, k] = acc % p
            acc *= m - k
    return ff


def split_patterns_numpy(d: int, p: int) -> np.ndarray:
    n = p**d
    codes = np.arange(n, dtype=np.int64)
    psums = np.empty((d, n), dtype=np.int64)
    for k in range(d):
        psums[k] = (codes // p**k) % p
    inv = _modinv_table(p, d)
    e = np.zeros((d + 1, n), dtype=np.int64)
    e[0] = 1
    for k in range(1, d + 1):
        acc = np.zeros(n, dtype=np.int64)
        for i in range(1, k + 1):
            sign = 1 if i % 2 == 1 else p - 1
            acc = (acc + sign * ((e[k - i] * psums[i - 1]) % p)) % p
        e[k] = (acc * inv[k]) % p
    # coefficient of X^m is (-1)^(d-m) e_{d-m}
    coef = np.empty((d + 1, n), dtype=np.int64)
    for m in range(d + 1):
        c = e[d - m]
        coef[m] = c if (d - m) % 2 == 0 else (p - c) % p
    ff = _falling_table(d, p)
    mult = np.zeros((n, p), dtype=np.int64)
    undecided = np.ones((n, p), dtype=bool)
    for r in range(p):
        rpow = np.array([pow(r, j, p) for j in range(d + 1)], dtype=np.int64)
        for k in range(d + 1):
            val = np.zeros(n, dtype=np.int64)
            for m in range(k, d + 1):
                val = (val + coef[m] * ((ff[m, k] * rpow[m - k]) % p)) % p
            hit = undecided[:, r] & (val != 0)
            mult[hit, r] = k
            undecided[hit, r] = False
    pattern = -np.sort(-mult, axis=1)[:, :d]
    splits = mult.sum(axis=1) == d
    pattern[~splits] = 0
    return pattern


@_accel.jit
def _split_patterns_jit(d, p, inv, ff):
    n = 1
    for _ in range(d):
        n *= p
    out = np.zeros((n, d), dtype=np.int64)
    psum = np.empty(d, dtype=np.int64)
    e = np.empty(d + 1, dtype=np.int64)
    coef = np.empty(d + 1, dtype=np.int64)
    mult = np.empty(p, dtype=np.int64)
    rpow = np.empty(d + 1, dtype=np.int64)
    for code in range(n):
        c = code
        for k in range(d):
            psum[k] = c % p
            c //= p
        e[0] = 1
        for k in range(1, d + 1):
            acc = 0
            for i in range(1, k + 1):
                term = (e[k - i] * psum[i - 1]) % p
                if i % 2 == 1:
                    acc += term
                else:
                    acc += p - term
            e[k] = ((acc % p) * inv[k]) % p
        for m in range(d + 1):
            v = e[d - m]
            coef[m] = v if (d - m) % 2 == 0 else (p - v) % p
        total = 0
        for r in range(p):
            rpow[0] = 1
            for j in range(1, d + 1):
                rpow[j] = (rpow[j - 1] * r) % p
            k = 0
            while k <= d:
                val = 0
                for m in range(k, d + 1):
                    val = (val + coef[m] * ((ff[m, k] * rpow[m - k]) % p)) % p
                if val != 0:
                    break
                k += 1
            mult[r] = k
            total += k
        if total == d:
            srt = np.sort(mult)[::-1]
            for i in range(d):
                out[code, i] = srt[i]
    return out


def split_patterns_numba(d: int, p: int) -> np.ndarray:
    return _split_patterns_jit(d, p, _modinv_table(p, d), _falling_table(d, p))


def split_patterns(d: int, p: int) -> np.ndarray:
    """Root-multiplicity pattern of ``P_zeta`` for every encoded ``zeta``.

    Row ``c`` is the descending multiplicity vector (length ``d``) when the
    polynomial splits over F_p, and all zeros otherwise. The multiplicity of
    ``r`` is read off as the order of the first non-vanishing derivative at
    ``r``, which is valid because ``p > d``.
    """
    if p <= d:
        raise ValueError(f"need p > d, got p={p}, d={d}")
    if _accel.HAVE_NUMBA:
        return split_patterns_numba(d, p)
    return split_patterns_numpy(d, p)
