"""Integer-preserving pivot kernels.

The tableau ``T`` (row 0 is the objective) and right-hand side ``beta``
hold ``d * B^-1`` images of the integer data, so every entry is a minor of
the input and each update divides exactly by the previous pivot ``d``.

int64 kernels are used while entries stay below ``SAFE`` (products then fit
in 63 bits); beyond that the caller switches to ``object`` arrays of Python
ints, which only the numpy path handles.
"""
import numpy as np

from .._accel import USE_NUMBA, njit

SAFE = 1 << 31
VALUE_SAFE = 1 << 62


@njit
def _exact_div_params(d):
    # exact division by d == shift out its twos, then multiply by the
    # inverse of the odd part modulo 2^64
    tz = 0
    while (d >> tz) & 1 == 0:
        tz += 1
    odd = np.uint64(d >> tz)
    inv = odd
    for _ in range(6):
        inv = inv * (np.uint64(2) - odd * inv)
    return tz, inv


@njit
def _pivot_int64_numba(T, beta, d, r, q):
    m1, n = T.shape
    p = T[r, q]
    sgn = 1
    newd = p
    if p < 0:
        sgn = -1
        newd = -p
    tz, inv = _exact_div_params(d)
    rowr = T[r].copy()
    br = beta[r]
    maxabs = max(newd, d)
    for i in range(m1):
        if i == r:
            for j in range(n):
                a = sgn * T[i, j]
                T[i, j] = a
                if abs(a) > maxabs:
                    maxabs = abs(a)
            T[i, q] = sgn * d
            beta[i] = sgn * br
            if abs(br) > maxabs:
                maxabs = abs(br)
            continue
        f = T[i, q]
        if abs(f) > maxabs:
            maxabs = abs(f)
        for j in range(n):
            x = (p * T[i, j] - f * rowr[j]) >> tz
            a = sgn * np.int64(np.uint64(x) * inv)
            T[i, j] = a
            if abs(a) > maxabs:
                maxabs = abs(a)
        x = (p * beta[i] - f * br) >> tz
        b = sgn * np.int64(np.uint64(x) * inv)
        beta[i] = b
        if abs(b) > maxabs:
            maxabs = abs(b)
        T[i, q] = -sgn * f
    return newd, maxabs


def _pivot_numpy(T, beta, d, r, q):
    p = T[r, q]
    col = T[:, q].copy()
    rowr = T[r].copy()
    br = beta[r]
    T *= p
    T -= np.outer(col, rowr)
    T //= d
    beta *= p
    beta -= col * br
    beta //= d
    T[:, q] = -col
    T[r] = rowr
    T[r, q] = d
    beta[r] = br
    newd = p
    if p < 0:
        newd = -p
        np.negative(T, out=T)
        np.negative(beta, out=beta)
    if T.dtype == object:
        return newd, None
    maxabs = max(int(newd), int(np.abs(T).max(initial=0)), int(np.abs(beta).max(initial=0)))
    return newd, maxabs


@njit
def _values_int64_numba(T, beta, v, L):
    m1, n = T.shape
    out = np.empty(m1, dtype=np.int64)
    for i in range(m1):
        s = L * beta[i]
        for j in range(n):
            s -= T[i, j] * v[j]
        out[i] = s
    return out


def _values_numpy(T, beta, v, L):
    if T.dtype == object:
        return beta * L - T.dot(v)
    return beta * L - T @ v


def pivot(T, beta, d, r, q):
    """Pivot on ``T[r, q]`` in place; returns ``(new_d, max_abs_entry or None)``."""
    if USE_NUMBA and T.dtype == np.int64:
        newd, maxabs = _pivot_int64_numba(T, beta, np.int64(d), r, q)
        return int(newd), int(maxabs)
    return _pivot_numpy(T, beta, d, r, q)


def basic_values(T, beta, v, L):
    """``L * beta - T @ v``: scaled values ``d * L * x_B`` (row 0: objective)."""
    if USE_NUMBA and T.dtype == np.int64:
        return _values_int64_numba(T, beta, v, np.int64(L))
    return _values_numpy(T, beta, v, L)
