"""Sparse integer kernels behind the ring engine and the residue sweeps.

Every kernel has two implementations: a numba ``@njit`` version working on
``int64`` arrays and a pure-numpy version that is dtype-generic (it also runs
on ``object`` arrays of Python ints or Fractions, which is how the engine stays
exact once coefficients leave the int64 range).

The backend is picked once at import time from ``TOWERCOB_BACKEND``
(``numba`` by default, ``numpy`` to force the fallback).  Callers are
responsible for the overflow bound check; the numba path is only taken for
int64 inputs that the caller has proven safe.
"""

from __future__ import annotations

import os

import numpy as np

#: magnitude below which int64 arithmetic is treated as safe
INT64_SAFE = 1 << 62

_requested = os.environ.get("TOWERCOB_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ValueError(f"TOWERCOB_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        njit = None
else:
    njit = None

BACKEND = "numba" if njit is not None else "numpy"


def _is_int64(*arrays) -> bool:
    return all(a.dtype == np.int64 for a in arrays)


# ---------------------------------------------------------------------------
# CSR mat-vec
# ---------------------------------------------------------------------------

def spmv_numpy(indptr, indices, data, v):
    n = len(indptr) - 1
    dtype = np.int64 if _is_int64(data, v) else object
    out = np.zeros(n, dtype=dtype)
    if len(data) == 0:
        return out
    prod = data * v[indices]
    starts = indptr[:-1]
    nonempty = indptr[1:] > starts
    out[nonempty] = np.add.reduceat(prod, starts[nonempty])
    return out


def _spmv_numba_impl(indptr, indices, data, v):
    n = indptr.shape[0] - 1
    out = np.zeros(n, np.int64)
    for i in range(n):
        s = 0
        for p in range(indptr[i], indptr[i + 1]):
            s += data[p] * v[indices[p]]
        out[i] = s
    return out


# ---------------------------------------------------------------------------
# CSR x CSR product
# ---------------------------------------------------------------------------

def coo_to_csr(rows, cols, vals, n_rows, n_cols):
    """Sum duplicates, drop zeros and return ``(indptr, indices, data)``."""
    if len(vals) == 0:
        return (np.zeros(n_rows + 1, np.int64), np.zeros(0, np.int64),
                np.zeros(0, vals.dtype if vals.dtype != object else object))
    key = rows.astype(np.int64) * n_cols + cols.astype(np.int64)
    order = np.argsort(key, kind="stable")
    key = key[order]
    vals = vals[order]
    first = np.ones(len(key), dtype=bool)
    first[1:] = key[1:] != key[:-1]
    starts = np.flatnonzero(first)
    summed = np.add.reduceat(vals, starts)
    ukey = key[starts]
    keep = np.asarray(summed != 0, dtype=bool)
    summed = summed[keep]
    ukey = ukey[keep]
    r = ukey // n_cols
    c = ukey % n_cols
    indptr = np.zeros(n_rows + 1, np.int64)
    np.cumsum(np.bincount(r, minlength=n_rows), out=indptr[1:])
    return indptr, c.astype(np.int64), summed


def spgemm_numpy(a_indptr, a_indices, a_data, b_indptr, b_indices, b_data, n_cols):
    n_rows = len(a_indptr) - 1
    a_rows = np.repeat(np.arange(n_rows, dtype=np.int64), np.diff(a_indptr))
    k = a_indices
    counts = b_indptr[k + 1] - b_indptr[k]
    total = int(counts.sum())
    if total == 0:
        dtype = np.int64 if _is_int64(a_data, b_data) else object
        return coo_to_csr(np.zeros(0, np.int64), np.zeros(0, np.int64),
                          np.zeros(0, dtype), n_rows, n_cols)
    src = np.repeat(np.arange(len(k), dtype=np.int64), counts)
    run_start = np.cumsum(counts) - counts
    pos = np.repeat(b_indptr[k] - run_start, counts) + np.arange(total, dtype=np.int64)
    vals = a_data[src] * b_data[pos]
    return coo_to_csr(a_rows[src], b_indices[pos], vals, n_rows, n_cols)


def _spgemm_numba_impl(a_indptr, a_indices, a_data, b_indptr, b_indices, b_data, n_cols):
    n_rows = a_indptr.shape[0] - 1
    acc = np.zeros(n_cols, np.int64)
    mark = np.full(n_cols, -1, np.int64)
    touched = np.empty(n_cols, np.int64)
    cap = max(16, a_indices.shape[0] * 2)
    indices = np.empty(cap, np.int64)
    data = np.empty(cap, np.int64)
    indptr = np.zeros(n_rows + 1, np.int64)
    nnz = 0
    for i in range(n_rows):
        nt = 0
        for pa in range(a_indptr[i], a_indptr[i + 1]):
            k = a_indices[pa]
            av = a_data[pa]
            for pb in range(b_indptr[k], b_indptr[k + 1]):
                j = b_indices[pb]
                if mark[j] != i:
                    mark[j] = i
                    acc[j] = 0
                    touched[nt] = j
                    nt += 1
                acc[j] += av * b_data[pb]
        touched[:nt].sort()
        for t in range(nt):
            j = touched[t]
            if acc[j] != 0:
                if nnz == cap:
                    cap *= 2
                    new_i = np.empty(cap, np.int64)
                    new_d = np.empty(cap, np.int64)
                    new_i[:nnz] = indices[:nnz]
                    new_d[:nnz] = data[:nnz]
                    indices = new_i
                    data = new_d
                indices[nnz] = j
                data[nnz] = acc[j]
                nnz += 1
        indptr[i + 1] = nnz
    return indptr, indices[:nnz].copy(), data[:nnz].copy()


# ---------------------------------------------------------------------------
# dense product by odometer sweep over the monomial basis
# ---------------------------------------------------------------------------

def monomial_sweep_numpy(op_list, radices, a, b):
    """Return sum_i b[i] * (monomial_i . a) by walking the mixed-radix basis.

    ``op_list[k]`` is the CSR triple of multiplication by generator ``k``;
    basis index ``i`` has little-endian digits in ``radices``.
    """
    n = len(a)
    dtype = np.int64 if _is_int64(a, b) and all(_is_int64(op[2]) for op in op_list) else object
    result = np.zeros(n, dtype=dtype)
    k_count = len(radices)
    digits = [0] * k_count
    saved = [a] * k_count
    current = a
    for i in range(n):
        if i > 0:
            k = 0
            while digits[k] == radices[k] - 1:
                digits[k] = 0
                k += 1
            digits[k] += 1
            ip, ix, dt = op_list[k]
            current = spmv_numpy(ip, ix, dt, saved[k])
            for t in range(k + 1):
                saved[t] = current
        if b[i] != 0:
            result = result + b[i] * current
    return result


def _monomial_sweep_numba_impl(indptr2d, indices, data, offsets, radices, a, b):
    n = a.shape[0]
    k_count = radices.shape[0]
    result = np.zeros(n, np.int64)
    digits = np.zeros(k_count, np.int64)
    saved = np.empty((k_count + 1, n), np.int64)
    for t in range(k_count + 1):
        saved[t, :] = a
    current = a.copy()
    for i in range(n):
        if i > 0:
            k = 0
            while digits[k] == radices[k] - 1:
                digits[k] = 0
                k += 1
            digits[k] += 1
            off = offsets[k]
            src = saved[k]
            for r in range(n):
                s = 0
                for p in range(indptr2d[k, r], indptr2d[k, r + 1]):
                    s += data[off + p] * src[indices[off + p]]
                current[r] = s
            for t in range(k + 1):
                saved[t, :] = current
        bi = b[i]
        if bi != 0:
            for r in range(n):
                result[r] += bi * current[r]
    return result


# ---------------------------------------------------------------------------
# batched binomial residues mod p^q
# ---------------------------------------------------------------------------

def granville_numpy(n, m, p, q, fact, inv):
    """Vectorised residue of binom(n, m) mod p**q over int64 arrays."""
    n = np.asarray(n, np.int64)
    m = np.asarray(m, np.int64)
    mod = p ** q
    r = n - m
    sign_base = 1 if (p == 2 and q >= 3) else -1
    e0 = np.zeros(n.shape, np.int64)
    ehigh = np.zeros(n.shape, np.int64)
    carry = np.zeros(n.shape, np.int64)
    mm, rr = m.copy(), r.copy()
    pos = 0
    while np.any((mm > 0) | (rr > 0) | (carry > 0)):
        s = mm % p + rr % p + carry
        carry = (s >= p).astype(np.int64)
        e0 += carry
        if pos >= q - 1:
            ehigh += carry
        mm //= p
        rr //= p
        pos += 1
    prod = np.ones(n.shape, np.int64)
    nn, mj, rj = n.copy(), m.copy(), r.copy()
    while np.any(nn > 0):
        prod = prod * fact[nn % mod] % mod
        prod = prod * inv[fact[mj % mod]] % mod
        prod = prod * inv[fact[rj % mod]] % mod
        nn //= p
        mj //= p
        rj //= p
    if sign_base == -1:
        prod = np.where(ehigh % 2 == 1, (mod - prod) % mod, prod)
    out = np.zeros(n.shape, np.int64)
    ok = e0 < q
    ppow = np.power(np.int64(p), np.minimum(e0, q))
    out[ok] = (prod[ok] * ppow[ok]) % mod
    return out


def _granville_numba_impl(n, m, p, q, fact, inv):
    mod = 1
    for _ in range(q):
        mod *= p
    sign_neg = not (p == 2 and q >= 3)
    out = np.zeros(n.shape[0], np.int64)
    for idx in range(n.shape[0]):
        nv = n[idx]
        mv = m[idx]
        rv = nv - mv
        e0 = 0
        ehigh = 0
        carry = 0
        a = mv
        b = rv
        pos = 0
        while a > 0 or b > 0 or carry > 0:
            s = a % p + b % p + carry
            carry = 1 if s >= p else 0
            e0 += carry
            if pos >= q - 1:
                ehigh += carry
            a //= p
            b //= p
            pos += 1
        if e0 >= q:
            out[idx] = 0
            continue
        prod = 1
        x = nv
        y = mv
        z = rv
        while x > 0:
            prod = prod * fact[x % mod] % mod
            prod = prod * inv[fact[y % mod]] % mod
            prod = prod * inv[fact[z % mod]] % mod
            x //= p
            y //= p
            z //= p
        if sign_neg and ehigh % 2 == 1:
            prod = (mod - prod) % mod
        for _ in range(e0):
            prod = prod * p % mod
        out[idx] = prod
    return out


if njit is not None:
    _spmv_numba = njit(cache=True)(_spmv_numba_impl)
    _spgemm_numba = njit(cache=True)(_spgemm_numba_impl)
    _monomial_sweep_numba = njit(cache=True)(_monomial_sweep_numba_impl)
    _granville_numba = njit(cache=True)(_granville_numba_impl)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def spmv(indptr, indices, data, v):
    if BACKEND == "numba" and _is_int64(data, v):
        return _spmv_numba(indptr, indices, data, v)
    return spmv_numpy(indptr, indices, data, v)


def spgemm(a, b, n_cols):
    """Product of two CSR triples ``a @ b``."""
    if BACKEND == "numba" and _is_int64(a[2], b[2]):
        return _spgemm_numba(a[0], a[1], a[2], b[0], b[1], b[2], n_cols)
    return spgemm_numpy(a[0], a[1], a[2], b[0], b[1], b[2], n_cols)


def monomial_sweep(op_list, radices, a, b, stacked=None):
    """Dense product kernel; ``stacked`` is the packed op set for numba."""
    if (BACKEND == "numba" and stacked is not None and _is_int64(a, b)):
        indptr2d, indices, data, offsets = stacked
        return _monomial_sweep_numba(indptr2d, indices, data, offsets,
                                     np.asarray(radices, np.int64), a, b)
    return monomial_sweep_numpy(op_list, radices, a, b)


def granville_batch(n, m, p, q, fact, inv):
    n = np.ascontiguousarray(n, np.int64)
    m = np.ascontiguousarray(m, np.int64)
    if BACKEND == "numba":
        return _granville_numba(n, m, p, q, fact, inv)
    return granville_numpy(n, m, p, q, fact, inv)
