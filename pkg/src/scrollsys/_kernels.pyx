# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: multiplicity-condition matrices and dense rank over F_p.

Moduli up to 2**63 are supported; products are formed in 128-bit integers.
Both functions must agree exactly with :mod:`scrollsys._kernels_py`.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t

cnp.import_array()

cdef extern from *:
    """
    static inline unsigned long long scrollsys_mulmod(unsigned long long a,
                                                      unsigned long long b,
                                                      unsigned long long p) {
        return (unsigned long long)(((unsigned __int128)a * b) % p);
    }
    """
    unsigned long long scrollsys_mulmod(unsigned long long a, unsigned long long b,
                                        unsigned long long p) nogil


cdef inline uint64_t powmod(uint64_t base, uint64_t e, uint64_t p) noexcept nogil:
    cdef uint64_t acc = 1 % p
    base %= p
    while e:
        if e & 1:
            acc = scrollsys_mulmod(acc, base, p)
        base = scrollsys_mulmod(base, base, p)
        e >>= 1
    return acc


def condition_matrix(int64_t[::1] exp_i, int64_t[::1] exp_k,
                     uint64_t[::1] xs, uint64_t[::1] ys,
                     int64_t[::1] mults, uint64_t p):
    """Rows ``d^(alpha+beta) / dx^alpha dy^beta`` of each monomial at each point, alpha+beta < m."""
    cdef Py_ssize_t ncols = exp_i.shape[0]
    cdef Py_ssize_t npts = xs.shape[0]
    cdef Py_ssize_t nrows = 0, pt, row, col, alpha, beta, t
    cdef int64_t m, i, k, max_i = 0, max_k = 0
    for pt in range(npts):
        nrows += mults[pt] * (mults[pt] + 1) // 2
    for col in range(ncols):
        if exp_i[col] > max_i:
            max_i = exp_i[col]
        if exp_k[col] > max_k:
            max_k = exp_k[col]
    out = np.zeros((nrows, ncols), dtype=np.uint64)
    cdef uint64_t[:, ::1] M = out
    cdef uint64_t[::1] xpow = np.empty(max_i + 1, dtype=np.uint64)
    cdef uint64_t[::1] ypow = np.empty(max_k + 1, dtype=np.uint64)
    cdef uint64_t fx, fy, v
    row = 0
    with nogil:
        for pt in range(npts):
            m = mults[pt]
            if m <= 0:
                continue
            xpow[0] = 1 % p
            for t in range(1, max_i + 1):
                xpow[t] = scrollsys_mulmod(xpow[t - 1], xs[pt], p)
            ypow[0] = 1 % p
            for t in range(1, max_k + 1):
                ypow[t] = scrollsys_mulmod(ypow[t - 1], ys[pt], p)
            for alpha in range(m):
                for beta in range(m - alpha):
                    for col in range(ncols):
                        i = exp_i[col]
                        k = exp_k[col]
                        if i < alpha or k < beta:
                            continue
                        fx = 1
                        for t in range(alpha):
                            fx = scrollsys_mulmod(fx, <uint64_t>(i - t), p)
                        fy = 1
                        for t in range(beta):
                            fy = scrollsys_mulmod(fy, <uint64_t>(k - t), p)
                        v = scrollsys_mulmod(fx, fy, p)
                        v = scrollsys_mulmod(v, xpow[i - alpha], p)
                        M[row, col] = scrollsys_mulmod(v, ypow[k - beta], p)
                    row += 1
    return out


def rank_mod_p(cnp.ndarray mat, uint64_t p):
    """Rank of an integer matrix over F_p by Gaussian elimination (input untouched)."""
    if mat.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if mat.shape[0] == 0 or mat.shape[1] == 0:
        return 0
    work_arr = np.ascontiguousarray(mat, dtype=np.uint64) % np.uint64(p)
    cdef uint64_t[:, ::1] A = work_arr
    cdef Py_ssize_t nr = A.shape[0], nc = A.shape[1]
    cdef Py_ssize_t rank = 0, col, i, j, piv
    cdef uint64_t inv, f, tmp
    with nogil:
        for col in range(nc):
            if rank == nr:
                break
            piv = -1
            for i in range(rank, nr):
                if A[i, col] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(col, nc):
                    tmp = A[piv, j]
                    A[piv, j] = A[rank, j]
                    A[rank, j] = tmp
            inv = powmod(A[rank, col], p - 2, p)
            for j in range(col, nc):
                A[rank, j] = scrollsys_mulmod(A[rank, j], inv, p)
            for i in range(rank + 1, nr):
                f = A[i, col]
                if f == 0:
                    continue
                for j in range(col, nc):
                    if A[rank, j]:
                        A[i, j] = (A[i, j] + p - scrollsys_mulmod(f, A[rank, j], p)) % p
            rank += 1
    return rank
