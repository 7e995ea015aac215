# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: exhaustive census enumeration and Monte Carlo tallies.

Mirrors uniqmax._purekernels exactly (same integer outputs, same RNG
arithmetic); see that module for the interface contract.
"""

from cython.operator cimport dereference as deref, preincrement as inc
from libc.stdint cimport int64_t, uint64_t
from libcpp.algorithm cimport sort as cpp_sort
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

import numpy as np

name = "compiled"

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15
cdef uint64_t MIX_A = 0xBF58476D1CE4E5B9
cdef uint64_t MIX_B = 0x94D049BB133111EB
cdef double U53_SCALE = 1.0 / 9007199254740992.0  # 2^-53


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z *= MIX_A
    z ^= z >> 27
    z *= MIX_B
    z ^= z >> 31
    return z


cdef inline double unit(uint64_t seed, uint64_t rep, uint64_t game) noexcept nogil:
    cdef uint64_t counter = (rep << 32) | game
    cdef uint64_t z = mix64(seed + (counter + 1) * GOLDEN)
    return <double>(z >> 11) * U53_SCALE


def census_pass(int k, int n):
    """Enumerate all (k+1)^(n(n-1)/2) outcomes; aggregate integer counts.

    Returns (keys, rows, marg) exactly as the pure backend does.
    """
    cdef int m = n * (n - 1) // 2
    cdef int max_y = k * (n - 1)
    cdef int a, g, i, j, p, bits
    cdef int64_t ncols = 1
    for a in range(k):
        ncols *= m + 1

    cdef vector[int] pi, pj
    for i in range(n):
        for j in range(i + 1, n):
            pi.push_back(i)
            pj.push_back(j)

    cdef vector[int64_t] strides
    strides.resize(k + 1)
    strides[0] = 0
    cdef int64_t s = 1
    for a in range(1, k + 1):
        strides[a] = s
        s *= m + 1

    bits = 1
    while (1 << bits) <= max_y:
        bits += 1

    cdef vector[int64_t] y, sortbuf
    y.resize(n)
    sortbuf.resize(n)
    for j in range(n):
        y[j] = k * j

    cdef vector[int] digits
    digits.resize(m)
    for g in range(m):
        digits[g] = 0

    cdef unordered_map[int64_t, int64_t] keymap
    cdef unordered_map[int64_t, int64_t].iterator it
    cdef vector[vector[int64_t]] rows
    cdef vector[int64_t] zero_row
    zero_row.resize(ncols)
    cdef vector[int64_t] marg
    marg.resize((max_y + 1) * ncols)

    cdef int64_t comp = 0
    cdef int64_t key, ridx

    while True:
        for p in range(n):
            sortbuf[p] = y[p]
        cpp_sort(sortbuf.begin(), sortbuf.end())
        key = 0
        for p in range(n):
            key = (key << bits) | sortbuf[p]
        it = keymap.find(key)
        if it == keymap.end():
            ridx = <int64_t>rows.size()
            keymap[key] = ridx
            rows.push_back(zero_row)
        else:
            ridx = deref(it).second
        rows[ridx][comp] += 1
        marg[y[0] * ncols + comp] += 1

        g = m - 1
        while g >= 0 and digits[g] == k:
            digits[g] = 0
            y[pi[g]] -= k
            y[pj[g]] += k
            comp -= strides[k]
            g -= 1
        if g < 0:
            break
        digits[g] += 1
        y[pi[g]] += 1
        y[pj[g]] -= 1
        a = digits[g]
        comp += strides[a] - strides[a - 1]

    items = []
    it = keymap.begin()
    while it != keymap.end():
        items.append((deref(it).first, deref(it).second))
        inc(it)
    items.sort()

    cdef int64_t n_keys = <int64_t>len(items)
    keys_np = np.zeros((n_keys, n), dtype=np.int64)
    rows_np = np.zeros((n_keys, ncols), dtype=np.int64)
    marg_np = np.zeros((max_y + 1, ncols), dtype=np.int64)
    cdef int64_t[:, ::1] keys_mv = keys_np
    cdef int64_t[:, ::1] rows_mv = rows_np
    cdef int64_t[:, ::1] marg_mv = marg_np
    cdef int64_t mask = (<int64_t>1 << bits) - 1
    cdef int64_t out_i, col
    for out_i in range(n_keys):
        key, ridx = items[out_i]
        for p in range(n):
            keys_mv[out_i, p] = (key >> (bits * (n - 1 - p))) & mask
        for col in range(ncols):
            rows_mv[out_i, col] = rows[ridx][col]
    for i in range(max_y + 1):
        for col in range(ncols):
            marg_mv[i, col] = marg[i * ncols + col]
    return keys_np, rows_np, marg_np


def mc_tally(int k, int n, double[::1] cum, uint64_t seed, long long rep_start,
             long long reps, double y_threshold):
    """Monte Carlo tallies over replications [rep_start, rep_start+reps)."""
    cdef int m = n * (n - 1) // 2
    cdef vector[int] pi, pj
    cdef int i, j, p, a, g
    for i in range(n):
        for j in range(i + 1, n):
            pi.push_back(i)
            pj.push_back(j)

    cdef vector[int64_t] y, s
    y.resize(n)
    s.resize(n)
    cdef long long unique = 0, exceed = 0, collision_free = 0
    cdef long long rr
    cdef uint64_t r
    cdef double u
    cdef int64_t mx
    cdef bint tied

    with nogil:
        for rr in range(reps):
            r = <uint64_t>(rep_start + rr)
            for p in range(n):
                y[p] = 0
            for g in range(m):
                u = unit(seed, r, <uint64_t>g)
                a = 0
                while a < k and u >= cum[a]:
                    a += 1
                y[pi[g]] += a
                y[pj[g]] += k - a
            for p in range(n):
                s[p] = y[p]
            cpp_sort(s.begin(), s.end())
            mx = s[n - 1]
            if n == 1 or mx > s[n - 2]:
                unique += 1
            if <double>mx > y_threshold:
                exceed += 1
            tied = False
            p = n - 1
            while p >= 1 and <double>s[p] > y_threshold:
                if s[p] == s[p - 1]:
                    tied = True
                    break
                p -= 1
            if not tied:
                collision_free += 1

    return unique, exceed, collision_free
