"""Pure-Python/numpy kernels: fallback used when the compiled extension is
unavailable (or forced via UNIQMAX_FORCE_PURE=1).

Both backends implement the same two entry points with identical outputs:

``census_pass(k, n)``
    Exhaustive enumeration of all (k+1)^(n(n-1)/2) outcomes, aggregated
    into integer counts indexed by (sorted Y-score vector, payoff
    composition).  Counts are pure combinatorics: model probabilities are
    applied later, exactly, by the caller.

``mc_tally(k, n, cum, seed, rep_start, reps, y_threshold)``
    Monte Carlo pass over replications [rep_start, rep_start+reps) using
    the counter-based RNG; returns integer success counts for
    unique-maximum, threshold-exceedance and collision-freeness.
"""

from __future__ import annotations

import numpy as np

from ._rng import unit_block
from .models import game_pairs

name = "pure"

_MC_CHUNK = 4096


def composition_strides(k: int, m: int) -> list[int]:
    """Column stride per atom for the composition index (atom 0 is free)."""
    return [0] + [(m + 1) ** (a - 1) for a in range(1, k + 1)]


def census_pass(k: int, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Enumerate all outcomes for (k, n); see module docstring for outputs."""
    m = n * (n - 1) // 2
    pairs = game_pairs(n)
    ncols = (m + 1) ** k
    strides = composition_strides(k, m)
    max_y = k * (n - 1)

    # all digits start at 0: in game (i, j) player j receives k
    y = [k * j for j in range(n)]
    digits = [0] * m
    comp = 0
    census: dict[tuple[int, ...], np.ndarray] = {}
    marg = np.zeros((max_y + 1, ncols), dtype=np.int64)

    while True:
        key = tuple(sorted(y))
        row = census.get(key)
        if row is None:
            row = np.zeros(ncols, dtype=np.int64)
            census[key] = row
        row[comp] += 1
        marg[y[0], comp] += 1

        g = m - 1
        while g >= 0 and digits[g] == k:
            digits[g] = 0
            i, j = pairs[g]
            y[i] -= k
            y[j] += k
            comp -= strides[k]
            g -= 1
        if g < 0:
            break
        digits[g] += 1
        i, j = pairs[g]
        y[i] += 1
        y[j] -= 1
        a = digits[g]
        comp += strides[a] - strides[a - 1]

    keys = sorted(census)
    keys_arr = np.array(keys, dtype=np.int64).reshape(len(keys), n)
    rows = np.vstack([census[key] for key in keys])
    return keys_arr, rows, marg


def mc_tally(k: int, n: int, cum: np.ndarray, seed: int, rep_start: int,
             reps: int, y_threshold: float) -> tuple[int, int, int]:
    """Tally unique-max / exceed / collision-free counts over replications."""
    pairs = game_pairs(n)
    unique = exceed = collision_free = 0
    for start in range(rep_start, rep_start + reps, _MC_CHUNK):
        cnt = min(_MC_CHUNK, rep_start + reps - start)
        rep_ids = np.arange(start, start + cnt, dtype=np.uint64)
        scores = np.zeros((cnt, n), dtype=np.int64)
        for g, (i, j) in enumerate(pairs):
            u = unit_block(seed, rep_ids, g)
            a = np.searchsorted(cum, u, side="right").astype(np.int64)
            scores[:, i] += a
            scores[:, j] += k - a
        s = np.sort(scores, axis=1)
        mx = s[:, -1]
        if n == 1:
            unique += cnt
        else:
            unique += int(np.count_nonzero(mx > s[:, -2]))
        exceed += int(np.count_nonzero(mx > y_threshold))
        if n == 1:
            collision_free += cnt
        else:
            tied_above = (s[:, 1:] == s[:, :-1]) & (s[:, 1:] > y_threshold)
            collision_free += cnt - int(np.count_nonzero(tied_above.any(axis=1)))
    return unique, exceed, collision_free
