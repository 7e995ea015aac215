"""Counter-based random number generation for reproducible sampling.

Every uniform draw is a pure function of (seed, replication, game): the
64-bit counter (rep << 32) | game is pushed through a SplitMix64-style
finalizer.  Replications therefore form independent substreams and results
do not depend on scheduling, chunking or worker count.  The compiled kernel
implements the identical arithmetic, so both backends produce bit-identical
streams.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
MIX_A = 0xBF58476D1CE4E5B9
MIX_B = 0x94D049BB133111EB
MAX_REPS = 1 << 32
MAX_GAMES = 1 << 32

_U53_SCALE = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finalizer (scalar)."""
    z &= MASK64
    z ^= z >> 30
    z = (z * MIX_A) & MASK64
    z ^= z >> 27
    z = (z * MIX_B) & MASK64
    z ^= z >> 31
    return z


def raw64(seed: int, rep: int, game: int) -> int:
    """64-bit output for one (seed, replication, game) cell."""
    counter = (rep << 32) | game
    return mix64((seed + (counter + 1) * GOLDEN) & MASK64)


def unit(seed: int, rep: int, game: int) -> float:
    """Uniform double in [0, 1) with 53 random bits."""
    return (raw64(seed, rep, game) >> 11) * _U53_SCALE


def unit_block(seed: int, reps: np.ndarray, game: int) -> np.ndarray:
    """Vectorized ``unit`` over an array of replication indices."""
    counter = (reps.astype(np.uint64) << np.uint64(32)) | np.uint64(game)
    z = (np.uint64(seed) + (counter + np.uint64(1)) * np.uint64(GOLDEN))
    z ^= z >> np.uint64(30)
    z *= np.uint64(MIX_A)
    z ^= z >> np.uint64(27)
    z *= np.uint64(MIX_B)
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * _U53_SCALE


def check_stream_bounds(reps: int, games: int) -> None:
    if reps >= MAX_REPS:
        raise ValueError(f"replication count {reps} exceeds stream limit {MAX_REPS}")
    if games >= MAX_GAMES:
        raise ValueError(f"game count {games} exceeds stream limit {MAX_GAMES}")


def cumulative_weights(probs_float: tuple[float, ...]) -> np.ndarray:
    """Inverse-CDF table over atoms a = 0..k; the last entry is pinned to 1.

    The payoff index for a uniform u is the first a with u < cum[a]; both
    backends use this table verbatim so atom selection is bit-identical.
    """
    cum = np.cumsum(np.asarray(probs_float, dtype=np.float64))
    cum[-1] = 1.0
    return cum
