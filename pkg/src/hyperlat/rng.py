"""Counter-based uniforms keyed by (seed, trial, vertex).

A splitmix64 finaliser is applied three times; the same arithmetic is written
once for numpy arrays and once for compiled kernels so both routes produce
identical bits.
"""

from __future__ import annotations

import numpy as np
from numba import njit

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
MASK64 = (1 << 64) - 1


def _mix_np(z: np.ndarray) -> np.ndarray:
    z = z + GOLDEN
    z = (z ^ (z >> np.uint64(30))) * M1
    z = (z ^ (z >> np.uint64(27))) * M2
    return z ^ (z >> np.uint64(31))


def trial_key(seed: int, trial: int) -> int:
    with np.errstate(over="ignore"):
        k = _mix_np(np.array([seed & MASK64], dtype=np.uint64))
        k = _mix_np(k + np.uint64(trial & MASK64))
    return int(k[0])


def uniforms(seed: int, trial: int, vertices) -> np.ndarray:
    """U[0,1) doubles for the given vertex indices."""
    v = np.asarray(vertices, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _mix_np(np.uint64(trial_key(seed, trial)) + v)
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


@njit(cache=True, inline="always")
def mix64(z):
    # keep every operand unsigned: int64 mixed with uint64 would promote to float
    z = np.uint64(z) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def trial_key_nb(seed, trial):
    return mix64(mix64(np.uint64(seed)) + np.uint64(trial))


@njit(cache=True, inline="always")
def uniform_nb(key, vertex):
    z = mix64(np.uint64(key) + np.uint64(vertex))
    return np.float64(z >> np.uint64(11)) * (1.0 / 9007199254740992.0)
