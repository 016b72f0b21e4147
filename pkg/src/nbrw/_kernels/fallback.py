"""Vectorized numpy implementation of the walk-sampling kernel.

Bit-identical to the compiled kernel: draws come from the same
counter-based stream, successor choice is the same modulo reduction, and
uint64 arithmetic wraps exactly like the C version.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_SEED_TWEAK = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def sample_counts(seed, first_sample, length, succ_flat, succ_offsets, value_index, out_counts, out_end):
    with np.errstate(over="ignore"):  # uint64 wraparound is the whole point
        _sample_counts(seed, first_sample, length, succ_flat, succ_offsets, value_index, out_counts, out_end)


def _sample_counts(seed, first_sample, length, succ_flat, succ_offsets, value_index, out_counts, out_end):
    n_samples = out_counts.shape[0]
    n_darts = np.uint64(len(succ_offsets) - 1)
    run = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) * _GOLDEN + _SEED_TWEAK)
    streams = np.arange(first_sample, first_sample + n_samples, dtype=np.uint64)
    keys = _mix64(run + (streams + np.uint64(1)) * _GOLDEN)

    outdeg = np.diff(succ_offsets).astype(np.uint64)
    rows = np.arange(n_samples)

    u = _mix64(keys + _GOLDEN)
    cur = (u % n_darts).astype(np.int64)
    for i in range(1, int(length) + 1):
        d = outdeg[cur]
        vi = value_index[cur]
        counted = vi >= 0
        out_counts[rows[counted], vi[counted]] += 1
        u = _mix64(keys + np.uint64(i + 1) * _GOLDEN)
        j = (u % d).astype(np.int64)  # d == 1 gives j == 0, matching the scalar rule
        cur = succ_flat[succ_offsets[cur] + j].astype(np.int64)
    out_end[:] = cur.astype(np.int32)
