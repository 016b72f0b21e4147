# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled batch sampler for non-backtracking walks.

Mirrors nbrw._kernels.fallback step for step; both must produce identical
output for identical (seed, sample range, length).
"""

import numpy as np

cimport numpy as cnp
from libc.stdint cimport int8_t, int32_t, int64_t, uint64_t

cnp.import_array()

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t SEED_TWEAK = 0xD1B54A32D192ED03ULL


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def sample_counts(
    uint64_t seed,
    int64_t first_sample,
    int64_t length,
    cnp.ndarray[int32_t, ndim=1] succ_flat,
    cnp.ndarray[int64_t, ndim=1] succ_offsets,
    cnp.ndarray[int8_t, ndim=1] value_index,
    cnp.ndarray[int64_t, ndim=2] out_counts,
    cnp.ndarray[int32_t, ndim=1] out_end,
):
    """Walk ``out_counts.shape[0]`` samples, accumulating per-value branch
    counts and recording the final dart of each walk."""
    cdef int64_t n_samples = out_counts.shape[0]
    cdef int64_t n_darts = succ_offsets.shape[0] - 1
    cdef uint64_t key, u
    cdef int64_t s, i, e, d, j
    cdef int8_t vi
    cdef uint64_t run = mix64(seed * GOLDEN + SEED_TWEAK)

    with nogil:
        for s in range(n_samples):
            key = mix64(run + (<uint64_t> (first_sample + s) + 1) * GOLDEN)
            u = mix64(key + GOLDEN)  # step 0: initial dart
            e = <int64_t> (u % <uint64_t> n_darts)
            for i in range(1, length + 1):
                d = succ_offsets[e + 1] - succ_offsets[e]
                vi = value_index[e]
                if vi >= 0:
                    out_counts[s, vi] += 1
                if d > 1:
                    u = mix64(key + (<uint64_t> i + 1) * GOLDEN)
                    j = <int64_t> (u % <uint64_t> d)
                else:
                    j = 0
                e = succ_flat[succ_offsets[e] + j]
            out_end[s] = <int32_t> e
