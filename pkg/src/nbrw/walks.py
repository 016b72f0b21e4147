"""Sampling the walk and the exact law of its random-bit consumption.

A length-l walk consumes log2(outdeg(e)) random bits at each of its first
l darts.  Bit totals are never handled as floating-point keys: a walk's
consumption is an integer vector counting how often each distinct
branching degree (> 1) was left, and bit values are reconstructed as
sum(count * log2(degree)) only at the edges of the API.

The exact distribution is a dynamic program over (dart, count vector)
with big-integer walk counts; each state's probability has the closed
form  count / (dart_count * prod(degree**count)).  Count polynomials are
packed into single big integers (fixed-width coefficient fields) so the
per-step shift-and-add runs at C speed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _rng
from ._kernels import get_kernel
from .graph import Graph, IrreducibilityVerdict, dart_transitions, is_nb_irreducible
from .operators import PreconditionError, _transition_structure


class CapabilityError(ValueError):
    """The exact distribution is limited to two distinct branching degrees."""


def _require_nb_irreducible(g: Graph) -> None:
    verdict = is_nb_irreducible(g)
    if verdict is not IrreducibilityVerdict.OK:
        raise PreconditionError(f"requires NB-irreducibility, got {verdict.value}")


def tracked_degrees(g: Graph) -> tuple[int, ...]:
    """Distinct branching degrees (outdeg > 1), ascending."""
    return tuple(sorted({g.out_degree(e) for e in range(g.dart_count)} - {1}))


@dataclass(frozen=True)
class WalkSample:
    """One sampled walk: darts e_0..e_l and the bits consumed by e_0..e_{l-1}."""

    darts: tuple[int, ...]
    bits: float


def sample_walk(g: Graph, length: int, seed: int, stream: int = 0) -> WalkSample:
    """Sample one stationary walk of ``length`` steps.

    The initial dart is uniform; every step picks uniformly among the
    non-backtracking continuations.  ``(seed, stream)`` fully determines
    the walk; batch sample number s of the same seed is ``stream=s``.
    """
    _require_nb_irreducible(g)
    if length < 0:
        raise ValueError("length must be non-negative")
    key = _rng.stream_key(seed, stream)
    e = _rng.draw(key, 0) % g.dart_count
    darts = [e]
    bits = 0.0
    for i in range(1, length + 1):
        succ = dart_transitions(g, e)
        d = len(succ)
        if d > 1:
            bits += math.log2(d)
            j = _rng.draw(key, i) % d
        else:
            j = 0
        e = succ[j]
        darts.append(e)
    return WalkSample(darts=tuple(darts), bits=bits)


@dataclass(frozen=True)
class BitStats:
    """Sample statistics of the total bit consumption of length-l walks.

    ``variance_of_bits`` is the unbiased sample variance of the total;
    ``standard_error_of_mean`` is the standard error of
    ``mean_bits_per_step``.
    """

    length: int
    sample_count: int
    mean_bits_per_step: float
    variance_of_bits: float
    standard_error_of_mean: float
    seed: int


class WalkBatch:
    """Result of a batch run: per-sample branch-count vectors.

    All statistics derive from exact integer aggregates of the count
    matrix, so they are identical for any worker count or engine.
    """

    def __init__(self, g: Graph, length: int, seed: int, degrees: tuple[int, ...],
                 counts: np.ndarray, end_darts: np.ndarray, engine: str):
        self.length = length
        self.seed = seed
        self.degrees = degrees
        self.counts = counts
        self.end_darts = end_darts
        self.engine = engine
        self.dart_count = g.dart_count

    @property
    def sample_count(self) -> int:
        return self.counts.shape[0]

    def bits_per_sample(self) -> np.ndarray:
        logs = np.log2(np.asarray(self.degrees, dtype=np.float64))
        return self.counts @ logs

    def bit_stats(self) -> BitStats:
        n = self.sample_count
        if n < 2:
            raise PreconditionError("variance needs at least 2 samples")
        logs = [math.log2(v) for v in self.degrees]
        s1 = [int(x) for x in self.counts.sum(axis=0)]
        m2 = self.counts.T.astype(np.int64) @ self.counts.astype(np.int64)
        total_bits = sum(l * s for l, s in zip(logs, s1))
        variance = 0.0
        for a, la in enumerate(logs):
            for b, lb in enumerate(logs):
                central = Fraction(n * int(m2[a, b]) - s1[a] * s1[b], n)
                variance += la * lb * float(central)
        variance /= n - 1
        mean_per_step = total_bits / n / self.length if self.length else 0.0
        sem = math.sqrt(max(variance, 0.0) / n) / self.length if self.length else 0.0
        return BitStats(
            length=self.length,
            sample_count=n,
            mean_bits_per_step=mean_per_step,
            variance_of_bits=max(variance, 0.0),
            standard_error_of_mean=sem,
            seed=self.seed,
        )

    def histogram(self) -> dict[tuple[int, ...], int]:
        """Occurrences of each branch-count vector."""
        uniq, counts = np.unique(self.counts, axis=0, return_counts=True)
        return {tuple(int(x) for x in row): int(c) for row, c in zip(uniq, counts)}

    def end_dart_counts(self) -> np.ndarray:
        return np.bincount(self.end_darts, minlength=self.dart_count)


def _walk_tables(g: Graph) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[int, ...]]:
    indptr, indices = _transition_structure(g)
    degrees = tracked_degrees(g)
    index_of = {v: i for i, v in enumerate(degrees)}
    value_index = np.full(g.dart_count, -1, dtype=np.int8)
    for e in range(g.dart_count):
        d = g.out_degree(e)
        if d > 1:
            value_index[e] = index_of[d]
    return indices.astype(np.int32), indptr.astype(np.int64), value_index, degrees


def run_walks(
    g: Graph,
    length: int,
    samples: int,
    seed: int,
    workers: int = 1,
    engine: str | None = None,
) -> WalkBatch:
    """Sample ``samples`` independent walks and collect branch counts.

    Sampling is embarrassingly parallel: sample s always uses stream s of
    the seed, and workers write disjoint slices, so the result does not
    depend on ``workers`` at all (it only affects speed).
    """
    _require_nb_irreducible(g)
    if length < 0:
        raise ValueError("length must be non-negative")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    succ_flat, succ_offsets, value_index, degrees = _walk_tables(g)
    counts = np.zeros((samples, len(degrees)), dtype=np.int64)
    end_darts = np.zeros(samples, dtype=np.int32)
    name, kernel = get_kernel(engine)

    bounds = np.linspace(0, samples, min(workers, samples) + 1, dtype=np.int64)
    chunks = [(int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]

    seed_word = seed & _rng.MASK64

    def run_chunk(lo: int, hi: int) -> None:
        kernel(seed_word, lo, length, succ_flat, succ_offsets, value_index,
               counts[lo:hi], end_darts[lo:hi])

    if len(chunks) == 1:
        run_chunk(*chunks[0])
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            list(pool.map(lambda c: run_chunk(*c), chunks))
    return WalkBatch(g, length, seed, degrees, counts, end_darts, engine=name)


def estimate_bit_stats(
    g: Graph, length: int, samples: int, seed: int, workers: int = 1, engine: str | None = None
) -> BitStats:
    """Unbiased mean/variance of total bit consumption over sampled walks."""
    if samples < 2:
        raise PreconditionError("variance estimation needs samples >= 2")
    return run_walks(g, length, samples, seed, workers=workers, engine=engine).bit_stats()


# --- exact distribution -------------------------------------------------------


@dataclass(frozen=True)
class ExactBitDistribution:
    """Exact law of the branch-count vector of a length-l stationary walk.

    ``probabilities`` maps each reachable count vector (one entry per
    tracked degree) to its exact probability.  Bit values follow as
    ``sum(count * log2(degree))``.
    """

    length: int
    degrees: tuple[int, ...]
    probabilities: dict[tuple[int, ...], Fraction]

    def bits_of(self, counts: tuple[int, ...]) -> float:
        return sum(c * math.log2(v) for c, v in zip(counts, self.degrees))

    def expected_counts(self) -> tuple[Fraction, ...]:
        """Exact expectation of each tracked degree's count."""
        totals = [Fraction(0)] * len(self.degrees)
        for counts, p in self.probabilities.items():
            for i, c in enumerate(counts):
                totals[i] += p * c
        return tuple(totals)

    def mean_bits(self) -> float:
        return sum(float(t) * math.log2(v) for t, v in zip(self.expected_counts(), self.degrees))

    def variance_bits(self) -> float:
        """Variance of the bit total, from exact count moments."""
        k = len(self.degrees)
        first = [Fraction(0)] * k
        second = [[Fraction(0)] * k for _ in range(k)]
        for counts, p in self.probabilities.items():
            for i, ci in enumerate(counts):
                first[i] += p * ci
                for j, cj in enumerate(counts):
                    second[i][j] += p * ci * cj
        logs = [math.log2(v) for v in self.degrees]
        var = 0.0
        for i in range(k):
            for j in range(k):
                var += logs[i] * logs[j] * float(second[i][j] - first[i] * first[j])
        return var

    def sorted_by_bits(self) -> list[tuple[tuple[int, ...], float, Fraction]]:
        rows = [(counts, self.bits_of(counts), p) for counts, p in self.probabilities.items()]
        rows.sort(key=lambda r: (r[1], r[0]))
        return rows

    def total_variation(self, histogram: dict[tuple[int, ...], int], samples: int) -> float:
        """Exact TV distance to an empirical count-vector histogram."""
        keys = set(self.probabilities) | set(histogram)
        tv = Fraction(0)
        for key in keys:
            empirical = Fraction(histogram.get(key, 0), samples)
            tv += abs(empirical - self.probabilities.get(key, Fraction(0)))
        return float(tv / 2)


def exact_bit_distribution(g: Graph, length: int) -> ExactBitDistribution:
    """Exact distribution of the branch-count vector by dynamic programming.

    Supports at most two distinct branching degrees (the state space is
    O(dart_count * length**k) for k tracked degrees); raises
    :class:`CapabilityError` beyond that.
    """
    _require_nb_irreducible(g)
    if length < 0:
        raise ValueError("length must be non-negative")
    degrees = tracked_degrees(g)
    k = len(degrees)
    if k > 2:
        raise CapabilityError(
            f"exact distribution supports at most 2 distinct branching degrees, graph has {k}: {degrees}"
        )

    n = g.dart_count
    # coefficient field width: walk counts never exceed n * dmax**length
    dmax = max(degrees)
    field_bits = int(length * math.log2(dmax)) + n.bit_length() + 8
    inner = length + 1  # positions per count axis
    shift_of_dart = []
    for e in range(n):
        d = g.out_degree(e)
        if d == 1:
            shift_of_dart.append(0)
        else:
            axis = degrees.index(d)
            # axis 0 is the outer dimension when k == 2
            pos = inner if (k == 2 and axis == 0) else 1
            shift_of_dart.append(pos * field_bits)

    preds: list[list[int]] = [[] for _ in range(n)]
    for e in range(n):
        for f in dart_transitions(g, e):
            preds[f].append(e)

    weights = [1] * n  # packed polynomial per dart, starts at count zero
    for _ in range(length):
        weights = [
            sum(weights[e] << shift_of_dart[e] for e in preds[f]) if preds[f] else 0
            for f in range(n)
        ]

    total = sum(weights)
    mask = (1 << field_bits) - 1
    probabilities: dict[tuple[int, ...], Fraction] = {}
    checksum = Fraction(0)
    if k == 1:
        for c in range(length + 1):
            coeff = (total >> (c * field_bits)) & mask
            if coeff:
                p = Fraction(coeff, n * degrees[0] ** c)
                probabilities[(c,)] = p
                checksum += p
    else:
        for c0 in range(length + 1):
            base = c0 * inner * field_bits
            for c1 in range(length + 1 - c0):
                coeff = (total >> (base + c1 * field_bits)) & mask
                if coeff:
                    p = Fraction(coeff, n * degrees[0] ** c0 * degrees[1] ** c1)
                    probabilities[(c0, c1)] = p
                    checksum += p
    if checksum != 1:
        raise RuntimeError("exact distribution does not sum to one; coefficient field overflow")
    return ExactBitDistribution(length=length, degrees=degrees, probabilities=probabilities)


# --- CSV ----------------------------------------------------------------------


def _merge_by_bit_value(degrees, entries):
    """Aggregate (counts, weight) pairs whose bit values coincide.

    Distinct count vectors can consume exactly the same number of bits
    (e.g. degrees 2 and 4: two 2-branches equal one 4-branch), so rows are
    keyed by the exact integer prod(degree**count); its log2 is the bit
    value, computed exactly even for huge products.
    """
    merged: dict[int, float] = {}
    for counts, weight in entries:
        key = 1
        for v, c in zip(degrees, counts):
            key *= v**c
        merged[key] = merged.get(key, 0.0) + weight
    return sorted((math.log2(key), weight) for key, weight in merged.items())


def distribution_csv(dist: ExactBitDistribution) -> str:
    """CSV of the exact distribution: bits_per_step,probability."""
    scale = dist.length if dist.length else 1
    entries = [(counts, float(p)) for counts, p in dist.probabilities.items()]
    lines = ["bits_per_step,probability"]
    for bits, p in _merge_by_bit_value(dist.degrees, entries):
        lines.append(f"{bits / scale:.12g},{p:.12g}")
    return "\n".join(lines) + "\n"


def histogram_csv(batch: WalkBatch) -> str:
    """CSV of the empirical bit distribution: bits_per_step,probability."""
    scale = batch.length if batch.length else 1
    n = batch.sample_count
    entries = [(counts, occurrences / n) for counts, occurrences in batch.histogram().items()]
    lines = ["bits_per_step,probability"]
    for bits, p in _merge_by_bit_value(batch.degrees, entries):
        lines.append(f"{bits / scale:.12g},{p:.12g}")
    return "\n".join(lines) + "\n"
