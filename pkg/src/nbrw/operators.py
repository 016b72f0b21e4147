"""Sparse operators on the dart set and their Perron eigenvalues.

Three operators share the same sparsity pattern (one row per dart, one
column per legal continuation):

* the 0/1 adjacency operator ``B`` of the dart-transition relation,
* the walk transition matrix ``P`` with row entries 1/outdeg(e),
* reweighted variants with entry ``P[e, f] * beta(e)`` for positive beta.

The interpolation ``M_t`` (entry-wise ``P**(1-t) * B**t``) is the beta
variant with ``beta(e) = outdeg(e)**t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .graph import Graph, IrreducibilityVerdict, dart_transitions, is_nb_irreducible


class PreconditionError(ValueError):
    """A graph does not satisfy an operation's stated precondition."""


class PowerIterationError(RuntimeError):
    """Power iteration failed to converge; carries the last bracket."""

    def __init__(self, message: str, last_estimate: float, iterations: int):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.iterations = iterations


@dataclass(frozen=True)
class NbOperator:
    """A sparse operator over darts together with its construction kind."""

    matrix: sp.csr_matrix
    kind: str

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def _transition_structure(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    """CSR (indptr, indices) of the dart-transition relation."""
    indptr = np.zeros(g.dart_count + 1, dtype=np.int64)
    indices: list[int] = []
    for e in range(g.dart_count):
        succ = dart_transitions(g, e)
        indptr[e + 1] = indptr[e] + len(succ)
        indices.extend(succ)
    return indptr, np.asarray(indices, dtype=np.int64)


def build_nb_matrix(g: Graph) -> NbOperator:
    """0/1 adjacency operator of the dart-transition relation."""
    if g.vertex_count == 0 or int(g.degrees.min()) < 2:
        raise PreconditionError("adjacency operator requires minimum degree >= 2")
    indptr, indices = _transition_structure(g)
    data = np.ones(len(indices), dtype=np.float64)
    m = sp.csr_matrix((data, indices, indptr), shape=(g.dart_count, g.dart_count))
    return NbOperator(matrix=m, kind="adjacency")


def build_transition_matrix(g: Graph) -> NbOperator:
    """Row-stochastic walk transition matrix (rows scaled by 1/outdeg)."""
    verdict = is_nb_irreducible(g)
    if verdict is not IrreducibilityVerdict.OK:
        raise PreconditionError(f"transition matrix requires NB-irreducibility, got {verdict.value}")
    indptr, indices = _transition_structure(g)
    outdeg = np.diff(indptr)
    data = np.repeat(1.0 / outdeg, outdeg)
    m = sp.csr_matrix((data, indices, indptr), shape=(g.dart_count, g.dart_count))
    return NbOperator(matrix=m, kind="transition")


def build_weighted_matrix(g: Graph, beta: np.ndarray) -> NbOperator:
    """Transition matrix with row e multiplied by beta(e) > 0."""
    beta = np.asarray(beta, dtype=np.float64)
    if beta.shape != (g.dart_count,):
        raise PreconditionError(f"beta must have one weight per dart ({g.dart_count})")
    if np.any(beta <= 0):
        raise PreconditionError("beta weights must be strictly positive")
    base = build_transition_matrix(g)
    m = sp.csr_matrix(base.matrix, copy=True)
    counts = np.diff(m.indptr)
    m.data *= np.repeat(beta, counts)
    return NbOperator(matrix=m, kind="weighted")


def interpolation_matrix(g: Graph, t: float) -> NbOperator:
    """Entry-wise interpolation between the transition matrix (t=0) and B (t=1)."""
    outdeg = g.out_degree_vector().astype(np.float64)
    return build_weighted_matrix(g, outdeg**t)


def stationary_distribution(g: Graph) -> np.ndarray:
    """Uniform distribution over darts, the walk's stationary law."""
    if g.dart_count == 0:
        raise PreconditionError("graph has no darts")
    return np.full(g.dart_count, 1.0 / g.dart_count)


@dataclass(frozen=True)
class PerronResult:
    value: float
    iterations: int
    rel_tol: float


def _as_matrix(op) -> sp.csr_matrix:
    if isinstance(op, NbOperator):
        return op.matrix
    if sp.issparse(op):
        return op.tocsr()
    return sp.csr_matrix(np.asarray(op, dtype=np.float64))


def perron(op, rel_tol: float = 1e-12, max_iter: int | None = None) -> PerronResult:
    """Largest eigenvalue of a non-negative irreducible operator.

    Power-iterates ``op + I`` (same Perron vector, spectrum shifted by one,
    which defeats the periodicity of subdivided graphs) and subtracts one
    from the result.  Convergence is certified by the min/max ratio bounds:
    for a positive iterate v, the Perron value of ``op + I`` always lies
    between min and max of ``((op + I) v) / v``, so the returned bracket
    midpoint has relative error <= rel_tol.

    Parameters
    ----------
    op : NbOperator, sparse matrix, or 2d array
    rel_tol : certified relative error bound of the result
    max_iter : iteration cap; defaults to ``100 n log n + 1000``

    Raises
    ------
    PowerIterationError
        If the bracket does not tighten within ``max_iter`` iterations; the
        exception carries the last midpoint estimate.
    """
    m = _as_matrix(op)
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise ValueError("operator must be square")
    if n == 0:
        raise ValueError("operator is empty")
    if max_iter is None:
        max_iter = int(100 * n * max(math.log(n), 1.0)) + 1000

    v = np.full(n, 1.0 / n)
    low = high = 0.0
    for iteration in range(1, max_iter + 1):
        w = m @ v + v
        ratios = w / v
        low = float(ratios.min())
        high = float(ratios.max())
        if high - low <= rel_tol * low:
            return PerronResult(value=(low + high) / 2.0 - 1.0, iterations=iteration, rel_tol=rel_tol)
        v = w / np.linalg.norm(w)
    raise PowerIterationError(
        f"no convergence to rel_tol={rel_tol} within {max_iter} iterations",
        last_estimate=(low + high) / 2.0 - 1.0,
        iterations=max_iter,
    )


def perron_value(op, rel_tol: float = 1e-12, max_iter: int | None = None) -> float:
    return perron(op, rel_tol=rel_tol, max_iter=max_iter).value


def cover_growth_rate(g: Graph, rel_tol: float = 1e-12) -> float:
    """Exponential growth rate of the universal covering tree.

    Equals the Perron eigenvalue of the dart adjacency operator; requires
    an NB-irreducible graph.
    """
    verdict = is_nb_irreducible(g)
    if verdict is not IrreducibilityVerdict.OK:
        raise PreconditionError(f"growth rate requires NB-irreducibility, got {verdict.value}")
    return perron_value(build_nb_matrix(g), rel_tol=rel_tol)


def count_nb_walks(g: Graph, dart_index: int, length: int) -> int:
    """Exact number of non-backtracking walks of ``length`` steps from a dart.

    Big-integer vector iteration: x <- B x starting from the all-ones
    vector, so the result never overflows.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    if not (0 <= dart_index < g.dart_count):
        raise ValueError("dart index out of range")
    succ = [dart_transitions(g, e) for e in range(g.dart_count)]
    x = [1] * g.dart_count
    for _ in range(length):
        x = [sum(x[f] for f in succ[e]) for e in range(g.dart_count)]
    return x[dart_index]


def enumerate_nb_walks(g: Graph, dart_index: int, length: int) -> int:
    """Count the same walks by explicit recursive enumeration.

    Independent of :func:`count_nb_walks` (no shared iteration); intended
    as a brute-force cross-check for small lengths, so it refuses
    length > 12.
    """
    if length < 0:
        raise ValueError("length must be non-negative")
    if length > 12:
        raise ValueError("enumeration is a desk-scale oracle; length must be <= 12")

    def walk(e: int, remaining: int) -> int:
        if remaining == 0:
            return 1
        total = 0
        head = int(g.dart_head[e])
        rev = int(g.dart_reverse[e])
        for f in g.out_darts(head):
            if f != rev:
                total += walk(f, remaining - 1)
        return total

    return walk(dart_index, length)
