"""Undirected communication graphs with Metropolis mixing weights.

The mixing matrix is built with the Metropolis rule
``w_ij = 1 / (1 + max(d_i, d_j))`` for every edge, with each diagonal
entry absorbing the remaining row mass.  This yields a symmetric doubly
stochastic matrix on any connected undirected graph without global
coordination, which is why it is the default here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

# Row/column sums of the mixing matrix must match 1 this tightly.
STOCHASTIC_TOL = 1e-12


class TopologyError(ValueError):
    """Invalid graph input: bad size, bad edge, or disconnected graph."""


@dataclass(frozen=True)
class NetworkTopology:
    """An undirected graph together with its mixing matrix.

    Agent indices are 0-based.  Instances are immutable after
    construction and safe to share across threads.
    """

    n: int
    edges: frozenset
    neighbor_sets: tuple
    weights: np.ndarray

    def degree(self, i: int) -> int:
        return len(self.neighbor_sets[i])

    def neighbors(self, i: int) -> frozenset:
        return self.neighbor_sets[i]


def _normalize_edges(n: int, edges: Iterable) -> frozenset:
    out = set()
    for edge in edges:
        i, j = edge
        i, j = int(i), int(j)
        if not (0 <= i < n) or not (0 <= j < n):
            raise TopologyError(
                f"edge ({i}, {j}) has an endpoint outside [0, {n})"
            )
        if i == j:
            raise TopologyError(f"self-loop at node {i} is not allowed")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


def _neighbor_sets(n: int, edges: frozenset) -> tuple:
    nbrs = [set() for _ in range(n)]
    for i, j in edges:
        nbrs[i].add(j)
        nbrs[j].add(i)
    return tuple(frozenset(s) for s in nbrs)


def _is_connected(n: int, neighbor_sets: tuple) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for j in neighbor_sets[i]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    return len(seen) == n


def metropolis_weights(n: int, edges: frozenset, neighbor_sets: tuple) -> np.ndarray:
    """Metropolis weight matrix for the given edge set.

    Deterministic: edges are visited in sorted order, so two builds from
    the same input are bit-identical.
    """
    deg = [len(s) for s in neighbor_sets]
    w = np.zeros((n, n))
    for i, j in sorted(edges):
        w_ij = 1.0 / (1 + max(deg[i], deg[j]))
        w[i, j] = w_ij
        w[j, i] = w_ij
    for i in range(n):
        w[i, i] = 1.0 - w[i].sum()
    return w


def build_from_edge_list(n: int, edges: Iterable) -> NetworkTopology:
    """Build a Metropolis-weighted topology from an explicit edge list.

    Raises :class:`TopologyError` on invalid size, out-of-range
    endpoints, self-loops, or a disconnected graph.
    """
    if n < 1:
        raise TopologyError(f"agent count must be >= 1, got {n}")
    edge_set = _normalize_edges(n, edges)
    nbrs = _neighbor_sets(n, edge_set)
    if not _is_connected(n, nbrs):
        raise TopologyError("graph is disconnected")
    weights = metropolis_weights(n, edge_set, nbrs)
    return NetworkTopology(n=n, edges=edge_set, neighbor_sets=nbrs, weights=weights)


def build_complete(n: int) -> NetworkTopology:
    """Complete graph on ``n`` agents.

    With the Metropolis rule every off-diagonal weight is exactly 1/n,
    so the mixing step is plain averaging.
    """
    if n < 1:
        raise TopologyError(f"agent count must be >= 1, got {n}")
    edges = combinations(range(n), 2)
    return build_from_edge_list(n, edges)


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    deviation: float


@dataclass(frozen=True)
class ValidationReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())


def validate(topology: NetworkTopology) -> ValidationReport:
    """Report-only check of every topology invariant.

    Works on hand-corrupted instances too; each check records the worst
    observed deviation.
    """
    w = topology.weights
    n = topology.n
    ones = np.ones(n)

    row_dev = float(np.max(np.abs(w @ ones - ones)))
    col_dev = float(np.max(np.abs(ones @ w - ones)))
    sym_dev = float(np.max(np.abs(w - w.T)))
    neg_dev = float(max(0.0, -np.min(w)))

    off_graph = 0.0
    for i in range(n):
        for j in range(n):
            if i != j and (min(i, j), max(i, j)) not in topology.edges:
                off_graph = max(off_graph, abs(w[i, j]))

    connected = _is_connected(n, topology.neighbor_sets)

    checks = {
        "row_sums": CheckResult(row_dev <= STOCHASTIC_TOL, row_dev),
        "col_sums": CheckResult(col_dev <= STOCHASTIC_TOL, col_dev),
        "symmetry": CheckResult(sym_dev == 0.0, sym_dev),
        "nonnegative": CheckResult(neg_dev == 0.0, neg_dev),
        "off_graph_zeros": CheckResult(off_graph == 0.0, off_graph),
        "connected": CheckResult(connected, 0.0 if connected else 1.0),
    }
    return ValidationReport(checks=checks)
