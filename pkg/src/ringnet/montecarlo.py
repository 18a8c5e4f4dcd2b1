"""Sampling of the discrete random graphs behind the continuum formulas.

Nodes sit at unit spacing around a ring (or on a torus grid) and every
unordered pair is linked independently with the kernel probability at the
pair's wrapped angular distance.  This module draws such graphs
reproducibly and measures on them the quantities the analytic modules
predict: mean degree, pooled clustering, simple chain counts between two
pinned nodes, and the empirical distribution of the separation (shortest
path length minus one).

Reproducibility contract: the random value deciding a candidate pair is a
pure function of the sample seed and the pair's canonical position (offset
block times base node), realized with a counter-based bit generator that
skips directly to the pair block.  Trial seeds are derived from a master
seed and the trial index alone, and all aggregation runs in trial order,
so results are identical for any thread count.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .kernels import (
    KernelValidationError,
    ProductKernel,
    TWO_PI,
    validate,
)

# candidate-pair draws allowed per sample before sampling refuses to run
MAX_CANDIDATE_DRAWS = 1 << 26
# cells allowed in a dense transient adjacency matrix (bool, one byte each)
MAX_ADJACENCY_CELLS = 1 << 28
# index operations allowed in one three-intermediary chain count
MAX_CHAIN_OPS = 1 << 32


class CostBudgetError(Exception):
    """A sampling or counting request would exceed its cost budget."""

    def __init__(self, message: str, cost: int, budget: int):
        super().__init__(f"{message}: cost {cost} exceeds budget {budget}")
        self.cost = cost
        self.budget = budget


class EstimateUndefinedError(Exception):
    """The requested estimator has an empty denominator on every sample."""


class McEstimate(NamedTuple):
    """Sample mean with its standard error over independent trials."""

    mean: float
    std_error: float
    trials: int


@dataclass(frozen=True)
class GraphSample:
    """One realized random graph on ring- or torus-positioned nodes.

    ``edges`` is the canonical pair set: an (E, 2) integer array, each row
    an unordered pair stored as (low, high), rows sorted lexicographically.
    That representation is symmetric and self-loop free by construction.
    """

    shape: tuple[int, ...]
    seed: int
    edges: np.ndarray

    def __post_init__(self):
        shape = tuple(int(s) for s in self.shape)
        if not shape or any(s < 1 for s in shape):
            raise ValueError("node grid shape must be positive in every axis")
        if math.prod(shape) < 2:
            raise ValueError("a graph needs at least two nodes")
        edges = np.asarray(self.edges, dtype=np.int64)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValueError("edges must be an (E, 2) array")
        edges.setflags(write=False)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return math.prod(self.shape)

    def degrees(self) -> np.ndarray:
        """Per-node degree counts."""
        return np.bincount(self.edges.ravel(), minlength=self.n)


@dataclass(frozen=True)
class SeparationHistogram:
    """Distribution of the separation between two pinned nodes.

    ``counts[s]`` is the number of trials with separation s (a direct link
    is separation zero); the final bucket collects trials where the target
    was unreached or farther than ``max_sep``.
    """

    counts: tuple[int, ...]
    trials: int
    max_sep: int

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if len(counts) != self.max_sep + 2:
            raise ValueError("need one bucket per separation plus the unreached one")
        if sum(counts) != self.trials:
            raise ValueError("bucket counts must add up to the trial count")
        object.__setattr__(self, "counts", counts)

    def probabilities(self) -> tuple[float, ...]:
        """Bucket fractions; the unreached bucket absorbs rounding so the
        entries sum to exactly one."""
        head = [c / self.trials for c in self.counts[:-1]]
        return (*head, 1.0 - math.fsum(head))


def trial_seed(master_seed: int, trial_index: int) -> int:
    """Derived 64-bit seed of one trial, a pure function of its inputs."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(trial_index,))
    return int(seq.generate_state(1, np.uint64)[0])


def run_trials(worker, trials: int, master_seed: int, threads: int = 1) -> list:
    """Run ``worker(seed)`` once per trial and collect results in trial order.

    The per-trial seeds come from :func:`trial_seed`, and the ordered merge
    makes the output independent of the thread count.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    seeds = [trial_seed(master_seed, t) for t in range(trials)]
    if threads <= 1:
        return [worker(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, seeds))


# ---------------------------------------------------------------------------
# graph sampling
# ---------------------------------------------------------------------------

def _block_draws(seed: int, block_index: int, block_stride: int, count: int) -> np.ndarray:
    # uniform draws for one offset block; the counter skip puts the stream
    # at the block's reserved position, so a pair's random value depends
    # only on the seed and the pair's canonical index
    bits = np.random.Philox(key=np.uint64(seed))
    bits.advance(block_index * block_stride)
    return np.random.Generator(bits).random(count)


def _require_valid(kernel):
    problems = validate(kernel)
    if problems:
        raise KernelValidationError("; ".join(problems))


def _sample_ring(n: int, kernel, seed: int) -> GraphSample:
    offsets = np.arange(1, n // 2 + 1)
    probs = np.asarray(kernel.evaluate(TWO_PI * offsets / n))
    counts = np.where(2 * offsets == n, n // 2, n)
    active = probs > 0.0
    total = int(np.sum(counts[active]))
    if total > MAX_CANDIDATE_DRAWS:
        raise CostBudgetError("candidate pairs for this ring sample",
                              total, MAX_CANDIDATE_DRAWS)
    # counter stride per block, in 4-draw counter units
    stride = -(-n // 4)
    pieces = []
    for offset, prob, count in zip(offsets, probs, counts):
        if prob <= 0.0:
            continue
        draws = _block_draws(seed, int(offset) - 1, stride, int(count))
        hits = np.nonzero(draws < prob)[0]
        if hits.size:
            partner = (hits + offset) % n
            low = np.minimum(hits, partner)
            high = np.maximum(hits, partner)
            pieces.append(np.stack([low, high], axis=1))
    edges = (np.concatenate(pieces) if pieces
             else np.empty((0, 2), dtype=np.int64))
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return GraphSample((n,), seed, edges[order])


def _sample_torus(shape: Sequence[int], kernel: ProductKernel, seed: int) -> GraphSample:
    shape = tuple(int(s) for s in shape)
    total_nodes = math.prod(shape)
    # per-axis kernel values at every axis offset, combined into the link
    # probability of every offset vector (flattened mixed-radix order)
    axis_values = []
    for length, factor in zip(shape, kernel.factors):
        axis_offsets = np.arange(length)
        axis_values.append(np.asarray(factor.evaluate(TWO_PI * axis_offsets / length)))
    grid = np.ones((1,))
    for values in axis_values:
        grid = np.multiply.outer(grid, values)
    delta_probs = grid.reshape(-1)  # leading singleton folds away
    active_deltas = np.nonzero(delta_probs > 0.0)[0]
    active_deltas = active_deltas[active_deltas != 0]
    total = int(active_deltas.size) * total_nodes
    if total > MAX_CANDIDATE_DRAWS:
        raise CostBudgetError("candidate pairs for this torus sample",
                              total, MAX_CANDIDATE_DRAWS)
    # component tables for vectorized wrapped addition of an offset vector
    components = np.unravel_index(np.arange(total_nodes), shape)
    stride = -(-total_nodes // 4)
    pieces = []
    for delta in active_deltas:
        draws = _block_draws(seed, int(delta) - 1, stride, total_nodes)
        hits = np.nonzero(draws < delta_probs[delta])[0]
        if not hits.size:
            continue
        delta_components = np.unravel_index(int(delta), shape)
        shifted = [(components[axis][hits] + delta_components[axis]) % shape[axis]
                   for axis in range(len(shape))]
        partner = np.ravel_multi_index(shifted, shape)
        # each unordered pair shows up under an offset and its negation;
        # keeping source < partner picks exactly one of the two
        keep = hits < partner
        if np.any(keep):
            pieces.append(np.stack([hits[keep], partner[keep]], axis=1))
    edges = (np.concatenate(pieces) if pieces
             else np.empty((0, 2), dtype=np.int64))
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    return GraphSample(shape, seed, edges[order])


def sample_graph(shape, kernel, seed: int) -> GraphSample:
    """Draw one random graph; identical arguments give identical graphs.

    ``shape`` is a node count for the ring or a per-axis count sequence for
    a torus grid paired with a product kernel.
    """
    _require_valid(kernel)
    if np.ndim(shape) == 0:
        n = int(shape)
        if n < 2:
            raise ValueError("a graph needs at least two nodes")
        if isinstance(kernel, ProductKernel):
            raise ValueError("a ring sample needs a one-dimensional kernel")
        return _sample_ring(n, kernel, seed)
    shape = tuple(int(s) for s in shape)
    if len(shape) == 1:
        if isinstance(kernel, ProductKernel):
            raise ValueError("a ring sample needs a one-dimensional kernel")
        return _sample_ring(shape[0], kernel, seed)
    if not isinstance(kernel, ProductKernel) or len(kernel.factors) != len(shape):
        raise ValueError("a torus sample needs a product kernel with one "
                         "factor per grid axis")
    return _sample_torus(shape, kernel, seed)


# ---------------------------------------------------------------------------
# per-sample measurements
# ---------------------------------------------------------------------------

def _neighbor_lists(sample: GraphSample) -> list:
    edges = sample.edges
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((dst, src))
    src = src[order]
    dst = dst[order]
    starts = np.searchsorted(src, np.arange(sample.n + 1))
    return [dst[starts[i]:starts[i + 1]] for i in range(sample.n)]


def _dense_adjacency(sample: GraphSample) -> np.ndarray:
    n = sample.n
    if n * n > MAX_ADJACENCY_CELLS:
        raise CostBudgetError("dense adjacency for this graph",
                              n * n, MAX_ADJACENCY_CELLS)
    dense = np.zeros((n, n), dtype=bool)
    edges = sample.edges
    dense[edges[:, 0], edges[:, 1]] = True
    dense[edges[:, 1], edges[:, 0]] = True
    return dense


def _clustering_counts(sample: GraphSample) -> tuple[int, int]:
    # pooled numerator and denominator: linked neighbour pairs and all
    # neighbour pairs, summed over nodes of degree two or more
    dense = _dense_adjacency(sample)
    neighbors = _neighbor_lists(sample)
    linked = 0
    pairs = 0
    for node_neighbors in neighbors:
        degree = node_neighbors.size
        if degree < 2:
            continue
        pairs += degree * (degree - 1) // 2
        block = dense[np.ix_(node_neighbors, node_neighbors)]
        linked += int(np.count_nonzero(block)) // 2
    return linked, pairs


def _reduce_clustering(counts: Iterable[tuple[int, int]]) -> McEstimate:
    counts = list(counts)
    linked_total = 0
    pairs_total = 0
    ratios = []
    for linked, pairs in counts:
        linked_total += linked
        pairs_total += pairs
        if pairs:
            ratios.append(linked / pairs)
    if pairs_total == 0:
        raise EstimateUndefinedError(
            "no node with two neighbours in any sample; clustering undefined")
    mean = linked_total / pairs_total
    if len(ratios) > 1:
        std_error = float(np.std(ratios, ddof=1) / math.sqrt(len(ratios)))
    else:
        std_error = 0.0
    return McEstimate(float(mean), std_error, len(counts))


def empirical_clustering(samples: Iterable[GraphSample]) -> McEstimate:
    """Pooled clustering over a stream of samples.

    The mean is the pooled ratio (all linked neighbour pairs over all
    neighbour pairs, across every node and sample); the standard error
    comes from treating each sample's own ratio as a batch.
    """
    return _reduce_clustering(_clustering_counts(s) for s in samples)


def _chain_endpoints(sample: GraphSample, offset: int, anchor: int):
    n = sample.n
    if not 0 < offset <= n // 2:
        raise ValueError("offset must lie in (0, n/2]")
    source = anchor % n
    target = (anchor + offset) % n
    return source, target


def chain_count_in_sample(sample: GraphSample, offset: int, k: int,
                          anchor: int = 0) -> int:
    """Number of simple k-intermediary chains between two pinned nodes.

    The endpoints are ``anchor`` and ``anchor + offset`` (wrapped); the
    intermediaries are pairwise distinct and avoid both endpoints.
    """
    if k not in (1, 2, 3):
        raise ValueError("chain counting supports 1, 2, or 3 intermediaries")
    source, target = _chain_endpoints(sample, offset, anchor)
    dense = _dense_adjacency(sample)
    if k == 1:
        return int(np.count_nonzero(dense[source] & dense[target]))
    near_source = np.nonzero(dense[source])[0]
    near_source = near_source[near_source != target]
    near_target = np.nonzero(dense[target])[0]
    near_target = near_target[near_target != source]
    if near_source.size == 0 or near_target.size == 0:
        return 0
    if k == 2:
        block = dense[np.ix_(near_source, near_target)]
        # the adjacency diagonal is empty, so equal intermediaries drop out
        return int(np.count_nonzero(block))
    cost = near_source.size * sample.n * near_target.size
    if cost > MAX_CHAIN_OPS:
        raise CostBudgetError("three-intermediary chain count", cost, MAX_CHAIN_OPS)
    rows_source = dense[near_source].astype(np.int64)
    rows_target = dense[near_target].astype(np.int64)
    common = np.einsum("ij,kj->ik", rows_source, rows_target, optimize=False)
    # middles running through an endpoint are not chains
    common -= np.outer(rows_source[:, source], rows_target[:, source])
    common -= np.outer(rows_source[:, target], rows_target[:, target])
    # first and last intermediary must differ
    common[np.equal.outer(near_source, near_target)] = 0
    return int(common.sum())


def _reduce_counts(values: Iterable[int]) -> McEstimate:
    values = np.asarray(list(values), dtype=float)
    mean = float(np.mean(values))
    if values.size > 1:
        std_error = float(np.std(values, ddof=1) / math.sqrt(values.size))
    else:
        std_error = 0.0
    return McEstimate(mean, std_error, int(values.size))


def empirical_chain_count(samples: Iterable[GraphSample], offset: int, k: int,
                          anchor: int = 0) -> McEstimate:
    """Mean simple chain count over a stream of samples."""
    return _reduce_counts(chain_count_in_sample(s, offset, k, anchor)
                          for s in samples)


def separation_in_sample(sample: GraphSample, offset: int, max_sep: int,
                         anchor: int = 0):
    """Separation between the pinned nodes, or None when unreached.

    Separation is the shortest path length minus one, so a direct link is
    zero.  The search stops past ``max_sep``, returning None.
    """
    source, target = _chain_endpoints(sample, offset, anchor)
    neighbors = _neighbor_lists(sample)
    limit = max_sep + 1  # path length cap
    distance = np.full(sample.n, -1, dtype=np.int64)
    distance[source] = 0
    frontier = deque([source])
    while frontier:
        node = frontier.popleft()
        depth = distance[node]
        if depth >= limit:
            break
        for neighbor in neighbors[node]:
            if distance[neighbor] < 0:
                if neighbor == target:
                    return int(depth)  # path length depth + 1, separation depth
                distance[neighbor] = depth + 1
                frontier.append(neighbor)
    return None


def _reduce_separations(separations: Iterable, max_sep: int) -> SeparationHistogram:
    counts = [0] * (max_sep + 2)
    trials = 0
    for sep in separations:
        trials += 1
        if sep is None or sep > max_sep:
            counts[-1] += 1
        else:
            counts[sep] += 1
    return SeparationHistogram(tuple(counts), trials, max_sep)


def empirical_separation_histogram(samples: Iterable[GraphSample], offset: int,
                                   max_sep: int, anchor: int = 0) -> SeparationHistogram:
    """Histogram of the separation over a stream of samples."""
    if max_sep < 0:
        raise ValueError("max_sep must be non-negative")
    return _reduce_separations(
        (separation_in_sample(s, offset, max_sep, anchor) for s in samples),
        max_sep)


# ---------------------------------------------------------------------------
# trial drivers (sampling and measuring fused, thread friendly)
# ---------------------------------------------------------------------------

def estimate_mean_degree(shape, kernel, trials: int, master_seed: int,
                         threads: int = 1) -> McEstimate:
    """Mean degree over freshly sampled trials."""
    def worker(seed):
        sample = sample_graph(shape, kernel, seed)
        return 2.0 * sample.edges.shape[0] / sample.n

    return _reduce_counts(run_trials(worker, trials, master_seed, threads))


def estimate_clustering(shape, kernel, trials: int, master_seed: int,
                        threads: int = 1) -> McEstimate:
    """Pooled clustering over freshly sampled trials."""
    def worker(seed):
        return _clustering_counts(sample_graph(shape, kernel, seed))

    return _reduce_clustering(run_trials(worker, trials, master_seed, threads))


def estimate_chain_count(shape, kernel, offset: int, k: int, trials: int,
                         master_seed: int, threads: int = 1,
                         anchor: int = 0) -> McEstimate:
    """Mean simple chain count over freshly sampled trials."""
    def worker(seed):
        return chain_count_in_sample(sample_graph(shape, kernel, seed),
                                     offset, k, anchor)

    return _reduce_counts(run_trials(worker, trials, master_seed, threads))


def estimate_separation_histogram(shape, kernel, offset: int, max_sep: int,
                                  trials: int, master_seed: int,
                                  threads: int = 1,
                                  anchor: int = 0) -> SeparationHistogram:
    """Separation histogram over freshly sampled trials."""
    if max_sep < 0:
        raise ValueError("max_sep must be non-negative")

    def worker(seed):
        return separation_in_sample(sample_graph(shape, kernel, seed),
                                    offset, max_sep, anchor)

    return _reduce_separations(run_trials(worker, trials, master_seed, threads),
                               max_sep)
