"""Numerical quadrature and exact discrete oracles.

This module deliberately avoids the series machinery in :mod:`ringnet.fourier`
so that its results can serve as an independent cross-check.  It offers

* a periodic integrator over [-pi, pi] that splits the domain at kernel
  discontinuities (composite Gauss-Legendre panels) and switches to an
  equispaced rule when the integrand is smooth,
* chain and clustering integrals for circle and torus models, evaluated by
  nested one-dimensional quadrature so that panel edges can track the
  discontinuities introduced by shifted kernel factors, and
* exact expected chain counts on a finite ring of equally spaced nodes,
  obtained by brute-force summation over intermediate nodes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .kernels import (CircleModel, ProductKernel, TorusModel, TWO_PI,
                      mean_degree, wrap_angle)

DEFAULT_TOL = 1e-9
DEFAULT_TORUS_TOL = 1e-6

_GAUSS_ORDERS = (4, 8, 16, 32, 64, 128, 256, 512)
_SMOOTH_COUNTS = (32, 64, 128, 256, 512, 1024, 2048, 4096, 8192)


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    ``achieved`` carries the best error estimate reached before giving up.
    """

    def __init__(self, message, achieved=None, evaluations=0):
        super().__init__(message)
        self.achieved = achieved
        self.evaluations = evaluations


class BudgetError(ValueError):
    """A discrete computation would exceed its configured size budget."""


@dataclass(frozen=True)
class IntegrationResult:
    """Value of an integral with an error estimate and evaluation count."""

    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class ChainCounts:
    """Expected chain counts between two ring nodes.

    ``reduced`` sums the plain product of link probabilities along the chain;
    ``with_exclusion`` additionally multiplies the non-link factors that make
    the chain the shortest connection (available for one or two
    intermediaries, ``None`` otherwise).
    """

    reduced: float
    with_exclusion: float | None


# ---------------------------------------------------------------------------
# node/weight construction
# ---------------------------------------------------------------------------

def _inner_breaks(breakpoints):
    """Sorted unique breakpoints strictly inside (-pi, pi)."""
    if len(breakpoints) == 0:
        return []
    wrapped = np.atleast_1d(wrap_angle(np.asarray(breakpoints, dtype=float)))
    inside = wrapped[(wrapped > -math.pi + 1e-13) & (wrapped < math.pi - 1e-13)]
    if inside.size == 0:
        return []
    ordered = np.sort(inside)
    keep = np.concatenate([[True], np.diff(ordered) > 1e-12])
    return list(ordered[keep])


def _panel_rule(breaks, level):
    """Nodes and weights over [-pi, pi] for refinement ``level``.

    With interior breakpoints the rule is composite Gauss-Legendre on the
    panels between consecutive breakpoints; without any it is the equispaced
    midpoint rule, which converges spectrally for smooth periodic integrands.
    """
    if breaks:
        order = _GAUSS_ORDERS[min(level, len(_GAUSS_ORDERS) - 1)]
        base_x, base_w = np.polynomial.legendre.leggauss(order)
        edges = np.array([-math.pi, *breaks, math.pi])
        nodes, weights = [], []
        for left, right in zip(edges[:-1], edges[1:]):
            half = 0.5 * (right - left)
            nodes.append(0.5 * (left + right) + half * base_x)
            weights.append(half * base_w)
        return np.concatenate(nodes), np.concatenate(weights)
    count = _SMOOTH_COUNTS[min(level, len(_SMOOTH_COUNTS) - 1)]
    step = TWO_PI / count
    nodes = -math.pi + step * (np.arange(count) + 0.5)
    return nodes, np.full(count, step)


def integrate_periodic(f, breakpoints=(), tol=DEFAULT_TOL, max_evaluations=2_000_000):
    """Integrate ``f`` over one period [-pi, pi].

    Parameters
    ----------
    f : callable
        Vectorised integrand; called with an array of angles, must return an
        array of the same length.
    breakpoints : sequence of float
        Angles where the integrand is not smooth.  They are wrapped into the
        period and used as panel edges.
    tol : float
        Absolute tolerance on the result.  Refinement stops once two
        successive rules agree to within ``tol``.
    max_evaluations : int
        Budget on the total number of integrand evaluations.

    Returns
    -------
    IntegrationResult

    Raises
    ------
    QuadratureError
        If the tolerance is not reached within the evaluation budget; the
        error carries the tolerance actually achieved.
    """
    breaks = _inner_breaks(breakpoints)
    evaluations = 0
    previous = None
    difference = math.inf
    for level in range(len(_SMOOTH_COUNTS)):
        nodes, weights = _panel_rule(breaks, level)
        if evaluations + nodes.size > max_evaluations:
            break
        values = np.asarray(f(nodes), dtype=float)
        evaluations += nodes.size
        current = float(np.sum(weights * values))
        if previous is not None:
            difference = abs(current - previous)
            if difference <= tol:
                return IntegrationResult(current, difference, evaluations)
        previous = current
    raise QuadratureError(
        f"periodic integral did not converge to {tol:.1e}",
        achieved=difference, evaluations=evaluations)


# ---------------------------------------------------------------------------
# chain and clustering integrals
# ---------------------------------------------------------------------------

def _axis_data(model):
    """Per-axis (radius, kernel) pairs for a circle or torus model."""
    if isinstance(model, CircleModel):
        return [(model.radius, model.kernel)]
    if isinstance(model, TorusModel):
        return list(zip(model.radii, model.kernel.factors))
    raise TypeError(f"not a network model: {model!r}")


def _derived_breaks(base, shifts):
    """Breakpoint candidates: every base point offset by every shift."""
    out = set()
    for shift in shifts:
        for point in [*base, 0.0]:
            out.add(float(wrap_angle(point + shift)))
            out.add(float(wrap_angle(-point + shift)))
    return sorted(out)


def _axis_rule(kernel, extra_shifts, level):
    base = list(kernel.breakpoints())
    breaks = _inner_breaks(_derived_breaks(base, extra_shifts)) if base else []
    return _panel_rule(breaks, level)


def _grid(axes_rules):
    """Tensor grid from per-axis (nodes, weights): points (N, K), weights (N,)."""
    meshes = np.meshgrid(*[r[0] for r in axes_rules], indexing="ij")
    points = np.stack([m.ravel() for m in meshes], axis=-1)
    wmeshes = np.meshgrid(*[r[1] for r in axes_rules], indexing="ij")
    weights = np.ones(points.shape[0])
    for wm in wmeshes:
        weights = weights * wm.ravel()
    return points, weights


def _eval_axes(axes, offsets_points):
    """Product of per-axis kernel values at an (N, K) array of angle vectors."""
    values = np.ones(offsets_points.shape[0])
    for axis_index, (_, kernel) in enumerate(axes):
        values = values * kernel.evaluate(offsets_points[:, axis_index])
    return values


def _check_chain_order(k):
    if k not in (1, 2):
        raise ValueError(f"chain quadrature supports 1 or 2 intermediaries, got {k}")


def chain_count_by_quadrature(model, k, gap, with_exclusion=False, tol=None):
    """Expected k-intermediary chain count between nodes a fixed distance apart.

    Parameters
    ----------
    model : CircleModel or TorusModel
        Geometry and kernel.  For a torus, ``gap`` is a per-axis sequence of
        angular separations.
    k : int
        Number of intermediaries along the chain (1 or 2).
    gap : float or sequence of float
        Angular separation of the two endpoint nodes.
    with_exclusion : bool
        If true, include the non-link factors that mark the chain as the
        shortest connection: no direct link between the endpoints and, for
        two intermediaries, no skip links past either one.
    tol : float
        Absolute tolerance passed to the nested integrations; defaults to
        1e-9 for circles and 1e-6 for tori.

    Returns
    -------
    float
        The expected chain count.  Reduced values (``with_exclusion=False``)
        are plain expectations and may exceed 1.
    """
    _check_chain_order(k)
    axes = _axis_data(model)
    dim = len(axes)
    if tol is None:
        tol = DEFAULT_TOL if dim == 1 else DEFAULT_TORUS_TOL
    gaps = np.atleast_1d(np.asarray(gap, dtype=float))
    if gaps.shape[0] != dim:
        raise ValueError(f"expected {dim} gap components, got {gaps.shape[0]}")
    if with_exclusion and dim > 1:
        raise ValueError("exclusion factors do not factorise over torus axes; "
                         "they are supported for circle models only")

    # the integrand factorises over the axes, so each axis is integrated on
    # its own and the results multiplied (cross-check: the *_torus_grid
    # routines evaluate the same integrals without factorising)
    value = 1.0
    for (radius, kernel), axis_gap in zip(axes, gaps):
        single = [(radius, kernel)]
        if k == 1:
            # the only exclusion factor for one intermediary is the
            # direct-link term applied below; the integrand is unchanged
            integral = _integral_one_intermediate(single, np.array([axis_gap]), tol)
        else:
            integral = _integral_two_intermediates(
                single, np.array([axis_gap]), with_exclusion, tol)
        value *= radius ** k * integral
    if with_exclusion:
        direct = _eval_axes(axes, gaps[None, :])[0]
        value = value * (1.0 - direct)
    return value


def _converge(value_at, tol, label, levels=6):
    previous = None
    difference = None
    for level in range(levels):
        value = value_at(level)
        if previous is not None:
            difference = abs(value - previous)
            if difference <= tol:
                return value
        previous = value
    raise QuadratureError(f"{label} did not converge to {tol:.1e}", achieved=difference)


def _integral_one_intermediate(axes, gaps, tol):
    # integral over x of Q(x) * Q(gap - x)
    def value_at(level):
        rules = [_axis_rule(kern, [0.0, g], level) for (_, kern), g in zip(axes, gaps)]
        points, weights = _grid(rules)
        integrand = _eval_axes(axes, points) * _eval_axes(axes, gaps[None, :] - points)
        return float(np.sum(weights * integrand))

    return _converge(value_at, tol, "one-intermediate chain integral")


def _integral_two_intermediates(axes, gaps, with_exclusion, tol):
    # Iterated integral over x, y of Q(x) Q(y-x) Q(gap-y) [1-Q(y)] [1-Q(x-gap)],
    # the bracketed factors only when exclusions are requested.  The inner
    # level runs at the same refinement level as the outer one; convergence
    # is judged on the composed value, so both resolutions double together.
    def inner(x_vec, level):
        rules = [_axis_rule(kern, [0.0, g, xv], level)
                 for (_, kern), g, xv in zip(axes, gaps, x_vec)]
        points, weights = _grid(rules)
        integrand = (_eval_axes(axes, points - x_vec[None, :])
                     * _eval_axes(axes, gaps[None, :] - points))
        if with_exclusion:
            integrand = integrand * (1.0 - _eval_axes(axes, points))
        return float(np.sum(weights * integrand))

    def value_at(level):
        # the composed outer integrand changes slope wherever a moving edge
        # of the inner window crosses a fixed break, so the outer panel
        # edges are the sumset of the fixed breaks with the window edges
        rules = [_axis_rule(kern,
                            _derived_breaks(list(kern.breakpoints()), [0.0, g]),
                            level)
                 for (_, kern), g in zip(axes, gaps)]
        points, weights = _grid(rules)
        outer_factor = _eval_axes(axes, points)
        if with_exclusion:
            outer_factor = outer_factor * (1.0 - _eval_axes(axes, points - gaps[None, :]))
        total = 0.0
        for point, weight, factor in zip(points, weights, outer_factor):
            if factor == 0.0 or weight == 0.0:
                continue
            total += weight * factor * inner(point, level)
        return total

    return _converge(value_at, tol, "two-intermediate chain integral")


def clustering_by_quadrature(model, tol=None, anchor=0.0):
    """Mean clustering coefficient by direct integration.

    Integrates the product of the three link probabilities around a triangle
    with one vertex pinned at ``anchor``, divided by the squared mean degree.
    For a torus model the integral factorises over the axes; the factorised
    product is what is returned (see :func:`clustering_torus_grid` for the
    unfactorised cross-check).
    """
    axes = _axis_data(model)
    if tol is None:
        tol = DEFAULT_TOL if len(axes) == 1 else DEFAULT_TORUS_TOL
    degree = mean_degree(model)
    if degree == 0.0:
        raise ValueError("mean degree is zero; clustering is undefined")
    value = 1.0
    for radius, kernel in axes:
        triangle = _triangle_integral_axis(kernel, tol, anchor)
        axis_degree = mean_degree(CircleModel(radius, kernel))
        value *= radius ** 2 * triangle / axis_degree ** 2
    return value


def _triangle_integral_axis(kernel, tol, anchor=0.0):
    # iterated integral over x, y of Q(x - anchor) Q(y - x) Q(y - anchor);
    # inner refinement is locked to the outer level, see
    # _integral_two_intermediates for the rationale
    def inner(x, level):
        nodes, weights = _axis_rule(kernel, [anchor, x], level)
        integrand = kernel.evaluate(nodes - x) * kernel.evaluate(nodes - anchor)
        return float(np.sum(weights * integrand))

    def value_at(level):
        base = list(kernel.breakpoints())
        shifts = [anchor] + [anchor + 2.0 * b for b in base]
        nodes, weights = _axis_rule(kernel, shifts, level)
        outer_factor = kernel.evaluate(nodes - anchor)
        total = 0.0
        for node, weight, factor in zip(nodes, weights, outer_factor):
            if factor == 0.0:
                continue
            total += weight * factor * inner(node, level)
        return total

    return _converge(value_at, tol, "triangle integral")


# ---------------------------------------------------------------------------
# unfactorised torus grids
# ---------------------------------------------------------------------------

def clustering_torus_grid(model, tol=DEFAULT_TORUS_TOL):
    """Clustering coefficient on a torus without factorising the integrand.

    Evaluates the full 2K-dimensional triangle integral on nested tensor
    grids (outer grid over the first triangle corner, inner grid over the
    second, with panel edges tracking the shifted kernel windows) and divides
    by the squared mean degree.  Serves as the cross-check for the factorised
    route in :func:`clustering_by_quadrature`.
    """
    if not isinstance(model, TorusModel):
        raise TypeError("clustering_torus_grid expects a torus model")
    axes = _axis_data(model)
    kernel = model.kernel
    degree = mean_degree(model)
    if degree == 0.0:
        raise ValueError("mean degree is zero; clustering is undefined")

    def inner(x_vec, level):
        rules = [_axis_rule(kern, [0.0, xv], level)
                 for (_, kern), xv in zip(axes, x_vec)]
        points, weights = _grid(rules)
        integrand = kernel.evaluate(points - x_vec[None, :]) * kernel.evaluate(points)
        return float(np.sum(weights * integrand))

    def value_at(level):
        rules = []
        for (_, kern) in axes:
            base = list(kern.breakpoints())
            rules.append(_axis_rule(kern, [0.0] + [2.0 * b for b in base], level))
        points, weights = _grid(rules)
        outer_factor = kernel.evaluate(points)
        total = 0.0
        for point, weight, factor in zip(points, weights, outer_factor):
            if factor == 0.0:
                continue
            total += weight * factor * inner(point, level)
        return total

    integral = _converge(value_at, tol, "torus triangle grid")
    radius_sq = float(np.prod([r for r, _ in axes])) ** 2
    return radius_sq * integral / degree ** 2


def chain_count_torus_grid(model, k, gaps, tol=DEFAULT_TORUS_TOL):
    """Reduced chain count on a torus by unfactorised tensor-grid quadrature.

    Same quantity as :func:`chain_count_by_quadrature` with
    ``with_exclusion=False``, but the kernel is always evaluated as a whole
    on full K-dimensional grids, so the result does not reuse the per-axis
    factorisation and can cross-check it.
    """
    if not isinstance(model, TorusModel):
        raise TypeError("chain_count_torus_grid expects a torus model")
    _check_chain_order(k)
    axes = _axis_data(model)
    kernel = model.kernel
    gaps = np.atleast_1d(np.asarray(gaps, dtype=float))
    if gaps.shape[0] != len(axes):
        raise ValueError(f"expected {len(axes)} gap components, got {gaps.shape[0]}")

    if k == 1:
        def value_at(level):
            rules = [_axis_rule(kern, [0.0, g], level)
                     for (_, kern), g in zip(axes, gaps)]
            points, weights = _grid(rules)
            integrand = kernel.evaluate(points) * kernel.evaluate(gaps[None, :] - points)
            return float(np.sum(weights * integrand))
    else:
        def inner(x_vec, level):
            rules = [_axis_rule(kern, [0.0, g, xv], level)
                     for (_, kern), g, xv in zip(axes, gaps, x_vec)]
            points, weights = _grid(rules)
            integrand = (kernel.evaluate(points - x_vec[None, :])
                         * kernel.evaluate(gaps[None, :] - points))
            return float(np.sum(weights * integrand))

        def value_at(level):
            # outer panel edges: sumset of the inner integrand's fixed
            # breaks with the moving window edges, per axis (see
            # _integral_two_intermediates)
            rules = [_axis_rule(kern,
                                _derived_breaks(list(kern.breakpoints()), [0.0, g]),
                                level)
                     for (_, kern), g in zip(axes, gaps)]
            points, weights = _grid(rules)
            outer_factor = kernel.evaluate(points)
            total = 0.0
            for point, weight, factor in zip(points, weights, outer_factor):
                if factor == 0.0:
                    continue
                total += weight * factor * inner(point, level)
            return total

    integral = _converge(value_at, tol, "torus chain grid")
    radius_factor = float(np.prod([r for r, _ in axes])) ** k
    return radius_factor * integral


# ---------------------------------------------------------------------------
# exact discrete oracles
# ---------------------------------------------------------------------------

def discrete_mean_degree(n, kernel):
    """Exact expected degree on a ring of ``n`` equally spaced nodes."""
    if n < 2:
        raise ValueError("need at least two nodes")
    offsets = np.arange(1, n // 2 + 1)
    probabilities = np.atleast_1d(kernel.evaluate(TWO_PI * offsets / n))
    multiplicity = np.full(offsets.shape, 2.0)
    if n % 2 == 0:
        multiplicity[-1] = 1.0  # the antipodal node pairs up only once
    return float(np.sum(multiplicity * probabilities))


def discrete_chain_count(n, kernel, k, offset, max_nodes=4096):
    """Exact expected chain counts between ring nodes 0 and ``offset``.

    Sums the product of link probabilities over all ordered tuples of
    distinct intermediate nodes (excluding both endpoints) on a ring of
    ``n`` equally spaced nodes.  For one or two intermediaries the variant
    with exclusion factors (no endpoint link; for two intermediaries also no
    skip links) is returned alongside; for three intermediaries only the
    reduced count is available.

    The two- and three-intermediary counts build an n-by-n matrix of link
    probabilities; ``max_nodes`` bounds ``n`` to keep memory in check.
    """
    if n < 3:
        raise ValueError("need at least three nodes")
    if not 1 <= offset < n:
        raise ValueError(f"offset must be in [1, n), got {offset}")
    if k not in (1, 2, 3):
        raise ValueError(f"supported chain lengths have 1-3 intermediaries, got {k}")
    if k >= 2 and n > max_nodes:
        raise BudgetError(
            f"n={n} exceeds the {max_nodes}-node budget for k={k} chains")

    indices = np.arange(n)
    ring_values = np.atleast_1d(kernel.evaluate(TWO_PI * indices / n))
    to_start = ring_values[indices % n]                    # Q(0, C)
    to_end = ring_values[(indices - offset) % n]           # Q(C, offset)
    direct = float(ring_values[offset % n])

    start = to_start.copy()
    end = to_end.copy()
    start[0] = start[offset] = 0.0
    end[0] = end[offset] = 0.0

    if k == 1:
        reduced = float(np.einsum("i,i->", start, end, optimize=False))
        return ChainCounts(reduced, (1.0 - direct) * reduced)

    # pairwise link probabilities with both endpoints and the diagonal removed
    matrix = ring_values[(indices[:, None] - indices[None, :]) % n]
    matrix[np.arange(n), np.arange(n)] = 0.0
    matrix[0, :] = matrix[:, 0] = 0.0
    matrix[offset, :] = matrix[:, offset] = 0.0

    if k == 2:
        reduced = float(np.einsum("i,ij,j->", start, matrix, end, optimize=False))
        skip_start = start * (1.0 - to_end)     # no link C1 -- end
        skip_end = end * (1.0 - to_start)       # no link start -- C2
        guarded = float(np.einsum("i,ij,j->", skip_start, matrix, skip_end,
                                  optimize=False))
        return ChainCounts(reduced, (1.0 - direct) * guarded)

    walks = float(np.einsum("i,ij,jk,k->", start, matrix, matrix, end,
                            optimize=False))
    # remove walks that revisit the first intermediate as the third one
    squared_diag = np.einsum("ij,ji->i", matrix, matrix, optimize=False)
    revisits = float(np.einsum("i,i,i->", start, end, squared_diag, optimize=False))
    return ChainCounts(walks - revisits, None)
