"""Uniform sampling of model polytopes and quantile-scaling verdicts.

The symbolic depth engine answers queries by manipulating exception sets;
this module is the independent, numerical route to the same judgments. It
draws approximately uniform models from a knowledge base's polytope with a
hit-and-run walk, turns a query ``gamma => zeta @ j`` into the random
variable 1 - pi(zeta|gamma) over those models, and reads off how that
variable's upper quantile shrinks as the exception scale delta shrinks.
If the knowledge base really does support the query at threshold j, the
(1 - eta)-quantile must scale like delta**j, so the fitted log-log slope
across a grid of deltas supports or refutes j.

Sampling runs inside the affine hull of the polytope: coordinates pinned
to zero (by @ inf rules, or by inequality rows that can only be satisfied
at zero) are eliminated up front, the remaining normalization equality is
removed with an orthonormal basis of its null space, and the walk happens
in those reduced coordinates starting from a Chebyshev center. If the
reduced polytope has radius zero the single (center) point is returned
n times, flagged degenerate; width-zero polytopes with extent in some
direction would collapse the same way, but only arise from exact
parameter coincidences.

The per-step kernel exists twice: a Cython extension (threshgen._hitrun)
and a pure-numpy fallback (threshgen._hitrun_py) selected at import.
Set THRESHGEN_BACKEND=pure or =compiled to force one; the default "auto"
prefers the extension. Both consume identical pre-drawn random blocks, so
a chain is reproducible bit-for-bit under a fixed backend and seed (a
longer run extends a shorter one exactly), and the two backends follow
the same trajectory up to floating-point rounding order.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Iterator

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog

from .depth import Depth, Generalization, KnowledgeBase
from .logic import Proposition
from .polytope import (
    InfeasiblePolytopeError,
    NumericalError,
    ParameterAssignment,
    PolytopeSystem,
    build_polytope,
    indicator,
    is_feasible,
)

_BACKEND_ENV = "THRESHGEN_BACKEND"

# Slack levels applied to every rule's psi when probing a verdict; the
# first entry is the one whose fitted exponent gets reported.
PSI_SWEEP = (1.0, 0.5, 2.0)

# Fitted slopes within 0.3 below the queried threshold still support it;
# 0.7 or more below refute it; in between is inconclusive.
SUPPORT_MARGIN = 0.3
REFUTE_MARGIN = 0.7

_BLOCK = 4096
_DEGENERATE_RADIUS = 1e-12


def _load_kernel():
    choice = os.environ.get(_BACKEND_ENV, "auto")
    if choice not in ("auto", "compiled", "pure"):
        raise ValueError(
            f"{_BACKEND_ENV} must be auto, compiled, or pure; got {choice!r}"
        )
    if choice in ("auto", "compiled"):
        try:
            from . import _hitrun

            return _hitrun, "compiled"
        except ImportError:
            if choice == "compiled":
                raise
    from . import _hitrun_py

    return _hitrun_py, "pure"


_KERNEL, _BACKEND_NAME = _load_kernel()


def kernel_backend() -> str:
    """Which step kernel is active: 'compiled' or 'pure'."""
    return _BACKEND_NAME


@dataclass(eq=False)
class UniformSample:
    """Models drawn from one polytope: points is (n, dimension).

    degenerate marks the single-point collapse, where all n rows repeat
    the polytope's only (or central) point instead of being a walk.
    """

    points: np.ndarray
    degenerate: bool

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.points)


@dataclass(eq=False)
class _Walkspace:
    """The polytope with pinned coordinates removed and the normalization
    equality eliminated; the walk lives in the y of x = origin + basis@y
    over the kept coordinates, subject to rows @ y <= rhs."""

    keep: np.ndarray
    origin: np.ndarray
    basis: np.ndarray
    rows: np.ndarray
    rhs: np.ndarray


def _pinned_coordinates(system: PolytopeSystem) -> np.ndarray:
    """Boolean mask of coordinates forced to zero, closed under the rule
    that an inequality row with no negative coefficient left pins every
    coordinate it still touches positively (row @ x <= 0 with x >= 0)."""
    pinned = np.zeros(system.dimension, dtype=bool)
    for row, bound in zip(system.eq_rows, system.eq_rhs):
        if bound == 0.0:
            pinned |= row > 0.0
    changed = True
    while changed:
        changed = False
        for row, bound in zip(system.ineq_rows, system.ineq_rhs):
            if bound > 0.0:
                continue
            live = ~pinned
            positive = live & (row > 0.0)
            if positive.any() and not (live & (row < 0.0)).any():
                pinned |= positive
                changed = True
    return pinned


def _reduce(system: PolytopeSystem) -> _Walkspace:
    pinned = _pinned_coordinates(system)
    keep = np.flatnonzero(~pinned)
    if keep.size == 0:
        raise InfeasiblePolytopeError(
            "every coordinate is forced to zero, so no model normalizes"
        )
    count = keep.size
    origin = np.full(count, 1.0 / count)
    basis = null_space(np.ones((1, count)))
    rows = []
    rhs = []
    for row, bound in zip(system.ineq_rows, system.ineq_rhs):
        kept = row[keep]
        if not (kept > 0.0).any():
            continue  # satisfied by any non-negative point
        projected = kept @ basis
        slack = bound - kept @ origin
        if np.linalg.norm(projected) < 1e-13:
            # Row is constant on the affine hull; either vacuous or empty.
            if slack < -1e-9:
                raise InfeasiblePolytopeError(
                    "a rule row excludes the entire affine hull"
                )
            continue
        rows.append(projected)
        rhs.append(slack)
    # Non-negativity of the kept coordinates, in walk coordinates.
    rows.extend(-basis)
    rhs.extend(origin)
    return _Walkspace(
        keep=keep,
        origin=origin,
        basis=basis,
        rows=np.ascontiguousarray(rows, dtype=float),
        rhs=np.ascontiguousarray(rhs, dtype=float),
    )


def _chebyshev_center(rows: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Center and radius of the largest ball inside rows @ y <= rhs."""
    q = rows.shape[1]
    norms = np.linalg.norm(rows, axis=1)
    objective = np.zeros(q + 1)
    objective[q] = -1.0
    # Presolve off for the same reason as polytope.is_feasible: the HiGHS
    # presolver can misjudge thin systems whose only points are degenerate
    # vertices, and these LPs are small enough to solve outright.
    result = linprog(
        objective,
        A_ub=np.hstack([rows, norms[:, None]]),
        b_ub=rhs,
        bounds=[(None, None)] * q + [(0, None)],
        method="highs",
        options={"presolve": False},
    )
    if result.status == 2:
        raise InfeasiblePolytopeError("polytope is empty")
    if result.status != 0:
        raise NumericalError(f"interior-point LP failed: {result.message}")
    return result.x[:q], float(result.x[q])


def sample_uniform(
    system: PolytopeSystem, n: int, burn_in: int = 1000, seed: int = 0
) -> UniformSample:
    """Draw n approximately uniform models from the polytope.

    Hit-and-run: from the Chebyshev center, repeatedly pick a uniform
    direction, intersect the polytope with the line through the current
    point, and jump to a uniform point of that chord. The first burn_in
    points are discarded, then every step is recorded. Deterministic for
    a given seed (and kernel backend).

    Raises InfeasiblePolytopeError on an empty polytope. A polytope with
    a single point (radius 0) yields that point n times with
    degenerate=True.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    space = _reduce(system)
    points = np.zeros((n, system.dimension))
    if space.keep.size == 1:
        # One free coordinate carrying all mass; constraints were screened
        # during reduction.
        points[:, space.keep[0]] = 1.0
        return UniformSample(points=points, degenerate=True)
    center, radius = _chebyshev_center(space.rows, space.rhs)
    if radius <= _DEGENERATE_RADIUS:
        points[:, space.keep] = space.origin + space.basis @ center
        return UniformSample(points=points, degenerate=True)
    rng = np.random.default_rng(seed)
    q = space.basis.shape[1]
    y = np.ascontiguousarray(center)
    block_out = np.empty((_BLOCK, q))
    total = burn_in + n
    done = 0
    while done < total:
        take = min(_BLOCK, total - done)
        # Whole blocks are always drawn, even when only part is stepped,
        # so the randomness feeding step t depends on the seed alone: a
        # longer run with the same seed extends a shorter one exactly.
        normals = rng.standard_normal((_BLOCK, q))
        uniforms = rng.random(_BLOCK)
        _KERNEL.step_block(
            space.rows, space.rhs, y, normals[:take], uniforms[:take], block_out[:take]
        )
        first_wanted = max(done, burn_in)
        if done + take > first_wanted:
            segment = block_out[first_wanted - done : take]
            points[first_wanted - burn_in : done + take - burn_in, space.keep] = (
                segment @ space.basis.T + space.origin
            )
        done += take
    return UniformSample(points=points, degenerate=False)


def exception_rate(
    points: np.ndarray, gamma: Proposition, zeta: Proposition
) -> np.ndarray:
    """1 - pi(zeta | gamma) for each model row, 0 where pi(gamma) = 0.

    The zero-antecedent convention matches reading the conditional as 1
    when gamma has no mass: such models never witness an exception.
    """
    dimension = points.shape[1]
    mass_gamma = points @ indicator(gamma.mask, dimension)
    mass_both = points @ indicator((gamma & zeta).mask, dimension)
    safe = np.where(mass_gamma > 0.0, mass_gamma, 1.0)
    return np.where(mass_gamma > 0.0, 1.0 - mass_both / safe, 0.0)


def empirical_quantile(values: np.ndarray, eta: float) -> float:
    """The (1 - eta)-quantile as the order statistic at ceil((1-eta)*n)."""
    if not 0 < eta < 1:
        raise ValueError(f"eta must lie in (0, 1), got {eta!r}")
    n = len(values)
    if n == 0:
        raise ValueError("no values to take a quantile of")
    rank = math.ceil((1.0 - eta) * n - 1e-12)
    rank = min(max(rank, 1), n)
    return float(np.sort(values)[rank - 1])


def conclusion_quantile(
    kb: KnowledgeBase,
    params: ParameterAssignment,
    query: Generalization,
    n: int,
    burn_in: int = 1000,
    seed: int = 0,
) -> float:
    """Empirical (1 - params.eta)-quantile of 1 - pi(zeta|gamma) over
    models sampled uniformly from the kb polytope at params."""
    sample = sample_uniform(build_polytope(kb, params), n, burn_in, seed)
    rates = exception_rate(sample.points, query.antecedent, query.consequent)
    return empirical_quantile(rates, params.eta)


@dataclass(frozen=True)
class ScalingReport:
    """Outcome of probing one query across a delta grid and psi sweep.

    fitted_exponent is the log-log slope at the unscaled psi (infinite
    when every quantile on the grid is zero); exponents and quantiles are
    indexed by the psi sweep. The verdict compares each slope against the
    query threshold and is only 'supports'/'refutes' when every sweep
    member agrees.
    """

    threshold: Depth
    delta_grid: tuple[float, ...]
    psi_scales: tuple[float, ...]
    quantiles: tuple[tuple[float, ...], ...]
    exponents: tuple[float, ...]
    verdict: str

    @property
    def fitted_exponent(self) -> float:
        return self.exponents[0]


def _fit_exponent(deltas: np.ndarray, quantiles: np.ndarray) -> float:
    if np.all(quantiles <= 1e-12):
        return math.inf
    # Zero quantiles among nonzero ones would sink the fit; clipping keeps
    # the slope finite and steep, which is the faithful direction.
    logs = np.log(np.clip(quantiles, 1e-15, None))
    return float(np.polyfit(np.log(deltas), logs, 1)[0])


def _single_verdict(exponent: float, threshold: Depth) -> str:
    if exponent >= threshold - SUPPORT_MARGIN:
        return "supports"
    if exponent <= threshold - REFUTE_MARGIN:
        return "refutes"
    return "inconclusive"


def scaling_verdict(
    kb: KnowledgeBase,
    query: Generalization,
    delta_grid,
    params: ParameterAssignment,
    n: int = 20000,
    seed: int = 0,
    burn_in: int = 1000,
) -> ScalingReport:
    """Estimate how the query's exception quantile scales with delta.

    For each psi scale in PSI_SWEEP and each grid delta the kb polytope is
    sampled and the query's (1 - eta)-quantile recorded; a least-squares
    line through (log delta, log quantile) estimates the exponent. The
    grid must have at least 3 strictly decreasing deltas, and every grid
    polytope must be nonempty: an infeasible point aborts, naming its
    delta, since quantiles of an empty model set mean nothing.
    """
    grid = tuple(float(d) for d in delta_grid)
    if len(grid) < 3:
        raise ValueError("delta grid needs at least 3 points")
    if any(b >= a for a, b in zip(grid, grid[1:])):
        raise ValueError("delta grid must be strictly decreasing")
    seeds = np.random.SeedSequence(seed).generate_state(
        len(PSI_SWEEP) * len(grid), dtype=np.uint64
    )
    quantiles = []
    exponents = []
    verdicts = []
    at = 0
    for scale in PSI_SWEEP:
        scaled = replace(params, psi=tuple(scale * p for p in params.psi))
        row = []
        for delta in grid:
            point_params = replace(scaled, delta=delta)
            system = build_polytope(kb, point_params)
            if not is_feasible(system):
                raise InfeasiblePolytopeError(
                    f"polytope is empty at delta={delta} (psi scale {scale});"
                    " the scaling fit is undefined"
                )
            row.append(
                conclusion_quantile(
                    kb, point_params, query, n, burn_in, int(seeds[at])
                )
            )
            at += 1
        quantiles.append(tuple(row))
        exponent = _fit_exponent(np.array(grid), np.array(row))
        exponents.append(exponent)
        verdicts.append(_single_verdict(exponent, query.threshold))
    verdict = verdicts[0] if len(set(verdicts)) == 1 else "inconclusive"
    return ScalingReport(
        threshold=query.threshold,
        delta_grid=grid,
        psi_scales=PSI_SWEEP,
        quantiles=tuple(quantiles),
        exponents=tuple(exponents),
        verdict=verdict,
    )
