"""Deterministic grid search followed by coordinate-descent refinement."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

TIE_TOL = 1e-12


@dataclass(frozen=True)
class Axis:
    """One search coordinate. Periodic axes wrap; bounded ones are clipped."""

    low: float
    high: float
    points: int
    periodic: bool = False

    def grid(self) -> np.ndarray:
        if self.periodic:
            return self.low + (self.high - self.low) * np.arange(self.points) / self.points
        return np.linspace(self.low, self.high, self.points)

    @property
    def spacing(self) -> float:
        span = self.high - self.low
        return span / self.points if self.periodic else span / max(self.points - 1, 1)

    def project(self, x: float) -> float:
        if self.periodic:
            return self.low + (x - self.low) % (self.high - self.low)
        return min(max(x, self.low), self.high)


@dataclass(frozen=True)
class SearchResult:
    x: np.ndarray
    value: float
    evaluations: int
    grid_points: int
    iterations: int
    final_step: list


def minimize(
    f: Callable[[np.ndarray], np.ndarray],
    axes: Sequence[Axis],
    *,
    iterations: int = 32,
    extra: np.ndarray | None = None,
) -> SearchResult:
    """Minimize a batched objective ``f((N, k) array) -> (N,) values``.

    The full tensor grid is evaluated in lexicographic order and the first
    point within 1e-12 of the minimum is kept, so ties go to the
    lexicographically smallest parameter vector. ``extra`` rows are scored
    after the grid. Refinement then runs ``iterations`` coordinate passes.
    Each pass tries +/- step along every axis in turn. A pass without
    improvement halves all steps.
    """
    grids = [a.grid() for a in axes]
    mesh = np.stack([g.reshape(-1) for g in np.meshgrid(*grids, indexing="ij")], axis=1)
    if extra is not None:
        mesh = np.concatenate([mesh, np.atleast_2d(extra)], axis=0)
    values = np.asarray(f(mesh), dtype=float)
    best_val = float(values.min())
    best_idx = int(np.flatnonzero(values <= best_val + TIE_TOL)[0])
    x = mesh[best_idx].copy()
    fx = float(values[best_idx])
    evaluations = mesh.shape[0]

    steps = np.array([a.spacing for a in axes], dtype=float)
    for _ in range(iterations):
        improved = False
        for j, axis in enumerate(axes):
            trial = np.repeat(x[None, :], 2, axis=0)
            trial[0, j] = axis.project(x[j] + steps[j])
            trial[1, j] = axis.project(x[j] - steps[j])
            vals = np.asarray(f(trial), dtype=float)
            evaluations += 2
            k = int(np.argmin(vals))
            if vals[k] < fx - TIE_TOL:
                x, fx = trial[k], float(vals[k])
                improved = True
        if not improved:
            steps = steps * 0.5
    return SearchResult(
        x=x,
        value=fx,
        evaluations=evaluations,
        grid_points=len(mesh),
        iterations=iterations,
        final_step=steps.tolist(),
    )


def maximize(f, axes, **kwargs) -> SearchResult:
    res = minimize(lambda x: -np.asarray(f(x)), axes, **kwargs)
    return SearchResult(res.x, -res.value, res.evaluations, res.grid_points, res.iterations, res.final_step)
