"""Maximisation of the Bell combination over displacement magnitude and phases.

The objective is multi-modal for large N, so every search is a global
log-spaced scan followed by golden-section refinement of each bump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bell import (
    SettingsTable,
    bell_asymptotic,
    bell_value_equal_settings,
    bell_value_general,
)
from .errors import InvalidArgument

INV_PHI = (math.sqrt(5) - 1) / 2

DEFAULT_J_BRACKET = (0.0, 5.0)
DEFAULT_A_BRACKET = (0.0, 3.0)
SCAN_POINTS = 256
SCAN_DECADES = 10
ARG_TOL = 1e-10
TIE_TOL = 1e-9
NOISE_FLOOR = 1e-12


@dataclass
class OptimizationResult:
    argmax: float
    value: float
    bracket: tuple[float, float]
    evaluations: int
    local_maxima: list[tuple[float, float]] = field(default_factory=list)
    error: float = 0.0
    phases: tuple[float, ...] | None = None


def golden_max(f: Callable[[float], float], a: float, b: float, tol: float = ARG_TOL):
    """Golden-section search for a maximum of a unimodal f on [a, b].

    Returns (x, f(x), evaluations) for the best point seen.
    """
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    if fc >= fd:
        return c, fc, evals
    return d, fd, evals


def scan_grid(hi: float, points: int = SCAN_POINTS, decades: int = SCAN_DECADES) -> np.ndarray:
    """Zero followed by `points` log-spaced samples ending at hi."""
    return np.concatenate([[0.0], np.logspace(math.log10(hi) - decades, math.log10(hi), points)])


def _plateau_peaks(ys: np.ndarray, floor: float) -> list[int]:
    """Indices of local maxima, treating differences below `floor` as ties.

    Consecutive near-equal samples form one run; a run is a maximum when both
    outside neighbours (if any) are lower by more than `floor`. The run is
    represented by its first sample within `floor` of the run maximum.
    """
    peaks = []
    i, m = 0, len(ys)
    while i < m:
        j = i
        while j + 1 < m and abs(ys[j + 1] - ys[j]) <= floor:
            j += 1
        top = ys[i : j + 1].max()
        left_ok = i == 0 or ys[i - 1] < top - floor
        right_ok = j == m - 1 or ys[j + 1] < top - floor
        if left_ok and right_ok:
            peaks.append(i + int(np.argmax(ys[i : j + 1] >= top - floor)))
        i = j + 1
    return peaks


def _scan_and_refine(f, bracket: tuple[float, float], points: int) -> OptimizationResult:
    lo, hi = bracket
    if not (lo == 0 and hi > 0):
        raise InvalidArgument(f"bracket must be (0, hi] with hi > 0, got {bracket}")
    xs = scan_grid(hi, points)
    samples = [f(x) for x in xs]
    ys = np.array([s.value for s in samples])
    floor = NOISE_FLOOR + 10 * max(s.error for s in samples)
    evals = len(xs)

    found: list[tuple[float, float, float]] = []
    for i in _plateau_peaks(ys, floor):
        x, y, err = xs[i], ys[i], samples[i].error
        if 0 < i < len(xs) - 1:
            xr, yr, k = golden_max(lambda t: f(t).value, xs[i - 1], xs[i + 1])
            evals += k
            if yr > y + floor:
                x, y, err = xr, yr, f(xr).error
                evals += 1
        found.append((float(x), float(y), float(err)))

    top = max(y for _, y, _ in found)
    best = min((c for c in found if c[1] >= top - TIE_TOL), key=lambda c: c[0])
    return OptimizationResult(
        argmax=best[0],
        value=best[1],
        bracket=(float(lo), float(hi)),
        evaluations=evals,
        local_maxima=[(x, y) for x, y, _ in found],
        error=best[2],
    )


def maximize_over_displacement(
    n: int,
    r: float,
    bracket: tuple[float, float] = DEFAULT_J_BRACKET,
    points: int = SCAN_POINTS,
) -> OptimizationResult:
    """Best J for equal settings 0 / i sqrt(J) at squeezing r."""
    if r < 0:
        raise InvalidArgument("squeezing parameter must be nonnegative")
    return _scan_and_refine(lambda J: bell_value_equal_settings(n, r, J), bracket, points)


def maximize_asymptotic(
    n: int,
    bracket: tuple[float, float] = DEFAULT_A_BRACKET,
    points: int = SCAN_POINTS,
) -> OptimizationResult:
    """Best A = J e^{2r} in the large-squeezing limit."""
    return _scan_and_refine(lambda A: bell_asymptotic(n, A), bracket, points)


def scan_surface(n: int, r_grid: Sequence[float], J_grid: Sequence[float]) -> np.ndarray:
    """Row-major grid of values, rows indexed by r and columns by J."""
    out = np.empty((len(r_grid), len(J_grid)))
    for a, r in enumerate(r_grid):
        for b, J in enumerate(J_grid):
            out[a, b] = bell_value_equal_settings(n, float(r), float(J)).value
    return out


def _phase_value(n: int, r: float, J: float, phases) -> float:
    return bell_value_general(n, r, SettingsTable.equal(n, J, list(phases))).value


def optimize_phases(
    n: int,
    r: float,
    J: float,
    starts: int = 8,
    tol: float = 1e-8,
    seed: int = 0,
    max_sweeps: int = 200,
) -> OptimizationResult:
    """Coordinate ascent over the primed-setting phases from seeded random starts."""
    if n > 10:
        raise InvalidArgument("phase optimisation is limited to n <= 10")
    if starts < 1:
        raise InvalidArgument("need at least one start")
    rng = np.random.default_rng(seed)
    coarse = np.linspace(0.0, 2 * math.pi, 33)[:-1]
    step = coarse[1] - coarse[0]
    evals = 0
    best_phases, best_value = None, -math.inf

    for _ in range(starts):
        phases = rng.uniform(0.0, 2 * math.pi, n)
        value = _phase_value(n, r, J, phases)
        evals += 1
        for _sweep in range(max_sweeps):
            moved = 0.0
            for i in range(n):
                def g(t, i=i):
                    trial = phases.copy()
                    trial[i] = t
                    return _phase_value(n, r, J, trial)

                ys = [g(t) for t in coarse]
                evals += len(coarse)
                j = int(np.argmax(ys))
                t, y, k = golden_max(g, coarse[j] - step, coarse[j] + step, tol)
                evals += k
                if y > value:
                    t = t % (2 * math.pi)
                    d = abs(t - phases[i])
                    moved = max(moved, min(d, 2 * math.pi - d))
                    phases[i], value = t, y
            if moved < tol:
                break
        if value > best_value + TIE_TOL:
            best_phases, best_value = phases.copy(), value

    return OptimizationResult(
        argmax=J,
        value=best_value,
        bracket=(0.0, 2 * math.pi),
        evaluations=evals,
        local_maxima=[(J, best_value)],
        phases=tuple(float(p) for p in best_phases),
    )
