"""Deterministic data grids behind the three violation figures.

Work is split into fixed units (one per curve or surface) that are independent
of the worker count, so output bytes do not depend on parallelism.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

from .bell import bell_asymptotic, bell_value_equal_settings
from .optimize import maximize_over_displacement

FIG1_N = (2, 3, 4, 5)
FIG1_R = tuple(i * 0.02 for i in range(101))
FIG1_J = tuple(i * 0.005 for i in range(201))

FIG23_N = (5, 9, 15, 25, 45, 85)
FIG2_A = tuple(i * 0.001 for i in range(1, 1501))

FIG3_R = (0.1, 0.3, 0.8, 1.5)
FIG3_STEPS = 400
FIG3_SPAN = 4.0

HEADERS = {
    1: ("n", "r", "j", "value"),
    2: ("n", "a", "value"),
    3: ("n", "r", "j", "value"),
}

GRID_HELP = """\
figure grids:
  1: N in 2..5, r = 0, 0.02, ..., 2 and J = 0, 0.005, ..., 1; columns n,r,j,value
  2: N in {5,9,15,25,45,85}, A = 0.001, 0.002, ..., 1.5 (large squeezing); columns n,a,value
  3: same N, r in {0.1,0.3,0.8,1.5}; J = 0 .. 4*J_opt(N, r) in 400 equal steps; columns n,r,j,value
"""


def thread_count() -> int:
    raw = os.environ.get("CVBELL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _fig1_unit(n: int) -> list[tuple]:
    return [
        (n, r, J, bell_value_equal_settings(n, r, J).value) for r in FIG1_R for J in FIG1_J
    ]


def _fig2_unit(n: int) -> list[tuple]:
    return [(n, A, bell_asymptotic(n, A).value) for A in FIG2_A]


def fig3_j_grid(n: int, r: float) -> list[float]:
    j_opt = maximize_over_displacement(n, r).argmax
    top = FIG3_SPAN * j_opt
    return [top * i / FIG3_STEPS for i in range(FIG3_STEPS + 1)]


def _fig3_unit(unit: tuple[int, float]) -> list[tuple]:
    n, r = unit
    return [(n, r, J, bell_value_equal_settings(n, r, J).value) for J in fig3_j_grid(n, r)]


def _units(which: int):
    if which == 1:
        return _fig1_unit, list(FIG1_N)
    if which == 2:
        return _fig2_unit, list(FIG23_N)
    if which == 3:
        return _fig3_unit, [(n, r) for r in FIG3_R for n in FIG23_N]
    raise ValueError(f"unknown figure {which}")


def figure_rows(which: int, workers: int | None = None) -> list[tuple]:
    func, units = _units(which)
    workers = thread_count() if workers is None else workers
    if workers <= 1:
        chunks = [func(u) for u in units]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(func, units))
    return [row for chunk in chunks for row in chunk]
