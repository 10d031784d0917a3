"""Displaced-parity correlation function of the N-mode GHZ state."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .gaussian import GaussianState, log_wigner_at


def _as_point(point: Sequence[complex]) -> np.ndarray:
    alphas = np.asarray(point, dtype=complex).reshape(-1)
    if alphas.size < 1:
        raise InvalidArgument("a phase-space point needs at least one mode")
    if not np.all(np.isfinite(alphas)):
        raise InvalidArgument("displacements must be finite")
    return alphas


def log_pi_closed_form(n: int, r: float, point: Sequence[complex]) -> float:
    """Exponent of the GHZ correlation at `point`.

    Uses sum_{i,j} a_i a_j = (sum a)^2 over ordered pairs, so only real parts enter.
    """
    alphas = _as_point(point)
    if alphas.size != n:
        raise InvalidArgument(f"point has {alphas.size} modes, expected {n}")
    if n < 2:
        raise InvalidArgument("need at least two modes")
    total = alphas.sum()
    norm2 = float(np.sum(alphas.real**2 + alphas.imag**2))
    cross = 4.0 / n * (total.real**2 - total.imag**2)
    local = 2.0 * float(np.sum(alphas.real**2 - alphas.imag**2))
    return -2.0 * math.cosh(2 * r) * norm2 + math.sinh(2 * r) * (cross - local)


def pi_closed_form(n: int, r: float, point: Sequence[complex]) -> float:
    return math.exp(log_pi_closed_form(n, r, point))


def pi_from_state(state: GaussianState, point: Sequence[complex]) -> float:
    """Correlation via the Wigner relation Pi = (pi/2)^N W."""
    alphas = _as_point(point)
    if alphas.size != state.n_modes:
        raise InvalidArgument(
            f"point has {alphas.size} modes, state has {state.n_modes}"
        )
    logw = log_wigner_at(state, alphas)
    return math.exp(logw + state.n_modes * math.log(math.pi / 2))
