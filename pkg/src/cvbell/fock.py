"""Truncated photon-number representation of the GHZ network, used as an oracle.

Everything here is built from number-basis matrix elements only; nothing is
taken from the covariance-matrix path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import CapacityExceeded, InvalidArgument

NORM_TOL = 1e-8
START_CUTOFF = 10
MEMORY_BUDGET = 2 * 1024**3
DEFAULT_MAX_MODES = 3
DEFAULT_MAX_R = 0.5


@dataclass(frozen=True)
class TruncatedState:
    n_modes: int
    cutoff: int
    amplitudes: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))


def _squeezed_amplitudes(r: float, axis: str, cutoff: int) -> np.ndarray:
    if axis == "position":
        sign = -1.0
    elif axis == "momentum":
        sign = 1.0
    else:
        raise InvalidArgument(f"unknown squeezing axis {axis!r}")
    t = math.tanh(r)
    amps = np.zeros(cutoff + 1)
    for m in range(cutoff // 2 + 1):
        # <2m|S|0> = (sign tanh r)^m sqrt((2m)!) / (2^m m! sqrt(cosh r))
        log_mag = 0.5 * gammaln(2 * m + 1) - m * math.log(2) - gammaln(m + 1)
        amps[2 * m] = (sign * t) ** m * math.exp(log_mag) / math.sqrt(math.cosh(r))
    return amps


def fock_squeezed_vacuum(
    r: float, axis: Literal["position", "momentum"], cutoff: int, tol: float = NORM_TOL
) -> TruncatedState:
    """Single-mode squeezed vacuum; `axis` is the quadrature with reduced variance."""
    if cutoff < 0 or cutoff % 2:
        raise InvalidArgument(f"cutoff must be a nonnegative even number, got {cutoff}")
    if r < 0:
        raise InvalidArgument("squeezing parameter must be nonnegative")
    amps = _squeezed_amplitudes(r, axis, cutoff)
    kept = float(np.sum(amps**2))
    if kept < 1 - tol:
        needed = cutoff
        while float(np.sum(_squeezed_amplitudes(r, axis, needed) ** 2)) < 1 - tol:
            needed += 2
        raise CapacityExceeded(
            f"cutoff {cutoff} keeps norm^2 {kept:.3e} of the squeezed vacuum; need cutoff >= {needed}"
        )
    return TruncatedState(1, cutoff, amps.astype(complex))


def product_state(modes: Sequence[TruncatedState]) -> TruncatedState:
    cutoffs = {m.cutoff for m in modes}
    if len(cutoffs) != 1:
        raise InvalidArgument("all modes must share one cutoff")
    amps = modes[0].amplitudes
    for m in modes[1:]:
        amps = np.multiply.outer(amps, m.amplitudes)
    return TruncatedState(len(modes), cutoffs.pop(), amps)


def beamsplitter_matrix(theta: float, cutoff: int) -> np.ndarray:
    """T[m_i, m_j, n_i, n_j] = <m_i, m_j| U |n_i, n_j>, kept to m_i, m_j <= cutoff.

    U a_i^dag U^dag = c a_i^dag + s a_j^dag and U a_j^dag U^dag = s a_i^dag - c a_j^dag.
    """
    c, s = math.cos(theta), math.sin(theta)
    d = cutoff + 1
    t = np.zeros((d, d, d, d))
    lf = gammaln(np.arange(2 * d) + 1)
    for ni in range(d):
        for nj in range(d):
            total = ni + nj
            coeff = np.zeros(total + 1)
            # expand (c A + s B)^ni (s A - c B)^nj; coeff[a] multiplies A^a B^(total - a)
            for p in range(ni + 1):
                wp = math.comb(ni, p) * c**p * s ** (ni - p)
                for q in range(nj + 1):
                    coeff[p + q] += wp * math.comb(nj, q) * s**q * (-c) ** (nj - q)
            for mi in range(max(0, total - cutoff), min(total, cutoff) + 1):
                mj = total - mi
                scale = math.exp(0.5 * (lf[mi] + lf[mj] - lf[ni] - lf[nj]))
                t[mi, mj, ni, nj] = coeff[mi] * scale
    return t


def fock_beamsplitter_apply(
    state: TruncatedState, i: int, j: int, theta: float, tol: float = NORM_TOL
) -> TruncatedState:
    n = state.n_modes
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InvalidArgument(f"invalid mode pair ({i}, {j}) for {n} modes")
    t = beamsplitter_matrix(theta, state.cutoff)
    out = np.tensordot(t, state.amplitudes, axes=([2, 3], [i, j]))
    # tensordot puts (m_i, m_j) first; move them back into place
    rest = [k for k in range(n) if k not in (i, j)]
    order = np.argsort([i, j] + rest)
    out = np.transpose(out, order)
    before, after = state.norm, float(np.sqrt(np.sum(np.abs(out) ** 2)))
    if before - after > tol * before:
        raise CapacityExceeded(
            f"beam splitter leaked {1 - after / before:.3e} of the norm at cutoff {state.cutoff}"
        )
    return TruncatedState(n, state.cutoff, out)


def ghz_network(n: int) -> list[tuple[int, int, float]]:
    return [(k, k + 1, math.acos(1.0 / math.sqrt(n - k))) for k in range(n - 1)]


def fock_ghz_state(
    n: int, r: float, cutoff: int, tol: float = NORM_TOL, allow_large: bool = False
) -> TruncatedState:
    """Squeezed inputs (mode 1 momentum, rest position) sent through the beam-splitter chain.

    Limited to n <= 3 and r <= 0.5 unless `allow_large` is set.
    """
    if n < 2:
        raise InvalidArgument("need at least two modes")
    if not allow_large and (n > DEFAULT_MAX_MODES or r > DEFAULT_MAX_R):
        raise CapacityExceeded(
            f"Fock oracle defaults to n <= {DEFAULT_MAX_MODES}, r <= {DEFAULT_MAX_R}; "
            "pass allow_large=True to go beyond"
        )
    modes = [fock_squeezed_vacuum(r, "momentum", cutoff, tol)]
    modes += [fock_squeezed_vacuum(r, "position", cutoff, tol) for _ in range(n - 1)]
    state = product_state(modes)
    for i, j, theta in ghz_network(n):
        state = fock_beamsplitter_apply(state, i, j, theta, tol)
    amps = state.amplitudes / state.norm
    return TruncatedState(n, cutoff, amps)


def choose_cutoff(
    n: int,
    r: float,
    tol: float = NORM_TOL,
    memory_budget: int = MEMORY_BUDGET,
    allow_large: bool = False,
) -> int:
    """Smallest cutoff in the doubling sequence 10, 20, 40, ... that builds cleanly."""
    cutoff = START_CUTOFF
    while True:
        # complex128 tensor plus one working copy
        if 2 * 16 * (cutoff + 1) ** n > memory_budget:
            raise CapacityExceeded(
                f"cutoff {cutoff} for {n} modes exceeds the memory budget of {memory_budget} bytes"
            )
        try:
            fock_ghz_state(n, r, cutoff, tol, allow_large)
            return cutoff
        except CapacityExceeded:
            cutoff *= 2


def displacement_matrix(alpha: complex, rows: int, cols: int) -> np.ndarray:
    """<m|D(alpha)|n> for m < rows, n < cols from the associated Laguerre closed form."""
    x = abs(alpha) ** 2
    lf = gammaln(np.arange(max(rows, cols)) + 1)
    d = np.zeros((rows, cols), dtype=complex)
    for m in range(rows):
        for k in range(cols):
            if m >= k:
                lag = eval_genlaguerre(k, m - k, x)
                d[m, k] = np.exp(0.5 * (lf[k] - lf[m]) - x / 2) * alpha ** (m - k) * lag
            else:
                lag = eval_genlaguerre(m, k - m, x)
                d[m, k] = (
                    np.exp(0.5 * (lf[m] - lf[k]) - x / 2) * (-np.conj(alpha)) ** (k - m) * lag
                )
    return d


def displaced_parity_expectation(
    state: TruncatedState, point: Sequence[complex], pad: int = 20, tol: float = NORM_TOL
) -> float:
    """<psi| prod_i D(a_i) (-1)^{n_i} D(a_i)^dag |psi>."""
    alphas = np.asarray(point, dtype=complex).reshape(-1)
    if alphas.size != state.n_modes:
        raise InvalidArgument(
            f"point has {alphas.size} modes, state has {state.n_modes}"
        )
    cols = state.cutoff + 1
    rows = cols + pad
    phi = state.amplitudes
    for mode, a in enumerate(alphas):
        d = displacement_matrix(-a, rows, cols)
        phi = np.moveaxis(np.tensordot(d, phi, axes=([1], [mode])), 0, mode)
    before = float(np.sum(np.abs(state.amplitudes) ** 2))
    after = float(np.sum(np.abs(phi) ** 2))
    if abs(before - after) > tol * before:
        raise CapacityExceeded(
            f"displaced state lost {abs(1 - after / before):.3e} of its norm; increase pad or cutoff"
        )
    parity = np.array([1.0, -1.0])[np.arange(rows) % 2]
    weights = np.abs(phi) ** 2
    for mode in range(state.n_modes):
        shape = [1] * state.n_modes
        shape[mode] = rows
        weights = weights * parity.reshape(shape)
    return float(np.sum(weights) / before)


def _ladder(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), 1)


def fock_covariance(state: TruncatedState) -> np.ndarray:
    """Symmetrised quadrature covariance in (x1, p1, ...) order with x = (a + a^dag)/2."""
    a = _ladder(state.cutoff)
    x = (a + a.T) / 2
    p = (a - a.T) / 2j
    ops = []
    for mode in range(state.n_modes):
        ops += [(mode, x), (mode, p)]
    psi = state.amplitudes
    norm2 = float(np.sum(np.abs(psi) ** 2))

    def apply(op, mode, v):
        return np.moveaxis(np.tensordot(op, v, axes=([1], [mode])), 0, mode)

    k = len(ops)
    cov = np.zeros((k, k))
    for u in range(k):
        mu, ou = ops[u]
        for w in range(u, k):
            mw, ow = ops[w]
            vw = apply(ow, mw, psi)
            vuw = apply(ou, mu, vw)
            val = np.vdot(psi, vuw) / norm2
            cov[u, w] = cov[w, u] = val.real  # symmetrised part of <O_u O_w>
    return cov
