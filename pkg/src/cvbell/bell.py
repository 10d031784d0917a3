"""N-party Mermin-Klyshko combinations evaluated on the GHZ correlation function.

Coefficients are exact dyadic rationals. Sums with heavy cancellation (large N)
are evaluated with an error estimate and escalated to multiprecision when
double precision cannot be trusted.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import CapacityExceeded, InvalidArgument

MAX_EXPAND = 24
MP_MIN_DPS = 50
MP_ALWAYS_ABOVE = 100
REL_ERROR_LIMIT = 1e-8

_EPS = sys.float_info.epsilon


class BellTerm(NamedTuple):
    """One correlation term; bit i of `selector` set means party i+1 uses its primed setting."""

    coefficient: Fraction
    selector: int

    @property
    def den_pow2(self) -> int:
        return self.coefficient.denominator.bit_length() - 1


@dataclass(frozen=True)
class ClassCoefficients:
    """c[k] is the coefficient of every term in which exactly k parties use the primed setting."""

    n: int
    coeffs: tuple[Fraction, ...]

    def weights(self) -> list[tuple[int, Fraction]]:
        """Nonzero (k, c[k] * C(n, k)) pairs."""
        return [
            (k, c * math.comb(self.n, k)) for k, c in enumerate(self.coeffs) if c != 0
        ]

    def l1_norm(self) -> Fraction:
        return sum(
            (abs(c) * math.comb(self.n, k) for k, c in enumerate(self.coeffs)),
            Fraction(0),
        )


@dataclass(frozen=True)
class SettingsTable:
    unprimed: tuple[complex, ...]
    primed: tuple[complex, ...]

    def __post_init__(self):
        unprimed = tuple(complex(a) for a in self.unprimed)
        primed = tuple(complex(a) for a in self.primed)
        if len(unprimed) != len(primed):
            raise InvalidArgument("need one unprimed and one primed setting per party")
        if len(unprimed) < 2:
            raise InvalidArgument("need at least two parties")
        if not all(map(np.isfinite, unprimed + primed)):
            raise InvalidArgument("settings must be finite")
        object.__setattr__(self, "unprimed", unprimed)
        object.__setattr__(self, "primed", primed)

    @property
    def n(self) -> int:
        return len(self.unprimed)

    @classmethod
    def equal(cls, n: int, J: float, phases: Sequence[float] | None = None):
        """Unprimed settings 0, primed settings sqrt(J) e^{i phase} (phase pi/2 by default)."""
        if J < 0:
            raise InvalidArgument("displacement parameter J must be nonnegative")
        if phases is None:
            phases = [math.pi / 2] * n
        if len(phases) != n:
            raise InvalidArgument(f"expected {n} phases, got {len(phases)}")
        amp = math.sqrt(J)
        primed = tuple(amp * complex(math.cos(p), math.sin(p)) for p in phases)
        return cls((0j,) * n, primed)


@dataclass(frozen=True)
class BellValue:
    value: float
    n: int
    error: float = 0.0

    def __float__(self) -> float:
        return self.value


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidArgument(f"number of parties must be an integer >= 2, got {n!r}")


def term_numerators(n: int) -> tuple[np.ndarray, int]:
    """Integer numerators over all 2**n selectors and their common power-of-two denominator.

    Runs the recursion directly: the primed-swapped combination is the same
    array read at selector XOR all-ones.
    """
    _check_n(n)
    if n > MAX_EXPAND:
        raise CapacityExceeded(
            f"full expansion limited to n <= {MAX_EXPAND}; use class_coefficients for n={n}"
        )
    # n = 2 base case: selectors 00, 01, 10, 11 -> +1, +1, +1, -1
    nums = np.array([1, 1, 1, -1], dtype=np.int64)
    den_pow2 = 0
    for m in range(2, n):
        swapped = nums[np.arange(nums.size) ^ (nums.size - 1)]
        nums = np.concatenate([nums + swapped, nums - swapped])
        den_pow2 += 1
    while den_pow2 > 0 and not np.any(nums & 1):
        nums = nums >> 1
        den_pow2 -= 1
    return nums, den_pow2


def mk_expand(n: int) -> list[BellTerm]:
    nums, den_pow2 = term_numerators(n)
    den = 1 << den_pow2
    return [
        BellTerm(Fraction(int(c), den), s) for s, c in enumerate(nums.tolist()) if c
    ]


@lru_cache(maxsize=None)
def class_coefficients(n: int) -> ClassCoefficients:
    """Per-class coefficients from the recursion on class vectors, O(n^2) exact arithmetic.

    Each step gives the coefficient of a k-primed selector two ways (last party
    unprimed or primed); both must agree for the combination to be symmetric.
    """
    _check_n(n)
    c = [Fraction(1), Fraction(1), Fraction(-1)]
    for m in range(2, n):
        # c has length m + 1, swapped class k reads c[m - k]
        new = []
        for k in range(m + 2):
            via_unprimed = (c[k] + c[m - k]) / 2 if k <= m else None
            via_primed = (c[k - 1] - c[m - k + 1]) / 2 if k >= 1 else None
            if via_unprimed is not None and via_primed is not None:
                if via_unprimed != via_primed:
                    raise ArithmeticError(
                        f"combination not permutation symmetric at n={m + 1}, k={k}"
                    )
            new.append(via_unprimed if via_unprimed is not None else via_primed)
        c = new
    return ClassCoefficients(n, tuple(c))


def group_terms_by_class(n: int, terms: Sequence[BellTerm]) -> list[set[Fraction]]:
    """Distinct coefficients seen in each primed-count class (zero for absent selectors)."""
    seen: list[set[Fraction]] = [set() for _ in range(n + 1)]
    present = {t.selector: t.coefficient for t in terms}
    for s in range(1 << n):
        seen[bin(s).count("1")].add(present.get(s, Fraction(0)))
    return seen


def odd_class_pattern(n: int) -> tuple[Fraction, ...]:
    """Per-selector coefficients of the four odd-N closed forms, keyed by n mod 8."""
    if n < 3 or n % 2 == 0:
        raise InvalidArgument(f"closed-form pattern needs odd n >= 3, got {n}")
    scale = Fraction(1, 2 ** ((n - 3) // 2))
    offset, base_sign = {3: (1, 1), 5: (0, -1), 7: (1, -1), 1: (0, 1)}[n % 8]
    c = [Fraction(0)] * (n + 1)
    for j in range((n - 1) // 2 + 1):
        k = 2 * j + offset
        if k <= n:
            c[k] = scale * base_sign * (-1) ** j
    return tuple(c)


def pi_by_class_exponent(n: int, r: float, J: float, k: int) -> float:
    return -2 * J * math.cosh(2 * r) * k + 2 * J * math.sinh(2 * r) * (k - 2 * k * k / n)


def pi_by_class(n: int, r: float, J: float, k: int) -> float:
    """Correlation with k parties displaced by i sqrt(J) and the rest undisplaced."""
    if not 0 <= k <= n:
        raise InvalidArgument(f"primed count {k} outside 0..{n}")
    if J < 0:
        raise InvalidArgument("displacement parameter J must be nonnegative")
    return math.exp(pi_by_class_exponent(n, r, J, k))


@lru_cache(maxsize=None)
def _float_weights(n: int) -> tuple[tuple[int, float], ...]:
    return tuple((k, float(w)) for k, w in class_coefficients(n).weights())


def _float_sum(weights, exponents) -> tuple[float, float]:
    terms = [w * math.exp(e) for w, e in zip(weights, exponents)]
    value = math.fsum(terms)
    # product and exp rounding plus the propagated error of each exponent
    err = _EPS * math.fsum(abs(t) * (3 + 2 * abs(e)) for t, e in zip(terms, exponents))
    return value, err + _EPS * abs(value)


def _mp_dps(n: int) -> int:
    return max(MP_MIN_DPS, 30 + int(0.35 * n))


@lru_cache(maxsize=None)
def _mp_weights(n: int, dps: int) -> tuple:
    with mpmath.workdps(dps):
        return tuple(
            (k, mpmath.mpf(w.numerator) / w.denominator)
            for k, w in class_coefficients(n).weights()
        )


def _class_sum(n: int, exponents_float, exponents_mp) -> BellValue:
    """Sum_k c[k] C(n,k) exp(exponent(k)) with float fast path and multiprecision fallback.

    The exponent callables map a list of class sizes k to a list of exponents.
    """
    weights = _float_weights(n)
    ks = [k for k, _ in weights]
    if n <= MP_ALWAYS_ABOVE:
        value, err = _float_sum([w for _, w in weights], exponents_float(ks))
        if err <= REL_ERROR_LIMIT * max(abs(value), 1.0):
            return BellValue(value, n, err)
    dps = _mp_dps(n)
    exact = _mp_weights(n, dps)
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        bound = mpmath.mpf(0)
        for (k, w), e in zip(exact, exponents_mp(ks)):
            t = w * mpmath.exp(e)
            total += t
            bound += abs(t) * (3 + 2 * abs(e))
        err = bound * mpmath.eps
        value = float(total)
    return BellValue(value, n, float(err) + _EPS * abs(value))


def bell_value_equal_settings(n: int, r: float, J: float) -> BellValue:
    """Combination with unprimed settings 0 and primed settings i sqrt(J) for every party."""
    _check_n(n)
    if J < 0 or r < 0:
        raise InvalidArgument("J and r must be nonnegative")

    def ef(ks):
        ch, sh = math.cosh(2 * r), math.sinh(2 * r)
        return [-2 * J * ch * k + 2 * J * sh * (k - 2 * k * k / n) for k in ks]

    def em(ks):
        jj, rr = mpmath.mpf(J), mpmath.mpf(r)
        ch, sh = mpmath.cosh(2 * rr), mpmath.sinh(2 * rr)
        return [-2 * jj * ch * k + 2 * jj * sh * (k - mpmath.mpf(2 * k * k) / n) for k in ks]

    return _class_sum(n, ef, em)


def bell_asymptotic(n: int, A: float) -> BellValue:
    """Large-squeezing limit as a function of A = J e^{2r}: Pi_k = exp(-2 A k^2 / n)."""
    _check_n(n)
    if A < 0:
        raise InvalidArgument("scaled displacement A must be nonnegative")

    def ef(ks):
        return [-2 * A * k * k / n for k in ks]

    def em(ks):
        aa = mpmath.mpf(A)
        return [-2 * aa * k * k / n for k in ks]

    return _class_sum(n, ef, em)


def bell_zero_squeezing(n: int, J: float) -> BellValue:
    """Closed form at r = 0, valid for n = 3 + 8M."""
    if n < 3 or n % 8 != 3:
        raise InvalidArgument(
            f"closed form holds for n = 3 mod 8 only (got {n}); "
            "use bell_value_equal_settings(n, 0, J) instead"
        )
    if J < 0:
        raise InvalidArgument("displacement parameter J must be nonnegative")
    # 2^{(3-n)/2} (1 + e^{-4J})^{n/2} sin(n atan e^{-2J}), rewritten with
    # atan e^{-2J} = pi/4 - atan(tanh J) and n pi/4 = 3 pi/4 mod 2 pi so J = 0 gives exactly 2
    delta = math.atan(math.tanh(J))
    mag = math.exp(n / 2 * (math.log(math.cosh(2 * J)) - 2 * J))
    value = 2 * mag * (math.cos(n * delta) + math.sin(n * delta))
    return BellValue(value, n, 8 * n * _EPS * mag)


def _settings_exponents(n: int, r: float, alphas: np.ndarray) -> np.ndarray:
    """Vectorised log Pi for a batch of displacement rows of shape (m, n)."""
    total = alphas.sum(axis=1)
    norm2 = np.sum(alphas.real**2 + alphas.imag**2, axis=1)
    cross = 4.0 / n * (total.real**2 - total.imag**2)
    local = 2.0 * np.sum(alphas.real**2 - alphas.imag**2, axis=1)
    return -2.0 * math.cosh(2 * r) * norm2 + math.sinh(2 * r) * (cross - local)


def bell_value_general(n: int, r: float, settings: SettingsTable) -> BellValue:
    """Full term-by-term evaluation for arbitrary complex settings."""
    _check_n(n)
    if settings.n != n:
        raise InvalidArgument(f"settings for {settings.n} parties, expected {n}")
    nums, den_pow2 = term_numerators(n)
    unprimed = np.array(settings.unprimed)
    primed = np.array(settings.primed)
    scale = 2.0**-den_pow2
    terms: list[float] = []
    abs_err: list[float] = []
    chunk = 1 << 14
    bits = 1 << np.arange(n)
    for start in range(0, nums.size, chunk):
        sel = np.arange(start, min(start + chunk, nums.size))
        coef = nums[sel] * scale
        keep = coef != 0
        sel, coef = sel[keep], coef[keep]
        mask = (sel[:, None] & bits[None, :]) != 0
        alphas = np.where(mask, primed[None, :], unprimed[None, :])
        e = _settings_exponents(n, r, alphas)
        t = coef * np.exp(e)
        terms.extend(t.tolist())
        abs_err.extend((np.abs(t) * (3 + 2 * np.abs(e))).tolist())
    value = math.fsum(terms)
    return BellValue(value, n, _EPS * (math.fsum(abs_err) + abs(value)))


def expansion_json(n: int, full: bool = False) -> dict:
    """JSON-ready {n, classes[, terms]} with coefficients as num / 2**den_pow2."""
    classes = []
    for k, c in enumerate(class_coefficients(n).coeffs):
        classes.append(
            {"k": k, "num": c.numerator, "den_pow2": c.denominator.bit_length() - 1}
        )
    out: dict = {"n": n, "classes": classes}
    if full:
        out["terms"] = [
            {
                "num": t.coefficient.numerator,
                "den_pow2": t.den_pow2,
                "selector_bits": t.selector,
            }
            for t in mk_expand(n)
        ]
    return out
