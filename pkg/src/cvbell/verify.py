"""Cross-path consistency checks run by `cvbell verify`."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import gaussian
from .bell import (
    bell_value_equal_settings,
    bell_zero_squeezing,
    class_coefficients,
    group_terms_by_class,
    mk_expand,
    odd_class_pattern,
)
from .fock import displaced_parity_expectation, fock_ghz_state
from .parity import pi_closed_form, pi_from_state


def check_quadratic_form() -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, 9):
        for r in (0.0, 0.5, 1.0):
            m = gaussian.quadratic_form_of(gaussian.build_ghz_state(n, r))
            worst = max(worst, float(np.max(np.abs(m - gaussian.ghz_quadratic_form(n, r)))))
    return worst < 1e-12, f"max entry deviation {worst:.2e}"


def check_purity() -> tuple[bool, str]:
    worst = 0.0
    for n in range(2, 9):
        for r in (0.0, 0.3, 1.0, 2.0):
            ev = gaussian.symplectic_eigenvalues(gaussian.build_ghz_state(n, r))
            worst = max(worst, float(np.max(np.abs(ev - gaussian.VACUUM_VARIANCE))))
    return worst < 1e-10, f"max symplectic eigenvalue deviation {worst:.2e}"


def check_wigner_vs_closed_form() -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n in range(2, 7):
        for r in (0.0, 0.4, 1.2):
            state = gaussian.build_ghz_state(n, r)
            for _ in range(100):
                pt = rng.normal(scale=0.4, size=n) + 1j * rng.normal(scale=0.4, size=n)
                a, b = pi_from_state(state, pt), pi_closed_form(n, r, pt)
                if b > 0:
                    worst = max(worst, abs(a - b) / b)
    return worst < 1e-10, f"max relative deviation {worst:.2e}"


def check_expansion() -> tuple[bool, str]:
    for n in range(2, 13):
        terms = mk_expand(n)
        groups = group_terms_by_class(n, terms)
        if any(len(g) != 1 for g in groups):
            return False, f"n={n}: unequal coefficients within a class"
        if tuple(next(iter(g)) for g in groups) != class_coefficients(n).coeffs:
            return False, f"n={n}: grouped terms differ from class coefficients"
        l1 = sum(abs(t.coefficient) for t in terms)
        if l1 != 2 ** (n // 2 + 1):
            return False, f"n={n}: l1 norm {l1}"
    for n in range(3, 18, 2):
        if class_coefficients(n).coeffs != odd_class_pattern(n):
            return False, f"n={n}: odd closed-form pattern mismatch"
    return True, "n <= 12 terms, odd n <= 17 patterns"


def check_zero_squeezing() -> tuple[bool, str]:
    worst = 0.0
    for n in (3, 11):
        for J in np.linspace(0.0, 2.0, 41):
            a = bell_zero_squeezing(n, float(J)).value
            b = bell_value_equal_settings(n, 0.0, float(J)).value
            worst = max(worst, abs(a - b))
    return worst < 1e-12, f"max deviation {worst:.2e}"


def check_fock_oracle() -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    details = []
    ok = True
    for n, r, cutoff, tol in ((2, 0.3, 30, 1e-6), (3, 0.2, 14, 1e-5)):
        state = fock_ghz_state(n, r, cutoff)
        worst = 0.0
        for _ in range(50):
            pt = rng.uniform(-0.5, 0.5, n) + 1j * rng.uniform(-0.5, 0.5, n)
            worst = max(worst, abs(displaced_parity_expectation(state, pt) - pi_closed_form(n, r, pt)))
        ok &= worst <= tol
        details.append(f"N={n}: {worst:.1e}")
    return ok, ", ".join(details)


CHECKS: list[tuple[str, Callable[[], tuple[bool, str]], bool]] = [
    ("quadratic_form", check_quadratic_form, False),
    ("purity", check_purity, False),
    ("wigner_vs_closed_form", check_wigner_vs_closed_form, False),
    ("expansion", check_expansion, False),
    ("zero_squeezing", check_zero_squeezing, False),
    ("fock_oracle", check_fock_oracle, True),
]


def run_checks(fast: bool = False) -> list[tuple[str, bool, str]]:
    results = []
    for name, check, slow in CHECKS:
        if fast and slow:
            continue
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results
