"""Scalar and series primitives shared by the physics modules.

Complex scalars are plain Python ``complex`` values. Gamma-function ratios
never appear explicitly: every ratio Gamma(c + j) / Gamma(c) is evaluated as a
rising factorial, which stays exact near the poles that multiphoton
resonances bring close to the real axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import DegenerateCubic, NoConvergence, NoneFound, PoleHit

# rescale the running sum whenever it exceeds this magnitude
_RESCALE_AT = 1e200
_RESCALE_EXP10 = 200


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-14
    max_terms: int = 10_000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")


DEFAULT_SERIES = SeriesConfig()


def pochhammer(c: complex, j: int) -> complex:
    """Rising factorial c (c+1) ... (c+j-1); equals 1 for j == 0."""
    if j < 0:
        raise ValueError("j must be non-negative")
    out = complex(1.0)
    for k in range(j):
        out *= c + k
    return out


def hyper_series_scaled(c: complex, d: complex, z: float,
                        cfg: SeriesConfig = DEFAULT_SERIES) -> tuple[complex, int]:
    """Sum  sum_k z^k / (k! (c)_k (d)_k)  returning ``(mantissa, exp10)``.

    The value is ``mantissa * 10**exp10``; the split keeps large arguments
    (strong drive, weak interaction) from overflowing. Terms are produced by
    the exact ratio recursion and accumulated in increasing k. Near a
    multiphoton resonance the term sequence is strongly non-monotone, so
    stopping additionally requires a bound showing that every remaining
    term ratio is below one half, so the tail cannot exceed the last term.
    """
    if z < 0:
        raise ValueError("series argument must be non-negative")
    c = complex(c)
    d = complex(d)
    if z == 0:
        return complex(1.0), 0
    total = complex(1.0)
    term = complex(1.0)
    exp10 = 0
    small_run = 0
    for k in range(cfg.max_terms):
        den = (c + k) * (d + k)
        if den == 0:
            raise PoleHit(f"series denominator vanishes at k={k} (c={c}, d={d})")
        ratio = z / (den * (k + 1))
        if not cmath.isfinite(ratio):
            # denominator below the double range: a pole for all numerical purposes
            raise PoleHit(f"series denominator underflows at k={k} (c={c}, d={d})")
        while term and ratio and math.log10(abs(term)) + math.log10(abs(ratio)) > 300:
            total /= 10.0 ** _RESCALE_EXP10
            term /= 10.0 ** _RESCALE_EXP10
            exp10 += _RESCALE_EXP10
        term = term * ratio
        total += term
        if abs(total) > _RESCALE_AT:
            total /= 10.0 ** _RESCALE_EXP10
            term /= 10.0 ** _RESCALE_EXP10
            exp10 += _RESCALE_EXP10
        if abs(term) <= cfg.rel_tol * abs(total):
            small_run += 1
        else:
            small_run = 0
        if small_run >= 2 and _tail_ratio_bound(c, d, z, k + 1) < 0.5:
            return total, exp10
    raise NoConvergence(
        f"series did not converge in {cfg.max_terms} terms (c={c}, d={d}, z={z})")


def _min_shift_modulus(c: complex, k0: int) -> float:
    """min over integers k >= k0 of |c + k|."""
    k = max(k0, round(-c.real))
    return min(abs(c + k), abs(c + max(k0, k - 1)), abs(c + k + 1))


def _tail_ratio_bound(c: complex, d: complex, z: float, k0: int) -> float:
    """Upper bound on |term_{k+1} / term_k| for all k >= k0."""
    den = _min_shift_modulus(c, k0) * _min_shift_modulus(d, k0) * (k0 + 1)
    return math.inf if den == 0 else z / den


def hyper_series(c: complex, d: complex, z: float,
                 cfg: SeriesConfig = DEFAULT_SERIES) -> complex:
    mant, exp10 = hyper_series_scaled(c, d, z, cfg)
    if exp10 == 0:
        return mant
    value = mant * 10.0 ** exp10
    if not cmath.isfinite(value):
        raise OverflowError(f"series value exceeds the double range (10^{exp10} scale)")
    return value


def hyper_ratio(num: tuple[complex, complex, float], den: tuple[complex, complex, float],
                cfg: SeriesConfig = DEFAULT_SERIES) -> complex:
    """Ratio of two series, each given as ``(c, d, z)``, without overflow."""
    m1, e1 = hyper_series_scaled(*num, cfg=cfg)
    m2, e2 = hyper_series_scaled(*den, cfg=cfg)
    return (m1 / m2) * 10.0 ** (e1 - e2)


def solve_cubic(a3: float, a2: float, a1: float, a0: float) -> list[tuple[float, int]]:
    """Real roots of a3 x^3 + a2 x^2 + a1 x + a0 as ``(root, multiplicity)`` pairs.

    Roots come from the companion matrix, are classified with the
    discriminant sign and polished by Newton steps on the original
    polynomial. Sorted ascending.
    """
    if a3 == 0:
        raise DegenerateCubic("leading coefficient is zero")
    coeffs = np.array([a3, a2, a1, a0], dtype=float)
    scale = np.max(np.abs(coeffs))
    b, c, d = a2 / a3, a1 / a3, a0 / a3
    raw = np.roots([1.0, b, c, d])
    disc = 18 * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * c**3 - 27 * d**2
    # magnitude of the largest term, to judge the sign of disc
    disc_scale = max(abs(18 * b * c * d), abs(4 * b**3 * d), abs(b**2 * c**2),
                     abs(4 * c**3), abs(27 * d**2), 1e-300)

    def p(x):
        return ((a3 * x + a2) * x + a1) * x + a0

    def dp(x):
        return (3 * a3 * x + 2 * a2) * x + a1

    def polish(x):
        for _ in range(50):
            dx = dp(x)
            if dx == 0:
                break
            step = p(x) / dx
            x_new = x - step
            if abs(p(x_new)) >= abs(p(x)):
                break
            x = x_new
        return x

    if abs(disc) <= 1e-12 * disc_scale:
        # repeated root(s); group the real parts
        vals = sorted(float(r.real) for r in raw)
        groups: list[list[float]] = []
        for v in vals:
            if groups and abs(v - groups[-1][-1]) <= 1e-5 * max(1.0, abs(v)):
                groups[-1].append(v)
            else:
                groups.append([v])
        out = [(float(np.mean(g)), len(g)) for g in groups]
    elif disc > 0:
        out = [(polish(float(r.real)), 1) for r in raw]
    else:
        real = min(raw, key=lambda r: abs(r.imag))
        out = [(polish(float(real.real)), 1)]
    out.sort()
    for x, m in out:
        if m == 1 and abs(p(x)) > 1e-10 * scale * max(1.0, abs(x)) ** 3:
            raise ArithmeticError(f"cubic root residual too large at x={x}")
    return out


def _newton_2d(fmap: Callable[[complex], complex], x: complex, tol: float,
               max_iter: int, damping: float) -> complex | None:
    def resid(z):
        return fmap(z) - z

    g = resid(x)
    for _ in range(max_iter):
        if not cmath.isfinite(g):
            return None
        if abs(g) <= tol:
            # two extra polishing steps; the map is smooth near a fixed point
            for _ in range(2):
                x_try = _newton_step(resid, x, g)
                if x_try is None:
                    break
                g_try = resid(x_try)
                if not abs(g_try) < abs(g):
                    break
                x, g = x_try, g_try
            return x
        step_x = _newton_step(resid, x, g)
        accepted = False
        if step_x is not None:
            delta = step_x - x
            alpha = 1.0
            for _ in range(12):
                x_try = x + alpha * delta
                g_try = resid(x_try)
                if cmath.isfinite(g_try) and abs(g_try) < abs(g):
                    x, g = x_try, g_try
                    accepted = True
                    break
                alpha *= 0.5
        if not accepted:
            x_try = x + damping * g
            g_try = resid(x_try)
            if not cmath.isfinite(g_try):
                return None
            x, g = x_try, g_try
    return None


def _newton_step(resid, x: complex, g: complex) -> complex | None:
    h = 1e-7 * (1.0 + abs(x))
    d_re = (resid(x + h) - resid(x - h)) / (2 * h)
    d_im = (resid(x + 1j * h) - resid(x - 1j * h)) / (2 * h)
    jac = np.array([[d_re.real, d_im.real], [d_re.imag, d_im.imag]])
    try:
        dx = np.linalg.solve(jac, [-g.real, -g.imag])
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(dx)):
        return None
    return x + complex(dx[0], dx[1])


def find_fixed_points(fmap: Callable[[complex], complex], seeds: Iterable[complex],
                      tol: float = 1e-10, *, dedup_radius: float | None = None,
                      max_iter: int = 200, damping: float = 0.5) -> list[complex]:
    """Distinct fixed points of ``fmap`` reached from ``seeds``.

    Each seed runs Newton iteration on the two real components of
    ``fmap(x) - x`` with a backtracking line search, falling back to a
    damped plain iteration when no Newton step reduces the residual.
    Seeds whose map evaluation fails are skipped.
    """
    radius = 10 * tol if dedup_radius is None else dedup_radius
    found: list[complex] = []
    for seed in seeds:
        try:
            x = _newton_2d(fmap, complex(seed), tol, max_iter, damping)
        except (ArithmeticError, ValueError, PoleHit, NoConvergence):
            continue
        if x is None:
            continue
        if any(abs(x - y) <= radius for y in found):
            continue
        found.append(x)
    if not found:
        raise NoneFound("no seed converged to a fixed point")
    return found
