"""Closed-form polynomials behind the A_alpha perfect-matching threshold.

Every cubic here is built from its symbolic coefficient formula. The tests
cross-check each one against characteristic polynomials of the quotient
matrices in :mod:`aalpha_pm.spectra`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from .graph import PartitionSpec
from .spectra import check_alpha

__all__ = [
    "CubicPoly",
    "HypothesisError",
    "theorem_cubic",
    "phi_b5_coeffs",
    "adjacency_cubic",
    "signless_laplacian_cubic",
    "psi_eval",
    "largest_real_root",
    "threshold",
    "f_alpha",
    "order_meets_hypothesis",
    "min_even_order",
    "g5_root",
    "closed_form_g5_max",
    "ADJACENCY_N6_THRESHOLD",
]

# Adjacency threshold for n = 6, where the general cubic does not apply.
ADJACENCY_N6_THRESHOLD = (1 + math.sqrt(33)) / 2

_ORDER_TOL = 1e-9


class HypothesisError(ValueError):
    """The order ``n`` does not satisfy ``n >= f(alpha)`` (or is odd)."""


@dataclass(frozen=True)
class CubicPoly:
    """``c3 x^3 + c2 x^2 + c1 x + c0``; ``c3`` may be 0 for a degenerate quadratic."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, x: float) -> float:
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x: float) -> float:
        return (3 * self.c3 * x + 2 * self.c2) * x + self.c1

    @property
    def coeffs(self) -> tuple[float, float, float, float]:
        return (self.c3, self.c2, self.c1, self.c0)

    def critical_points(self) -> list[float]:
        a, b, c = 3 * self.c3, 2 * self.c2, self.c1
        if a == 0:
            return [] if b == 0 else [-c / b]
        disc = b * b - 4 * a * c
        if disc < 0:
            return []
        r = math.sqrt(disc)
        # stable quadratic formula
        qv = -0.5 * (b + math.copysign(r, b))
        roots = [qv / a] if qv == 0 else [qv / a, c / qv]
        return sorted(set(roots))


def theorem_cubic(n: int, alpha: Real) -> CubicPoly:
    """Cubic whose largest root is ``rho_alpha(K_1 + (K_{n-3} u 2K_1))``."""
    a = check_alpha(alpha)
    return CubicPoly(
        1.0,
        -((a + 1) * n + a - 4),
        a * n * n + (a * a - 2 * a - 1) * n - 2 * a + 1,
        -a * a * n * n + (5 * a * a - 3 * a + 2) * n - 10 * a * a + 15 * a - 8,
    )


def phi_b5_coeffs(n: int, s: int, alpha: Real) -> CubicPoly:
    """Characteristic polynomial of the 3x3 quotient of ``K_s + (K_{n-2s-1} u (s+1)K_1)``."""
    a = check_alpha(alpha)
    if not 1 <= s <= n // 2 - 1:
        raise ValueError(f"s must lie in [1, {n // 2 - 1}] for n={n}, got {s}")
    return CubicPoly(
        1.0,
        3 - a * n - s * (a - 1) - n,
        -(s * s - a * (a * n - 2) * s - (a * n - 1) * (n - 2)),
        (3 * a - 2) * (1 - a) * s ** 3
        + (8 * a + n - 2 * a * n + 2 * a * a * n - 5 * a * a - 4) * s * s
        - (n - 2) * (a + a * a * n - a * a - 1) * s,
    )


def adjacency_cubic(n: int) -> CubicPoly:
    """``x^3 - (n-4)x^2 - (n-1)x + 2(n-4)``, the adjacency-spectral-radius threshold cubic."""
    return CubicPoly(1, -(n - 4), -(n - 1), 2 * (n - 4))


def signless_laplacian_cubic(n: int) -> CubicPoly:
    """``x^3 - (3n-7)x^2 + n(2n-7)x - 2(n^2-7n+12)``, the signless Laplacian threshold cubic."""
    return CubicPoly(1, -(3 * n - 7), n * (2 * n - 7), -2 * (n * n - 7 * n + 12))


def psi_eval(spec: PartitionSpec, n: int, alpha: Real, x: float) -> float:
    """Characteristic polynomial of the split-family quotient at ``x``.

    ``(x - top) * prod_j (x - d_j) - s(1-alpha)^2 * sum_i n_i prod_{j != i} (x - d_j)``
    with ``top = n a - s a + s - 1`` and ``d_j = s a + n_j - 1``; terms are summed
    with :func:`math.fsum`.
    """
    a = check_alpha(alpha)
    if n != spec.n:
        raise ValueError(f"n={n} does not match s + sum(parts) = {spec.n}")
    s = spec.s
    factors = [x - s * a - nj + 1 for nj in spec.parts]
    terms = [(x - n * a + s * a - s + 1) * math.prod(factors)]
    weight = s * (1 - a) ** 2
    for i, ni in enumerate(spec.parts):
        terms.append(-weight * ni * math.prod(f for j, f in enumerate(factors) if j != i))
    return math.fsum(terms)


def _sign(v: float) -> int:
    return int(v > 0) - int(v < 0)


def largest_real_root(p: CubicPoly, lo: float, hi: float) -> float:
    """Largest real root of ``p`` in ``[lo, hi]``; the endpoints must straddle a sign change.

    The bracket is cut at the critical points of ``p`` so that each piece is
    monotone; the highest piece with a sign change is bisected to width 1e-13
    and the result polished by Newton steps kept inside that piece.
    """
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    plo, phi = p(lo), p(hi)
    if _sign(plo) * _sign(phi) > 0:
        raise ValueError(f"bracket [{lo}, {hi}] does not straddle a sign change (p={plo:.3g}, {phi:.3g})")
    cuts = [lo, *[c for c in p.critical_points() if lo < c < hi], hi]
    for left, right in reversed(list(zip(cuts, cuts[1:]))):
        fr = p(right)
        if fr == 0:
            return right
        fl = p(left)
        if _sign(fl) * _sign(fr) <= 0:
            break
    else:  # pragma: no cover - unreachable given the endpoint sign check
        raise ValueError("no sign change located")
    if fl == 0:
        return left
    sr = _sign(fr)
    a, b = left, right
    while b - a > 1e-13 * max(1.0, abs(a), abs(b)) and b - a > 1e-13:
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = p(mid)
        if fm == 0:
            return mid
        if _sign(fm) == sr:
            b = mid
        else:
            a = mid
    x = 0.5 * (a + b)
    for _ in range(3):
        d = p.derivative(x)
        if d == 0:
            break
        nx = x - p(x) / d
        if not left <= nx <= right or nx == x:
            break
        if abs(p(nx)) > abs(p(x)):
            break
        x = nx
    return x


def f_alpha(alpha: Real) -> int | float | Fraction:
    """Minimum order for the threshold theorem: 10, 14, or ``5 / (1 - alpha)``.

    Exact (a :class:`Fraction`) when ``alpha`` is a Fraction.
    """
    check_alpha(alpha)
    if alpha <= Fraction(1, 2):
        return 10
    if alpha <= Fraction(2, 3):
        return 14
    if isinstance(alpha, Fraction):
        return 5 / (1 - alpha)
    return 5.0 / (1.0 - float(alpha))


def order_meets_hypothesis(n: int, alpha: Real) -> bool:
    """``n`` even and ``n >= f(alpha)``, with 1e-9 slack for float round-off in ``5/(1-alpha)``."""
    return n % 2 == 0 and n >= f_alpha(alpha) - _ORDER_TOL


def min_even_order(alpha: Real) -> int:
    """Smallest even ``n`` with ``n >= f(alpha)``."""
    n = math.ceil(f_alpha(alpha) - _ORDER_TOL)
    return n + n % 2


def threshold(n: int, alpha: Real, force: bool = False) -> float:
    """``rho_alpha(K_1 + (K_{n-3} u 2K_1))`` as the largest root of :func:`theorem_cubic`.

    Refuses orders outside the theorem's hypothesis unless ``force`` is set.
    """
    check_alpha(alpha)
    if not force and not order_meets_hypothesis(n, alpha):
        raise HypothesisError(
            f"n={n} does not satisfy 'n even and n >= f(alpha) = {float(f_alpha(alpha)):g}'; "
            "pass force=True to compute the root anyway"
        )
    if n < 4:
        raise ValueError(f"the extremal graph needs n >= 4, got {n}")
    p = theorem_cubic(n, alpha)
    lo, hi = float(n - 3), float(n - 1)
    width = hi - lo
    while _sign(p(lo)) * _sign(p(hi)) > 0 and (lo > 0 or hi < 2 * n):
        lo, hi = max(0.0, lo - width), min(2.0 * n, hi + width)
        width *= 2
    return largest_real_root(p, lo, hi)


def g5_root(n: int, s: int, alpha: Real) -> float:
    """Largest root of :func:`phi_b5_coeffs`, i.e. ``rho_alpha(K_s + (K_{n-2s-1} u (s+1)K_1))``."""
    p = phi_b5_coeffs(n, s, alpha)
    # every eigenvalue of A_alpha lies in [-(n-1), n-1]
    return largest_real_root(p, -float(n), float(n))


def closed_form_g5_max(n: int, alpha: Real) -> float:
    """``rho_alpha`` of ``K_{n/2-1} + (n/2)K_1`` from its explicit formula."""
    a = check_alpha(alpha)
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    disc = (4 * a * a - 8 * a + 5) * n * n + 8 * (a - 1) * n
    return 0.25 * ((2 * a + 1) * n - 4 + math.sqrt(disc))
