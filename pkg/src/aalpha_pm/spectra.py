"""A_alpha matrices, eigensolvers and equitable quotient matrices.

The spectral radius is computed by shifted power iteration, full spectra by
cyclic Jacobi rotations in round-robin order (disjoint pairs rotated together).
No LAPACK eigenroutine is used on the main path; tests compare against one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np

from .graph import Graph, PartitionSpec

__all__ = [
    "ConvergenceError",
    "SpectralResult",
    "QuotientMatrix",
    "EquitableViolation",
    "check_alpha",
    "a_alpha",
    "spectral_radius",
    "spectral_radius_batch",
    "rho_alpha",
    "jacobi_eigh",
    "full_spectrum",
    "quotient_spectrum",
    "quotient_radius",
    "quotient_b1",
    "quotient_b5",
    "quotient_b3_b4",
    "validate_equitable",
]

EQUALITY_TOL = 1e-9


class ConvergenceError(RuntimeError):
    pass


def check_alpha(alpha: Real) -> float:
    """Return ``alpha`` as float after checking ``0 <= alpha < 1``."""
    if isinstance(alpha, bool) or not isinstance(alpha, (Real, Fraction)):
        raise TypeError(f"alpha must be a real number, got {alpha!r}")
    if not 0 <= alpha < 1:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    return float(alpha)


@dataclass(frozen=True)
class SpectralResult:
    radius: float
    vector: np.ndarray
    iterations: int
    residual: float


@dataclass(frozen=True)
class QuotientMatrix:
    """Quotient of a symmetric matrix over a vertex partition with the given block sizes."""

    entries: np.ndarray
    sizes: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.sizes)

    def symmetrized(self) -> np.ndarray:
        # D^{1/2} B D^{-1/2} is symmetric because |X_i| b_ij = |X_j| b_ji.
        root = np.sqrt(np.asarray(self.sizes, dtype=float))
        sym = self.entries * root[:, None] / root[None, :]
        if not np.allclose(sym, sym.T, rtol=1e-12, atol=1e-12):
            raise ValueError("quotient is not the quotient of a symmetric matrix for these block sizes")
        return (sym + sym.T) / 2

    def charpoly(self) -> np.ndarray:
        """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
        b = self.entries
        k = self.dim
        coeffs = [1.0]
        m = np.zeros_like(b)
        for i in range(1, k + 1):
            m = b @ m + coeffs[-1] * np.eye(k)
            coeffs.append(-np.trace(b @ m) / i)
        return np.array(coeffs)


@dataclass(frozen=True)
class EquitableViolation:
    """Vertex whose neighbour count into ``block`` differs from the first vertex of its own block."""

    vertex: int
    block: int
    count: int
    expected: int

    def __bool__(self) -> bool:
        return False


def a_alpha(g: Graph, alpha: Real) -> np.ndarray:
    """``alpha * D(G) + (1 - alpha) * A(G)`` as a dense symmetric array."""
    a = check_alpha(alpha)
    m = g.adjacency_matrix() * (1.0 - a)
    m[np.diag_indices(g.n)] = a * np.asarray(g.degrees(), dtype=float)
    return m


def _iteration_cap(dim: int) -> int:
    return max(1000, int(100 * dim * math.log(max(dim, 2))))


def spectral_radius(m: np.ndarray, tol: float = 1e-13, max_iter: int | None = None) -> SpectralResult:
    """Largest eigenvalue of a nonnegative symmetric matrix by power iteration on ``m + I``.

    Stops when the Rayleigh quotient is stable to ``tol`` (relative) and the
    residual ``||m v - rho v||_inf`` is at most ``1e-12 * dim``.
    """
    m = np.asarray(m, dtype=float)
    dim = m.shape[0]
    if m.shape != (dim, dim):
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if (m < 0).any():
        raise ValueError("power iteration needs a nonnegative matrix")
    cap = _iteration_cap(dim) if max_iter is None else max_iter
    res_tol = 1e-12 * dim
    v = np.full(dim, 1.0 / math.sqrt(dim))
    mv = m @ v
    rho = float(v @ mv)
    for it in range(1, cap + 1):
        w = mv + v
        v = w / np.linalg.norm(w)
        mv = m @ v
        prev, rho = rho, float(v @ mv)
        residual = float(np.max(np.abs(mv - rho * v)))
        if residual <= res_tol and abs(rho - prev) <= tol * max(1.0, abs(rho)):
            return SpectralResult(rho, v, it, residual)
    raise ConvergenceError(
        f"power iteration did not converge in {cap} iterations (residual {residual:.3e})"
    )


def spectral_radius_batch(ms: np.ndarray, tol: float = 1e-13, max_iter: int | None = None) -> np.ndarray:
    """Vectorised :func:`spectral_radius` over a stack of shape ``(batch, dim, dim)``.

    Entries that fail to converge are finished with :func:`full_spectrum`.
    """
    ms = np.asarray(ms, dtype=float)
    batch, dim, _ = ms.shape
    if batch == 0:
        return np.zeros(0)
    cap = _iteration_cap(dim) if max_iter is None else max_iter
    res_tol = 1e-12 * dim
    v = np.full((batch, dim), 1.0 / math.sqrt(dim))
    mv = np.einsum("bij,bj->bi", ms, v)
    rho = np.einsum("bi,bi->b", v, mv)
    out = np.full(batch, np.nan)
    active = np.arange(batch)
    for _ in range(cap):
        w = mv + v
        v = w / np.linalg.norm(w, axis=1, keepdims=True)
        mv = np.einsum("bij,bj->bi", ms[active], v)
        prev, rho = rho, np.einsum("bi,bi->b", v, mv)
        residual = np.max(np.abs(mv - rho[:, None] * v), axis=1)
        done = (residual <= res_tol) & (np.abs(rho - prev) <= tol * np.maximum(1.0, np.abs(rho)))
        if done.any():
            out[active[done]] = rho[done]
            keep = ~done
            active, v, mv, rho = active[keep], v[keep], mv[keep], rho[keep]
            if active.size == 0:
                break
    for i in active:
        out[i] = full_spectrum(ms[i])[0]
    return out


def rho_alpha(g: Graph, alpha: Real) -> float:
    """``rho_alpha(G)``; falls back to the Jacobi solver if power iteration stalls."""
    m = a_alpha(g, alpha)
    try:
        return spectral_radius(m).radius
    except ConvergenceError:
        return float(full_spectrum(m)[0])


def _round_robin(dim: int) -> list[tuple[np.ndarray, np.ndarray]]:
    size = dim + dim % 2
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        ps, qs = [], []
        for i in range(size // 2):
            a, b = players[i], players[size - 1 - i]
            if a < dim and b < dim:
                ps.append(min(a, b))
                qs.append(max(a, b))
        rounds.append((np.array(ps, dtype=int), np.array(qs, dtype=int)))
        players = [players[0], players[-1], *players[1:-1]]
    return rounds


def jacobi_eigh(m: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with values descending and eigenvectors as
    columns. Sweeps stop once the off-diagonal Frobenius norm drops below
    ``tol * ||m||_F``.
    """
    a = np.array(m, dtype=float)
    dim = a.shape[0]
    if a.shape != (dim, dim):
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.array_equal(a, a.T):
        raise ValueError("jacobi_eigh needs an exactly symmetric matrix")
    vecs = np.eye(dim)
    if dim > 1:
        threshold = tol * np.linalg.norm(a)
        rounds = _round_robin(dim)
        for _ in range(max_sweeps):
            off = np.linalg.norm(a - np.diag(np.diag(a)))
            if off <= threshold:
                break
            for p, q in rounds:
                apq = a[p, q]
                nz = apq != 0.0
                if not nz.any():
                    continue
                p, q, apq = p[nz], q[nz], apq[nz]
                with np.errstate(over="ignore"):
                    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                big = np.abs(theta) > 1e150
                # t = tan of the rotation angle, the smaller root of t^2 + 2 theta t - 1 = 0
                t = np.where(
                    big,
                    0.5 / np.where(big, theta, 1.0),
                    np.sign(theta + (theta == 0)) / (np.abs(theta) + np.sqrt(np.where(big, 0.0, theta) ** 2 + 1.0)),
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(dim)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                a = (a + a.T) / 2
                a[p, q] = a[q, p] = 0.0
                vecs = vecs @ rot
        else:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], vecs[:, order]


def full_spectrum(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, descending."""
    return jacobi_eigh(m)[0]


def quotient_spectrum(b: QuotientMatrix) -> np.ndarray:
    return full_spectrum(b.symmetrized())


def quotient_radius(b: QuotientMatrix) -> float:
    return float(quotient_spectrum(b)[0])


# ---------------------------------------------------------------------------
# closed-form quotient matrices of the split families


def quotient_b1(spec: PartitionSpec, n: int, alpha: Real) -> QuotientMatrix:
    """Quotient of ``A_alpha(K_s + (K_{n1} u ... u K_{nq}))`` over the canonical blocks."""
    a = check_alpha(alpha)
    if n != spec.n:
        raise ValueError(f"n={n} does not match s + sum(parts) = {spec.n}")
    s, parts = spec.s, spec.parts
    k = len(parts) + 1
    b = np.zeros((k, k))
    b[0, 0] = n * a - s * a + s - 1
    for j, nj in enumerate(parts, start=1):
        b[0, j] = nj * (1 - a)
        b[j, 0] = s * (1 - a)
        b[j, j] = s * a + nj - 1
    return QuotientMatrix(b, spec.block_sizes())


def quotient_b5(n: int, s: int, alpha: Real) -> QuotientMatrix:
    """3x3 quotient of ``A_alpha(K_s + (K_{n-2s-1} u (s+1)K_1))``."""
    a = check_alpha(alpha)
    if not 1 <= s <= n // 2 - 1:
        raise ValueError(f"s must lie in [1, {n // 2 - 1}] for n={n}, got {s}")
    b = np.array([
        [n * a - s * a + s - 1, (n - 2 * s - 1) * (1 - a), (s + 1) * (1 - a)],
        [s * (1 - a), n + s * a - 2 * s - 2, 0.0],
        [s * (1 - a), 0.0, s * a],
    ])
    return QuotientMatrix(b, (s, n - 2 * s - 1, s + 1))


def quotient_b3_b4(n: int, s: int, q: int, alpha: Real) -> tuple[QuotientMatrix, QuotientMatrix]:
    """Quotients of ``K_s + (K_{n-s-q+1} u (q-1)K_1)`` and of the graph with two singletons merged in."""
    a = check_alpha(alpha)
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    if q < s + 2 or (q - s) % 2:
        raise ValueError(f"need q >= s + 2 with q = s (mod 2); got s={s}, q={q}")
    if q < 3:
        raise ValueError(f"B4 needs q >= 3, got q={q}")
    if n - s - q + 1 < 1:
        raise ValueError(f"n - s - q + 1 must be >= 1; got n={n}, s={s}, q={q}")
    top = n * a - s * a + s - 1
    b3 = np.array([
        [top, (n - q - s + 1) * (1 - a), (q - 1) * (1 - a)],
        [s * (1 - a), n - q + s * a - s, 0.0],
        [s * (1 - a), 0.0, s * a],
    ])
    b4 = np.array([
        [top, (n - q - s + 3) * (1 - a), (q - 3) * (1 - a)],
        [s * (1 - a), n - q + s * a - s + 2, 0.0],
        [s * (1 - a), 0.0, s * a],
    ])
    return (
        QuotientMatrix(b3, (s, n - q - s + 1, q - 1)),
        QuotientMatrix(b4, (s, n - q - s + 3, q - 3)),
    )


def validate_equitable(
    g: Graph, blocks: Sequence[Sequence[int]], alpha: Real = 0.0
) -> QuotientMatrix | EquitableViolation:
    """Quotient of ``A_alpha(g)`` if ``blocks`` is equitable, else the first violation found.

    Equitability is decided on integer neighbour counts, so it is exact.
    """
    a = check_alpha(alpha)
    seen = sorted(v for blk in blocks for v in blk)
    if seen != list(range(g.n)) or any(len(blk) == 0 for blk in blocks):
        raise ValueError("blocks must partition the vertex set into non-empty parts")
    masks = [sum(1 << v for v in blk) for blk in blocks]
    k = len(blocks)
    counts = np.zeros((k, k), dtype=int)
    for i, blk in enumerate(blocks):
        first = blk[0]
        ref = [(g.adj[first] & mj).bit_count() for mj in masks]
        for v in blk[1:]:
            for j, mj in enumerate(masks):
                c = (g.adj[v] & mj).bit_count()
                if c != ref[j]:
                    return EquitableViolation(v, j, c, ref[j])
        counts[i] = ref
    b = (1 - a) * counts.astype(float)
    b[np.diag_indices(k)] += a * counts.sum(axis=1)
    return QuotientMatrix(b, tuple(len(blk) for blk in blocks))
