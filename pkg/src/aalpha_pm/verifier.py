"""Threshold certification, numerical checks of the extremal orderings, and reports.

``certify`` applies the A_alpha threshold to one graph. ``verify_claim1/2/3``
compare spectral radii of the split families that the threshold argument
reduces to. ``exhaustive_verify`` checks soundness against an exact
perfect-matching oracle over an enumerated, random, or graph6 corpus stream.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import (
    Graph,
    GraphFormatError,
    PartitionSpec,
    enumerate_graphs,
    is_connected,
    read_graph6_file,
    split_family,
    to_graph6,
)
from .matching import DP_MAX_ORDER, has_perfect_matching_dp, max_matching
from .spectra import (
    EQUALITY_TOL,
    check_alpha,
    quotient_b1,
    quotient_b3_b4,
    quotient_b5,
    quotient_radius,
    rho_alpha,
    spectral_radius_batch,
)
from .thresholds import g5_root, order_meets_hypothesis, threshold

__all__ = [
    "Verdict",
    "Certificate",
    "ClaimCheck",
    "ClaimReport",
    "SweepRow",
    "SweepReport",
    "VerificationReport",
    "DEFAULT_ALPHAS",
    "DEFAULT_ORDERS",
    "is_extremal",
    "certify",
    "collapse_spec",
    "verify_claim1",
    "verify_claim2",
    "verify_claim3",
    "sweep_table",
    "sweep_argmax_s",
    "sweep",
    "random_claim1_specs",
    "random_claim2_params",
    "random_connected_graphs",
    "exhaustive_verify",
    "emit_report",
    "format_float",
]

logger = logging.getLogger(__name__)

DEFAULT_ALPHAS: tuple[Fraction, ...] = tuple(
    sorted({Fraction(k, 10) for k in range(10)}
           | {Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(11, 16),
              Fraction(2, 3), Fraction(3, 4), Fraction(9, 10)})
)
DEFAULT_ORDERS: tuple[int, ...] = tuple(range(10, 41, 2))

CERTIFICATE_FIELDS = ("graph6", "alpha", "rho", "threshold", "verdict", "oracle_pm")
SWEEP_FIELDS = ("n", "alpha", "s", "largest_root", "is_argmax")
CLAIM_FIELDS = ("claim", "n", "alpha", "params", "lhs", "rhs", "margin", "expected",
                "passed", "in_hypothesis", "note")


def format_float(x: float | None) -> float | None:
    """Round to 12 significant digits; the shortest repr of the result is what gets printed."""
    if x is None or isinstance(x, bool):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


class Verdict(str, enum.Enum):
    PM_GUARANTEED = "PM_GUARANTEED"
    EXTREMAL_EXCEPTION = "EXTREMAL_EXCEPTION"
    INCONCLUSIVE = "INCONCLUSIVE"
    HYPOTHESIS_UNMET = "HYPOTHESIS_UNMET"


@dataclass(frozen=True)
class Certificate:
    graph6: str
    alpha: float
    rho: float
    threshold: float
    verdict: Verdict
    oracle_pm: bool | None = None
    reason: str = ""

    fields = CERTIFICATE_FIELDS

    def record(self) -> dict:
        return {
            "graph6": self.graph6,
            "alpha": format_float(self.alpha),
            "rho": format_float(self.rho),
            "threshold": format_float(self.threshold),
            "verdict": self.verdict.value,
            "oracle_pm": self.oracle_pm,
        }


def is_extremal(g: Graph) -> bool:
    """Structural test for ``K_1 + (K_{n-3} u 2K_1)``.

    One vertex of degree ``n-1``; deleting it leaves two isolated vertices and
    a clique on the other ``n-3``.
    """
    n = g.n
    if n < 4:
        return False
    degs = g.degrees()
    if sorted(degs) != sorted([n - 1] + [n - 3] * (n - 3) + [1, 1]):
        return False
    hubs = [v for v in range(n) if degs[v] == n - 1]
    # for n = 4 every leaf has degree 1 = n - 3, so the hub is the unique degree-3 vertex
    if len(hubs) != 1:
        return False
    hub = hubs[0]
    rest = g.subgraph_without(1 << hub)
    inner = sorted(rest[v].bit_count() for v in range(n) if v != hub)
    return inner == [0, 0] + [n - 4] * (n - 3)


def _oracle(g: Graph) -> bool:
    if g.n % 2:
        return False
    if g.n <= DP_MAX_ORDER:
        return has_perfect_matching_dp(g)
    return max_matching(g).perfect


def _threshold_or_nan(n: int, alpha: Real) -> float:
    try:
        return threshold(n, alpha, force=True)
    except ValueError:
        return math.nan


def certify(
    g: Graph,
    alpha: Real,
    oracle: bool = False,
    threshold_override: float | None = None,
    rho: float | None = None,
) -> Certificate:
    """Apply the A_alpha threshold to ``g``.

    Without an override the bound is ``rho >= threshold(n, alpha) - 1e-9`` and
    the hypothesis is: connected, ``n`` even, ``n >= f(alpha)``. With
    ``threshold_override`` (the special adjacency thresholds for n = 4, 6) the
    bound is strict, ``rho > override + 1e-9``, and only connectivity and even
    order are required.
    """
    a = check_alpha(alpha)
    n = g.n
    if rho is None:
        rho = rho_alpha(g, alpha)
    reason = ""
    if threshold_override is None:
        thr = _threshold_or_nan(n, alpha)
        if n % 2:
            reason = "odd order"
        elif not order_meets_hypothesis(n, alpha):
            reason = "order below f(alpha)"
        meets = rho >= thr - EQUALITY_TOL
    else:
        thr = float(threshold_override)
        if n % 2:
            reason = "odd order"
        meets = rho > thr + EQUALITY_TOL
    if not reason and not is_connected(g):
        reason = "disconnected"

    if reason:
        verdict = Verdict.HYPOTHESIS_UNMET
    elif not meets:
        verdict = Verdict.INCONCLUSIVE
    elif is_extremal(g):
        verdict = Verdict.EXTREMAL_EXCEPTION
    else:
        verdict = Verdict.PM_GUARANTEED

    oracle_pm = _oracle(g) if oracle and n % 2 == 0 else None
    return Certificate(to_graph6(g), a, float(rho), thr, verdict, oracle_pm, reason)


# ---------------------------------------------------------------------------
# orderings among the split families


@dataclass(frozen=True)
class ClaimCheck:
    """One comparison ``lhs <= rhs``; ``margin = rhs - lhs``."""

    claim: str
    n: int
    alpha: float
    params: str
    lhs: float
    rhs: float
    expected: str  # "strict" or "equal"
    in_hypothesis: bool = True
    note: str = ""
    argmax_s: int | None = None

    fields = CLAIM_FIELDS

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool | None:
        if math.isnan(self.margin):
            return None
        if self.expected == "equal":
            return abs(self.margin) <= EQUALITY_TOL
        return self.margin > EQUALITY_TOL

    def record(self) -> dict:
        return {
            "claim": self.claim,
            "n": self.n,
            "alpha": format_float(self.alpha),
            "params": self.params,
            "lhs": format_float(self.lhs),
            "rhs": format_float(self.rhs),
            "margin": format_float(self.margin),
            "expected": self.expected,
            "passed": self.passed,
            "in_hypothesis": self.in_hypothesis,
            "note": self.note,
        }


@dataclass
class ClaimReport:
    checks: list[ClaimCheck] = field(default_factory=list)

    fields = CLAIM_FIELDS

    def records(self) -> list[dict]:
        return [c.record() for c in self.checks]

    @property
    def failures(self) -> list[ClaimCheck]:
        """Checks that should hold but did not (out-of-hypothesis failures excluded)."""
        return [c for c in self.checks if c.in_hypothesis and c.passed is False]


def collapse_spec(spec: PartitionSpec) -> PartitionSpec:
    """``(s, [n1..nq]) -> (s, [n - s - q + 1, 1, ..., 1])``."""
    return PartitionSpec(spec.s, (spec.n - spec.s - spec.q + 1,) + (1,) * (spec.q - 1))


def _claim1_problem(spec: PartitionSpec) -> str:
    if any(p % 2 == 0 for p in spec.parts):
        return "parts must all be odd"
    if spec.q < spec.s + 2:
        return "need q >= s + 2"
    if (spec.q - spec.s) % 2:
        return "need q = s (mod 2)"
    return ""


def verify_claim1(specs: Iterable[PartitionSpec], alpha: Real) -> list[ClaimCheck]:
    """Collapsing all odd parts but the largest into singletons never lowers the radius."""
    a = check_alpha(alpha)
    out = []
    for spec in specs:
        label = f"s={spec.s};parts={'-'.join(map(str, spec.parts))}"
        problem = _claim1_problem(spec)
        if problem:
            out.append(ClaimCheck("claim1", spec.n, a, label, math.nan, math.nan, "strict",
                                  note=f"skipped: {problem}"))
            continue
        target = collapse_spec(spec)
        lhs = quotient_radius(quotient_b1(spec, spec.n, alpha))
        rhs = quotient_radius(quotient_b1(target, spec.n, alpha))
        expected = "equal" if target == spec else "strict"
        out.append(ClaimCheck("claim1", spec.n, a, label, lhs, rhs, expected))
    return out


def verify_claim2(n: int, s: int, q: int, alpha: Real) -> ClaimCheck:
    """``K_s + (K_{n-s-q+1} u (q-1)K_1)`` is dominated by the ``q = s + 2`` member."""
    a = check_alpha(alpha)
    label = f"s={s};q={q}"
    try:
        b3, _ = quotient_b3_b4(n, s, q, alpha)
    except ValueError as exc:
        return ClaimCheck("claim2", n, a, label, math.nan, math.nan, "strict", note=f"skipped: {exc}")
    lhs = quotient_radius(b3)
    rhs = quotient_radius(quotient_b5(n, s, alpha))
    return ClaimCheck("claim2", n, a, label, lhs, rhs, "equal" if q == s + 2 else "strict")


def verify_claim3(n: int, alpha: Real) -> ClaimCheck:
    """Largest G5^s root over ``s >= 2`` against the threshold (the ``s = 1`` root)."""
    a = check_alpha(alpha)
    inside = order_meets_hypothesis(n, alpha)
    note = "" if inside else "n below f(alpha): failure allowed"
    rhs = threshold(n, alpha, force=True)
    roots = {s: g5_root(n, s, alpha) for s in range(2, n // 2)}
    if not roots:
        return ClaimCheck("claim3", n, a, "s=2..", -math.inf, rhs, "strict", inside, "no s >= 2 for this n")
    best = max(roots, key=lambda s: (roots[s], -s))
    check = ClaimCheck("claim3", n, a, f"s=2..{n // 2 - 1};argmax={best}", roots[best], rhs,
                       "strict", inside, note, best)
    if inside and not check.passed:
        logger.warning("claim3 fails inside hypothesis at n=%d alpha=%s (margin %.3e)", n, alpha, check.margin)
    return check


# ---------------------------------------------------------------------------
# sweeps over s


@dataclass(frozen=True)
class SweepRow:
    n: int
    alpha: float
    s: int
    largest_root: float
    is_argmax: bool

    fields = SWEEP_FIELDS

    def record(self) -> dict:
        return {
            "n": self.n,
            "alpha": format_float(self.alpha),
            "s": self.s,
            "largest_root": format_float(self.largest_root),
            "is_argmax": self.is_argmax,
        }


@dataclass
class SweepReport:
    rows: list[SweepRow] = field(default_factory=list)
    argmax: dict[tuple[int, float], int] = field(default_factory=dict)
    claim_checks: list[ClaimCheck] = field(default_factory=list)

    fields = SWEEP_FIELDS

    def records(self) -> list[dict]:
        return [r.record() for r in self.rows]

    @property
    def off_dichotomy(self) -> list[tuple[int, float, int]]:
        """Grid points whose argmax is neither 1 nor n/2 - 1."""
        return [(n, a, s) for (n, a), s in self.argmax.items() if s not in (1, n // 2 - 1)]


def _argmax_with_ties(roots: Sequence[float]) -> int:
    top = max(roots)
    return next(i for i, r in enumerate(roots) if r >= top - EQUALITY_TOL)


def sweep_table(n: int, alpha: Real) -> list[SweepRow]:
    """Largest G5^s root for every ``s`` in ``1..n/2-1``, argmax flagged (ties go to smaller s)."""
    a = check_alpha(alpha)
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    roots = [g5_root(n, s, alpha) for s in range(1, n // 2)]
    best = _argmax_with_ties(roots)
    return [SweepRow(n, a, s, r, i == best) for i, (s, r) in enumerate(zip(range(1, n // 2), roots))]


def sweep_argmax_s(n: int, alpha: Real) -> int:
    return next(row.s for row in sweep_table(n, alpha) if row.is_argmax)


def sweep(orders: Iterable[int] = DEFAULT_ORDERS, alphas: Iterable[Real] = DEFAULT_ALPHAS,
          with_claim3: bool = True) -> SweepReport:
    report = SweepReport()
    for alpha in alphas:
        for n in orders:
            rows = sweep_table(n, alpha)
            report.rows.extend(rows)
            best = next(r.s for r in rows if r.is_argmax)
            report.argmax[(n, float(alpha))] = best
            if best not in (1, n // 2 - 1):
                logger.warning("argmax s=%d at n=%d alpha=%s is neither 1 nor n/2-1", best, n, alpha)
            if with_claim3:
                report.claim_checks.append(verify_claim3(n, alpha))
    return report


# ---------------------------------------------------------------------------
# random instances


def _random_odd_parts(rng: np.random.Generator, total: int, q: int) -> list[int]:
    # q odd parts summing to total (total = q mod 2, total >= q)
    extra = (total - q) // 2
    cuts = np.sort(rng.integers(0, extra + 1, size=q - 1))
    pieces = np.diff(np.concatenate(([0], cuts, [extra])))
    return sorted((1 + 2 * int(p) for p in pieces), reverse=True)


def random_claim1_specs(count: int, seed: int = 0, max_n: int = 60) -> list[PartitionSpec]:
    """Valid instances: odd parts, ``q >= s + 2``, ``q = s (mod 2)``, ``n <= max_n``."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = int(rng.integers(1, 8))
        q = s + 2 + 2 * int(rng.integers(0, 4))
        n = int(rng.integers(s + q, max_n + 1))
        n -= (n - s - q) % 2
        if n < s + q:
            continue
        out.append(PartitionSpec(s, tuple(_random_odd_parts(rng, n - s, q))))
    return out


def random_claim2_params(count: int, seed: int = 0, max_n: int = 60) -> list[tuple[int, int, int]]:
    """Tuples ``(n, s, q)`` with ``q >= s + 2``, ``q = s (mod 2)``, ``n - s - q + 1 >= 1``, n even."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = int(rng.integers(1, 10))
        q = s + 2 + 2 * int(rng.integers(0, 5))
        n = int(rng.integers(s + q, max_n + 1))
        n += n % 2
        if n > max_n or n - s - q + 1 < 1:
            continue
        out.append((n, s, q))
    return out


def _graph_from_rows(n: int, rows: np.ndarray) -> Graph:
    return Graph._trusted(n, [int(r) for r in rows])


def random_connected_graphs(n: int, count: int, seed: int = 0, planted_fraction: float = 0.25) -> Iterator[Graph]:
    """Random connected graphs of order ``n``.

    Most are G(n, p) with ``p`` drawn uniformly from [0.2, 1] so that dense,
    above-threshold graphs are common. A ``planted_fraction`` share are
    perturbations of Tutte-deficient split families (a few edges toggled), which
    keeps graphs near the extremal structure in the sample.
    """
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    weights = np.array([1 << v for v in range(n)], dtype=np.int64)
    bases = [split_family(PartitionSpec(s, (n - 2 * s - 1,) + (1,) * (s + 1))) for s in range(1, n // 2)]
    made = 0
    while made < count:
        if rng.random() < planted_fraction and bases:
            base = bases[0] if rng.random() < 0.5 else bases[int(rng.integers(len(bases)))]
            m = base.adjacency_matrix()
            for _ in range(int(rng.integers(0, 4))):
                i, j = rng.choice(n, size=2, replace=False)
                m[i, j] = m[j, i] = 1.0 - m[i, j]
        else:
            p = rng.uniform(0.2, 1.0)
            m = np.zeros((n, n))
            m[iu] = rng.random(len(iu[0])) < p
            m = m + m.T
        g = _graph_from_rows(n, m.astype(np.int64) @ weights)
        if is_connected(g):
            made += 1
            yield g


# ---------------------------------------------------------------------------
# soundness verification over graph streams


@dataclass
class VerificationReport:
    alpha: float
    threshold_override: float | None
    counts: Counter = field(default_factory=Counter)
    certificates: list[Certificate] = field(default_factory=list)
    violations: list[Certificate] = field(default_factory=list)
    parse_errors: list[tuple[int, str]] = field(default_factory=list)

    fields = CERTIFICATE_FIELDS

    def records(self) -> list[dict]:
        return [c.record() for c in self.certificates]

    def summary(self) -> dict:
        keys = ("checked", "skipped_odd", "skipped_disconnected", "hypothesis_unmet",
                "above_threshold", "exceptions", "violations", "parse_errors")
        return {k: int(self.counts.get(k, 0)) for k in keys}


def _source_stream(source) -> Iterator[tuple[int, Graph | GraphFormatError]]:
    if isinstance(source, int):
        for i, g in enumerate(enumerate_graphs(source), start=1):
            yield i, g
    elif isinstance(source, (str, os.PathLike)):
        yield from read_graph6_file(source)
    else:
        for i, g in enumerate(source, start=1):
            yield i, g


def _stack_a_alpha(graphs: Sequence[Graph], alpha: float) -> np.ndarray:
    n = graphs[0].n
    rows = np.array([g.adj for g in graphs], dtype=np.int64)
    adj = ((rows[:, :, None] >> np.arange(n)) & 1).astype(float)
    ms = adj * (1.0 - alpha)
    idx = np.arange(n)
    ms[:, idx, idx] = alpha * adj.sum(axis=2)
    return ms


def exhaustive_verify(
    source,
    alpha: Real,
    threshold_override: float | None = None,
    keep_certificates: bool = True,
    chunk_size: int = 4096,
) -> VerificationReport:
    """Certify every graph in ``source`` and check each positive verdict against the oracle.

    ``source`` is an order ``n`` (all labeled graphs, ``n <= 7``), a path to a
    graph6 corpus, or an iterable of graphs. Odd-order and disconnected graphs
    are skipped with counts. A violation is a ``PM_GUARANTEED`` verdict on a
    graph without a perfect matching, or an ``EXTREMAL_EXCEPTION`` on one that
    has a perfect matching.
    """
    a = check_alpha(alpha)
    report = VerificationReport(a, threshold_override)
    pending: dict[int, list[Graph]] = {}

    def flush(graphs: list[Graph]) -> None:
        radii = spectral_radius_batch(_stack_a_alpha(graphs, a))
        for g, rho in zip(graphs, radii):
            cert = certify(g, alpha, threshold_override=threshold_override, rho=float(rho))
            if cert.verdict in (Verdict.PM_GUARANTEED, Verdict.EXTREMAL_EXCEPTION):
                pm = _oracle(g)
                cert = Certificate(cert.graph6, cert.alpha, cert.rho, cert.threshold, cert.verdict, pm)
                report.counts["above_threshold"] += 1
                if cert.verdict is Verdict.EXTREMAL_EXCEPTION:
                    report.counts["exceptions"] += 1
                if pm != (cert.verdict is Verdict.PM_GUARANTEED):
                    report.counts["violations"] += 1
                    report.violations.append(cert)
                    logger.error("violation: %s", cert)
            elif cert.verdict is Verdict.HYPOTHESIS_UNMET:
                report.counts["hypothesis_unmet"] += 1
            report.counts["checked"] += 1
            if keep_certificates:
                report.certificates.append(cert)

    for lineno, item in _source_stream(source):
        if isinstance(item, GraphFormatError):
            report.counts["parse_errors"] += 1
            report.parse_errors.append((lineno, str(item)))
            continue
        g = item
        if g.n % 2:
            report.counts["skipped_odd"] += 1
            continue
        if not is_connected(g):
            report.counts["skipped_disconnected"] += 1
            continue
        bucket = pending.setdefault(g.n, [])
        bucket.append(g)
        if len(bucket) >= chunk_size:
            flush(bucket)
            pending[g.n] = []
    for bucket in pending.values():
        if bucket:
            flush(bucket)
    return report


# ---------------------------------------------------------------------------
# output


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_report(report, fmt: str, path: str | os.PathLike) -> int:
    """Write one record per line (``jsonl``) or per row (``csv``, with header). Returns the record count."""
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown report format {fmt!r}; expected 'jsonl' or 'csv'")
    fields = report.fields
    records = report.records()
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if fmt == "jsonl":
                for rec in records:
                    fh.write(json.dumps({k: rec[k] for k in fields}) + "\n")
            else:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(fields)
                for rec in records:
                    writer.writerow([_csv_cell(rec[k]) for k in fields])
    except OSError as exc:
        raise OSError(f"could not write report to {os.fspath(path)!r}: {exc.strerror or exc}") from exc
    return len(records)
