"""Timing harness for coefficient generation and expansion evaluation.

Benchmarks are report-only: they never gate a pass/fail.  Checksums over the
produced values make the timed work observable (and reproducible for a fixed
seed), so nothing can be optimized away.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import addition as add
from .wigner import gaunt, gaunt_string, _gaunt_cache


@dataclass(frozen=True)
class BenchResult:
    name: str
    n_items: int
    total_ns: int
    ns_per_item: float
    checksum: float
    extra: dict | None = None

    def to_row(self) -> dict:
        row = {
            "name": self.name,
            "n_items": self.n_items,
            "total_ns": self.total_ns,
            "ns_per_item": self.ns_per_item,
            "checksum": self.checksum,
        }
        if self.extra:
            row.update(self.extra)
        return row


def bench_gaunt_strings(l_max: int, seed: int = 0) -> BenchResult:
    """Whole-string recurrence evaluation vs per-entry exact evaluation.

    Times gaunt_string over every (l1 <= l_max, l2 <= l_max) with one random
    m pair each, then the same coefficients one at a time through the Racah
    path, and reports the speedup.
    """
    if l_max > 60:
        raise ValueError("l_max capped at 60")
    rng = np.random.default_rng(seed)
    queries = []
    for l1 in range(l_max + 1):
        for l2 in range(l_max + 1):
            m1 = int(rng.integers(-l1, l1 + 1))
            m2 = int(rng.integers(-l2, l2 + 1))
            queries.append((l1, m1, l2, m2))

    _gaunt_cache.clear()
    t0 = time.perf_counter_ns()
    checksum = 0.0
    n_entries = 0
    for q in queries:
        for l, v in gaunt_string(*q):
            checksum += v * (1 + 0.001 * l)
            n_entries += 1
    t_string = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    check2 = 0.0
    for (l1, m1, l2, m2) in queries:
        for l in range(abs(l1 - l2), l1 + l2 + 1):
            check2 += gaunt(l1, m1, l2, m2, l, m1 + m2) * (1 + 0.001 * l)
    t_single = time.perf_counter_ns() - t0

    return BenchResult(
        name=f"gaunt-strings/lmax={l_max}",
        n_items=n_entries,
        total_ns=t_string,
        ns_per_item=t_string / max(n_entries, 1),
        checksum=checksum,
        extra={
            "racah_total_ns": t_single,
            "racah_checksum": check2,
            "speedup": t_single / max(t_string, 1),
        },
    )


def bench_addition(nu: float, l: int, ratio: float, tol: float, seed: int = 0) -> BenchResult:
    """Time-to-tolerance of the two-range power expansion at a given radius ratio."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must be in (0, 1)")
    rng = np.random.default_rng(seed)
    d1 = rng.normal(size=3)
    d1 /= np.linalg.norm(d1)
    d2 = rng.normal(size=3)
    d2 /= np.linalg.norm(d2)
    pair = add.SplitPair.from_vectors(d1 * ratio, d2 * 1.0)
    trunc = add.TruncationSpec(l_max_outer=120, tol=tol)
    t0 = time.perf_counter_ns()
    res = add.power_solid_addition(nu, (l, min(l, 1)), pair, trunc)
    dt = time.perf_counter_ns() - t0
    return BenchResult(
        name=f"addition/nu={nu},l={l},ratio={ratio},tol={tol}",
        n_items=res.outer_l_used + 1,
        total_ns=dt,
        ns_per_item=dt / (res.outer_l_used + 1),
        checksum=abs(res.value),
        extra={"converged": res.converged, "est_error": res.est_error},
    )
