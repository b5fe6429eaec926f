"""Leggett-Garg correlation analysis for the four-jump polarized walk.

The dichotomic observable is Q = +1 if the particle sits at x > 0 and -1
otherwise, read at the cut points t1 (preparation), t2 (after the first
jump) and t3 (at the detectors).  With Q(t1) = Q(t2) = 1 the bound reads

    K = 1 + <Q(t3)Q(t2)> - <Q(t3)>  <=  1.

Two estimation protocols are implemented:

* three-run: one unconditioned run estimates <Q(t3)>; two further runs each
  perform an ideal negative measurement at t2 (absorbing the x=+1 or x=-1
  rail) and estimate <Q(t3)>_{x2} over the surviving branch, combined with
  the branch probabilities P(x2; t2).  Removing half the ensemble changes
  how the downstream registers adapt, so this procedure violates the bound.
* single-run: one run only *observes* the t2 position of every particle
  (taps copy data and perturb nothing), so <Q(t3)Q(t2)> and the branch terms
  come from one dataset; <Q(t3)> comes from a separate unconditioned run.
  K stays at 1 up to statistical fluctuations.

Replicate helpers seed each replicate independently and can dispatch them
across processes; error bars are standard errors over replicates.
"""
from __future__ import annotations

import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .core import RngStream
from .errors import EmptyRun, InsufficientReplicates, MissingTaps
from .network import RemovalFilter, RunRecord, build_robens, run

THREE_RUN = "three_run"
SINGLE_RUN = "single_run"


@dataclass(frozen=True)
class LgiComponents:
    q3_mean: float
    q3q2_mean: float
    p_plus: float
    p_minus: float


@dataclass(frozen=True)
class LgiResult:
    k: float
    stderr: float
    protocol: str
    components: LgiComponents
    replicates: int


def q3_of_site(x: int) -> int:
    """Dichotomic readout at t3: +1 for x > 0, -1 otherwise (including x = 0)."""
    return 1 if x > 0 else -1


def _q3_stats(dist: dict[int, int]) -> tuple[int, int]:
    """(sum of q3 over counts, total count) for a site distribution."""
    total = 0
    acc = 0
    for site, count in dist.items():
        total += count
        acc += q3_of_site(site) * count
    return acc, total


def k_three_run(unconditioned: dict[int, int],
                kept_minus: dict[int, int],
                kept_plus: dict[int, int],
                removed_minus: int,
                removed_plus: int) -> LgiResult:
    """K from the invasive three-run procedure.

    ``kept_minus`` comes from the run whose filter absorbed the x=+1 rail at
    t2 (so the x2=-1 branch survived) and ``removed_minus`` is that same
    run's removed tally; ``kept_plus``/``removed_plus`` likewise for the
    x2=+1 branch.  The branch probabilities are pooled over both filtered
    runs, P(-1) = (kept_minus + removed_plus) / (N_minus + N_plus), so that
    P(+1) + P(-1) = 1 exactly.
    """
    s_u, n_u = _q3_stats(unconditioned)
    s_m, n_m = _q3_stats(kept_minus)
    s_p, n_p = _q3_stats(kept_plus)
    if n_u == 0 or n_m == 0 or n_p == 0:
        raise EmptyRun("three-run estimator needs counts in all three runs")
    q3_mean = s_u / n_u
    q3_minus = s_m / n_m
    q3_plus = s_p / n_p
    pooled = n_m + removed_minus + n_p + removed_plus
    p_minus = (n_m + removed_plus) / pooled
    p_plus = (n_p + removed_minus) / pooled
    q3q2_mean = p_minus * q3_minus + p_plus * q3_plus
    k = 1.0 + q3q2_mean - q3_mean
    return LgiResult(k, 0.0, THREE_RUN,
                     LgiComponents(q3_mean, q3q2_mean, p_plus, p_minus), 1)


def k_single_run(records: list[RunRecord],
                 unconditioned: dict[int, int]) -> LgiResult:
    """K from one tapped run plus a separate unconditioned run for <Q(t3)>.

    <Q(t3)Q(t2)> = sum over x2 of P(x2) <Q(t3)>_{x2} with Q(t2) = 1; computed
    from integer tallies, which makes it identical to the plain <Q(t3)> of
    the tapped dataset, so feeding the tapped run's own distribution as
    ``unconditioned`` yields K = 1 exactly.
    """
    if not records:
        raise EmptyRun("no trajectory records")
    n = len(records)
    n_minus = n_plus = 0
    s_minus = s_plus = 0
    for rec in records:
        tap = rec.taps.get("t2")
        if tap is None:
            raise MissingTaps(f"record {rec.particle_index} has no t2 observation")
        if rec.final_site is None:
            raise EmptyRun(f"record {rec.particle_index} never reached a detector")
        q3 = q3_of_site(rec.final_site)
        if tap.site < 0:
            n_minus += 1
            s_minus += q3
        else:
            n_plus += 1
            s_plus += q3
    s_u, n_u = _q3_stats(unconditioned)
    if n_u == 0:
        raise EmptyRun("unconditioned run has no counts")
    q3q2_mean = (s_minus + s_plus) / n
    q3_mean = s_u / n_u
    k = 1.0 + q3q2_mean - q3_mean
    return LgiResult(k, 0.0, SINGLE_RUN,
                     LgiComponents(q3_mean, q3q2_mean, n_plus / n, n_minus / n), 1)


def replicate_stats(values: list[float]) -> tuple[float, float]:
    """Sample mean and standard error of the mean over replicate values."""
    if len(values) < 2:
        raise InsufficientReplicates(
            f"need at least 2 replicates, got {len(values)}")
    mean = statistics.fmean(values)
    stderr = statistics.stdev(values) / len(values) ** 0.5
    return mean, stderr


def three_run_replicate(particles: int, gamma: float, rng: RngStream) -> LgiResult:
    """One replicate of the invasive protocol: 3 independent runs."""
    net = build_robens(gamma)
    uncond = run(net, particles, rng.derive(0))
    kept_minus = run(net, particles, rng.derive(1),
                     filters=[RemovalFilter("t2", +1)])
    kept_plus = run(net, particles, rng.derive(2),
                    filters=[RemovalFilter("t2", -1)])
    return k_three_run(uncond.counts, kept_minus.counts, kept_plus.counts,
                       kept_minus.removed, kept_plus.removed)


def single_run_replicate(particles: int, gamma: float, rng: RngStream) -> LgiResult:
    """One replicate of the non-invasive protocol: tapped run + reference run."""
    net = build_robens(gamma)
    tapped = run(net, particles, rng.derive(0), taps_enabled=True)
    uncond = run(net, particles, rng.derive(1))
    return k_single_run(tapped.records, uncond.counts)


def _replicate_worker(args: tuple[str, int, int, float]) -> LgiResult:
    protocol, seed, particles, gamma = args
    rng = RngStream(seed)
    if protocol == THREE_RUN:
        return three_run_replicate(particles, gamma, rng)
    return single_run_replicate(particles, gamma, rng)


def run_protocol(protocol: str, *, particles: int = 100_000, gamma: float = 0.95,
                 replicates: int = 10, rng: RngStream,
                 workers: int | None = None) -> tuple[LgiResult, list[LgiResult]]:
    """Run ``replicates`` independent replicates and aggregate them.

    Returns (aggregate, per-replicate results).  The aggregate K is computed
    from the averaged components so K = 1 + <Q3Q2> - <Q3> holds exactly;
    stderr is the standard error over the per-replicate K values.
    """
    if protocol not in (THREE_RUN, SINGLE_RUN):
        raise ValueError(f"unknown protocol {protocol!r}")
    jobs = [(protocol, rng.derive(r).seed, particles, gamma)
            for r in range(replicates)]
    if workers is None:
        workers = min(replicates, os.cpu_count() or 1)
    if workers > 1 and replicates > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_replicate_worker, jobs))
    else:
        results = [_replicate_worker(job) for job in jobs]
    _mean_k, stderr = replicate_stats([r.k for r in results])
    comps = LgiComponents(
        statistics.fmean(r.components.q3_mean for r in results),
        statistics.fmean(r.components.q3q2_mean for r in results),
        statistics.fmean(r.components.p_plus for r in results),
        statistics.fmean(r.components.p_minus for r in results),
    )
    aggregate = LgiResult(1.0 + comps.q3q2_mean - comps.q3_mean, stderr,
                          protocol, comps, replicates)
    return aggregate, results
