"""Replicated estimation experiments with CSV/JSON reporting.

One replication runs a batch of N walks at the configured level and feeds
every requested estimator.  Strict estimates ride on the non-strict batch
whenever one exists: collapsing each walk's tie runs is distributed exactly
as a native strict walk, so the strict MVUE needs no separate runs.  A
native strict batch (own derived seed) runs only when Strict is the sole
requested mode.

Reproducibility: the walk batch of replication r draws from seeds derived
as (master, r, kind); everything except the wall_ms instrumentation column
is bitwise identical across parallelism settings.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .distributions import CountLawSpec, Strictness, batch_law, count_law_pmf_vector
from .errors import ConfigError, SplitwalkError
from .estimators import (
    EstimatorKind,
    RunLengthEncoding,
    crude_monte_carlo,
    cv2_upper_bound,
    estimate_nonstrict,
    estimate_pure_poisson,
    estimate_strict,
    rle,
    variance_bounds_nonstrict,
    variance_continuous,
    variance_strict,
)
from .rng import RngStream, derive_seed
from .targets.diffusion import DiffusionConfig, DiffusionSampler, diffusion_scores
from .targets.mixed import MixedDistribution, mixed_truth
from .targets.sat import SatProblem, SatSampler, parse_dimacs, random_assignment, count_satisfied
from .walks import WalkMode, derive_strict_counts, merge_states, run_batch

ROWS_HEADER = (
    "replication,estimator,p_hat,total_count,pure_poisson_count,"
    "conditional_draws,wall_ms"
)
HISTOGRAM_HEADER = (
    "count,observed_strict,observed_nonstrict,observed_purepoisson,"
    "expected_strict,expected_nonstrict,expected_purepoisson"
)

VALID_MODES = ("Strict", "NonStrict", "PurePoisson")


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one experiment."""

    target: dict
    level: float
    N: int
    modes: tuple[str, ...]
    replications: int
    seed: int
    parallelism: int = 1
    out_dir: str = "."
    samples: int = 1_000_000  # reference-run sample count
    max_draws: int = 10_000_000

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ConfigError(f"N must be >= 2, got {self.N}")
        if self.replications < 1:
            raise ConfigError(f"replications must be >= 1, got {self.replications}")
        if self.parallelism < 1:
            raise ConfigError(f"parallelism must be >= 1, got {self.parallelism}")
        if not self.modes:
            raise ConfigError("mode set must be non-empty")
        for m in self.modes:
            if m not in VALID_MODES:
                raise ConfigError(f"unknown mode {m!r}; valid: {VALID_MODES}")
        if len(set(self.modes)) != len(self.modes):
            raise ConfigError("duplicate modes in mode set")
        if not isinstance(self.target, dict) or "kind" not in self.target:
            raise ConfigError("target must be a tagged object with a 'kind' field")
        if self.target["kind"] not in ("mixed", "diffusion", "sat"):
            raise ConfigError(f"unknown target kind {self.target['kind']!r}")
        if not (0 <= self.seed < 2**64):
            raise ConfigError(f"seed out of range: {self.seed}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        try:
            return cls(
                target=d["target"],
                level=float(d["level"]),
                N=int(d["N"]),
                modes=tuple(d["modes"]),
                replications=int(d.get("replications", 1)),
                seed=int(d.get("seed", 0)),
                parallelism=int(d.get("parallelism", 1)),
                out_dir=str(d.get("out", d.get("out_dir", "."))),
                samples=int(d.get("samples", 1_000_000)),
                max_draws=int(d.get("max_draws", 10_000_000)),
            )
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad config: {exc}") from exc

    def replace(self, **kwargs) -> "ExperimentConfig":
        data = {
            "target": self.target,
            "level": self.level,
            "N": self.N,
            "modes": self.modes,
            "replications": self.replications,
            "seed": self.seed,
            "parallelism": self.parallelism,
            "out_dir": self.out_dir,
            "samples": self.samples,
            "max_draws": self.max_draws,
        }
        data.update(kwargs)
        return ExperimentConfig(**data)

    def to_jsonable(self) -> dict:
        return {
            "target": self.target,
            "level": self.level,
            "N": self.N,
            "modes": list(self.modes),
            "replications": self.replications,
            "seed": self.seed,
            "parallelism": self.parallelism,
            "out": self.out_dir,
            "samples": self.samples,
            "max_draws": self.max_draws,
        }


class _Target:
    """Resolved target: sampler factory plus whatever truth is available."""

    def __init__(self, cfg: ExperimentConfig):
        spec = cfg.target
        self.kind = spec["kind"]
        self._level = cfg.level
        if self.kind == "mixed":
            self.dist = MixedDistribution.from_dict(spec)
            p, atoms, p_pois = mixed_truth(self.dist, cfg.level)
            if p <= 0.0:
                raise ConfigError(f"level {cfg.level} has zero exceedance mass")
            self.exact = {"p": p, "atoms": atoms, "p_pois": p_pois}
        elif self.kind == "diffusion":
            params = {k: v for k, v in spec.items() if k != "kind"}
            self.dcfg = DiffusionConfig.from_dict(params)
            self.exact = None
        else:
            path = spec.get("path")
            if not path:
                raise ConfigError("sat target needs a 'path' to a DIMACS file")
            try:
                text = Path(path).read_text()
            except OSError as exc:
                raise ConfigError(f"cannot read DIMACS file {path}: {exc}") from exc
            self.problem = parse_dimacs(text)
            self.sweeps = int(spec.get("sweeps", 5))
            self.exact = None

    def sampler_for_replication(self):
        """SAT archives are per-replication state; others are stateless."""
        if self.kind == "mixed":
            return self.dist
        if self.kind == "diffusion":
            return DiffusionSampler(self.dcfg)
        return SatSampler(self.problem, self.sweeps)


@dataclass
class _RepResult:
    """Everything one replication contributes to rows and summaries."""

    rows: list[dict] = field(default_factory=list)
    strict_total: int | None = None
    nonstrict_total: int | None = None
    pure_poisson_total: int | None = None
    atom_failures: dict[float, int] = field(default_factory=dict)


def _strict_rle_from_nonstrict(merged: np.ndarray, counts: dict[float, int]) -> RunLengthEncoding:
    """Run lengths a native strict batch would have produced.

    Repeated merged values carry the derived first-trial failure counts;
    every other distinct value was visited by exactly one walk.
    """
    values = np.unique(merged)
    lengths = tuple(counts.get(float(v), 1) for v in values)
    return RunLengthEncoding(tuple(float(v) for v in values), lengths)


def _run_replication(target: _Target, cfg: ExperimentConfig, rep: int) -> _RepResult:
    modes = set(cfg.modes)
    want_pp = "PurePoisson" in modes
    want_ns = "NonStrict" in modes
    want_strict = "Strict" in modes
    need_ns_batch = want_pp or want_ns
    out = _RepResult()

    if need_ns_batch:
        walk_mode = (
            WalkMode.NONSTRICT_WITH_PURE_POISSON if want_pp else WalkMode.NONSTRICT
        )
        sampler = target.sampler_for_replication()
        t0 = time.perf_counter()
        records = run_batch(
            sampler, cfg.level, walk_mode, cfg.N,
            derive_seed(cfg.seed, rep, 0), cfg.parallelism, cfg.max_draws,
        )
        wall_ms = (time.perf_counter() - t0) * 1000.0
        merged, total, total_pp = merge_states(records)
        strict_counts = derive_strict_counts(records)
        out.atom_failures = strict_counts
        out.nonstrict_total = total
        out.pure_poisson_total = total_pp
        share = []
        if want_ns:
            rep_ns = estimate_nonstrict(rle(merged), cfg.N)
            share.append(
                dict(estimator=EstimatorKind.NONSTRICT_MVUE.value, p_hat=rep_ns.p_hat,
                     total_count=total, pure_poisson_count=total_pp,
                     conditional_draws=total)
            )
        if want_pp:
            rep_pp = estimate_pure_poisson(total_pp, cfg.N)
            share.append(
                dict(estimator=EstimatorKind.PURE_POISSON.value, p_hat=rep_pp.p_hat,
                     total_count=total, pure_poisson_count=total_pp,
                     conditional_draws=total)
            )
        if want_strict:
            strict_rle = _strict_rle_from_nonstrict(merged, strict_counts)
            rep_s = estimate_strict(strict_rle, cfg.N)
            out.strict_total = strict_rle.total
            share.append(
                dict(estimator=EstimatorKind.STRICT_MVUE.value, p_hat=rep_s.p_hat,
                     total_count=strict_rle.total, pure_poisson_count=None,
                     conditional_draws=total)
            )
        for row in share:
            row["wall_ms"] = wall_ms / len(share)
        out.rows.extend(share)
    elif want_strict:
        sampler = target.sampler_for_replication()
        t0 = time.perf_counter()
        records = run_batch(
            sampler, cfg.level, WalkMode.STRICT, cfg.N,
            derive_seed(cfg.seed, rep, 1), cfg.parallelism, cfg.max_draws,
        )
        wall_ms = (time.perf_counter() - t0) * 1000.0
        merged, total, _ = merge_states(records)
        r = rle(merged)
        rep_s = estimate_strict(r, cfg.N)
        out.strict_total = total
        # repeated strict values are atoms too: r_d first-trial failures
        out.atom_failures = {
            v: int(l) for v, l in zip(r.values, r.lengths) if l >= 2
        }
        out.rows.append(
            dict(estimator=EstimatorKind.STRICT_MVUE.value, p_hat=rep_s.p_hat,
                 total_count=total, pure_poisson_count=None,
                 conditional_draws=total, wall_ms=wall_ms)
        )
    return out


def _format_row(rep: int, row: dict) -> str:
    pp = row["pure_poisson_count"]
    return (
        f"{rep},{row['estimator']},{row['p_hat']!r},{row['total_count']},"
        f"{'' if pp is None else pp},{row['conditional_draws']},"
        f"{row['wall_ms']:.3f}"
    )


class _Accumulator:
    """Streams rows to disk while collecting summary statistics."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.estimates: dict[str, list[float]] = {}
        self.strict_totals: list[int] = []
        self.nonstrict_totals: list[int] = []
        self.pure_poisson_totals: list[int] = []
        self.atom_failure_sums: dict[float, int] = {}
        self.reps_done = 0

    def add(self, res: _RepResult) -> None:
        for row in res.rows:
            self.estimates.setdefault(row["estimator"], []).append(row["p_hat"])
        if res.strict_total is not None:
            self.strict_totals.append(res.strict_total)
        if res.nonstrict_total is not None:
            self.nonstrict_totals.append(res.nonstrict_total)
        if res.pure_poisson_total is not None:
            self.pure_poisson_totals.append(res.pure_poisson_total)
        for v, r in res.atom_failures.items():
            self.atom_failure_sums[v] = self.atom_failure_sums.get(v, 0) + r
        self.reps_done += 1

    def estimated_truth(self) -> tuple[float, list[tuple[float, float]]]:
        """(p_hat, [(atom value, Delta_hat)]) pooled over replications.

        Delta_hat_d = 1 - sum_r r_d / (N R): each walk of each replication
        visits atom d with probability 1 - Delta_d.  Replications where d
        went unflagged (merged multiplicity < 2) contribute r_d = 0; at the
        replication sizes used here the induced bias is far below noise.
        """
        for kind in (
            EstimatorKind.NONSTRICT_MVUE.value,
            EstimatorKind.PURE_POISSON.value,
            EstimatorKind.STRICT_MVUE.value,
        ):
            if kind in self.estimates:
                p_hat = float(np.mean(self.estimates[kind]))
                break
        else:
            raise AssertionError("no estimates accumulated")
        denom = self.cfg.N * self.reps_done
        atoms = [
            (v, max(1.0 - r_sum / denom, 1e-12))
            for v, r_sum in sorted(self.atom_failure_sums.items())
        ]
        return p_hat, atoms

    def summary(self, target: _Target) -> dict:
        est_block = {}
        for kind, vals in sorted(self.estimates.items()):
            arr = np.asarray(vals)
            mean = float(arr.mean())
            var = float(arr.var(ddof=1)) if arr.size > 1 else 0.0
            est_block[kind] = {
                "rows": int(arr.size),
                "mean": mean,
                "variance": var,
                "cv": float(math.sqrt(var) / mean) if mean > 0 else None,
            }

        counts_block = {}
        if self.nonstrict_totals:
            counts_block["nonstrict_mean_total"] = float(np.mean(self.nonstrict_totals))
        if self.strict_totals:
            counts_block["strict_mean_total"] = float(np.mean(self.strict_totals))
        if self.pure_poisson_totals:
            counts_block["pure_poisson_mean_total"] = float(
                np.mean(self.pure_poisson_totals)
            )
        if self.nonstrict_totals and self.strict_totals:
            counts_block["mean_count_difference"] = float(
                np.mean(self.nonstrict_totals) - np.mean(self.strict_totals)
            )

        theory = _theory_block(target, self, self.cfg)
        return {
            "config": self.cfg.to_jsonable(),
            "estimators": est_block,
            "counts": counts_block,
            "theory": theory,
        }


def _theory_block(target: _Target, acc: _Accumulator | None, cfg: ExperimentConfig) -> dict:
    if target.exact is not None:
        p = target.exact["p"]
        atoms = target.exact["atoms"]
        p_pois = target.exact["p_pois"]
        source = "exact"
    elif acc is not None and acc.estimates:
        p, atoms = acc.estimated_truth()
        log_prod = sum(math.log(d) for _, d in atoms)
        p_pois = min(p * math.exp(-log_prod), 1.0)
        source = "estimated"
    else:
        return {}
    deltas = [d for _, d in atoms]
    block = {
        "source": source,
        "p": p,
        "p_pois": p_pois,
        "atoms": [{"value": v, "delta": d} for v, d in atoms],
        "variance_pure_poisson": variance_continuous(p, cfg.N),
        "variance_strict": variance_strict(p, deltas, cfg.N),
    }
    if cfg.N >= 3:
        lo, hi = variance_bounds_nonstrict(p, p_pois, len(deltas), cfg.N)
        block["variance_nonstrict_bounds"] = [lo, hi]
        block["cv2_upper_bound"] = cv2_upper_bound(len(deltas), cfg.N, p_pois)
    return block


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run R replications, write rows.csv and summary.json, return summary.

    Rows stream to disk as replications finish; a replication failure
    flushes a marker row and re-raises with the replication index.
    """
    target = _Target(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows_path = out_dir / "rows.csv"
    acc = _Accumulator(cfg)
    with rows_path.open("w", newline="") as fh:
        fh.write(ROWS_HEADER + "\n")
        for rep in range(cfg.replications):
            try:
                res = _run_replication(target, cfg, rep)
            except SplitwalkError as exc:
                fh.write(f"{rep},error:{type(exc).__name__},,,,,\n")
                fh.flush()
                raise type(exc)(f"replication {rep}: {exc}") from exc
            for row in res.rows:
                fh.write(_format_row(rep, row) + "\n")
            acc.add(res)
    summary = acc.summary(target)
    _write_json(out_dir / "summary.json", summary)
    return summary


def run_histogram(cfg: ExperimentConfig) -> dict:
    """Per-batch total-count histograms with exact-law overlay columns.

    Observed columns hold batch frequencies per requested mode; expected
    columns hold R * pmf(k) of the matching theoretical batch law, from
    exact truth (mixed) or pooled estimates (other targets).
    """
    target = _Target(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    acc = _Accumulator(cfg)

    strict_counts: list[int] = []
    nonstrict_counts: list[int] = []
    pp_counts: list[int] = []
    for rep in range(cfg.replications):
        try:
            res = _run_replication(target, cfg, rep)
        except SplitwalkError as exc:
            raise type(exc)(f"replication {rep}: {exc}") from exc
        acc.add(res)
        if res.strict_total is not None:
            strict_counts.append(res.strict_total)
        if res.nonstrict_total is not None:
            nonstrict_counts.append(res.nonstrict_total)
        if res.pure_poisson_total is not None:
            pp_counts.append(res.pure_poisson_total)

    if target.exact is not None:
        p = target.exact["p"]
        deltas = [d for _, d in target.exact["atoms"]]
    else:
        p, atoms = acc.estimated_truth()
        deltas = [d for _, d in atoms]

    law_s = batch_law(
        CountLawSpec.for_level(p, tuple(deltas), Strictness.STRICT), cfg.N
    )
    law_ns = batch_law(
        CountLawSpec.for_level(p, tuple(deltas), Strictness.NONSTRICT), cfg.N
    )
    lam_pp = -cfg.N * math.log(p)
    law_pp = CountLawSpec(lam_pp, (), Strictness.NONSTRICT)

    observed = {
        "strict": np.asarray(strict_counts, dtype=int),
        "nonstrict": np.asarray(nonstrict_counts, dtype=int),
        "purepoisson": np.asarray(pp_counts, dtype=int),
    }
    all_counts = np.concatenate([v for v in observed.values() if v.size] or [np.array([0])])
    kmax = int(all_counts.max())
    # extend to cover the bulk of every law
    from scipy import stats as _st

    kmax = max(
        kmax,
        int(_st.poisson.isf(1e-6, law_pp.poisson_rate)),
    )
    expected = {
        "strict": count_law_pmf_vector(law_s, kmax) * cfg.replications,
        "nonstrict": count_law_pmf_vector(law_ns, kmax) * cfg.replications,
        "purepoisson": count_law_pmf_vector(law_pp, kmax) * cfg.replications,
    }
    freqs = {
        name: np.bincount(vals, minlength=kmax + 1) if vals.size else None
        for name, vals in observed.items()
    }

    hist_path = out_dir / "histogram.csv"
    with hist_path.open("w", newline="") as fh:
        fh.write(HISTOGRAM_HEADER + "\n")
        for k in range(kmax + 1):
            obs_cells = [
                "" if freqs[name] is None else str(int(freqs[name][k]))
                for name in ("strict", "nonstrict", "purepoisson")
            ]
            exp_cells = [repr(float(expected[name][k])) for name in ("strict", "nonstrict", "purepoisson")]
            fh.write(f"{k}," + ",".join(obs_cells + exp_cells) + "\n")

    summary = acc.summary(target)
    _write_json(out_dir / "summary.json", summary)
    return summary


def run_reference(cfg: ExperimentConfig, samples: int | None = None) -> dict:
    """Crude Monte Carlo reference: p and each visible atom's Delta."""
    if samples is None:
        samples = cfg.samples
    if samples < 1:
        raise ConfigError(f"reference run needs samples >= 1, got {samples}")
    target = _Target(cfg)
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    rng = RngStream(derive_seed(cfg.seed, 0, 2), 0)
    t0 = time.perf_counter()
    scores = _crude_scores_for(target, rng, samples, cfg)
    wall_ms = (time.perf_counter() - t0) * 1000.0

    report = crude_monte_carlo((scores > cfg.level).astype(np.int8))
    values, counts = np.unique(scores, return_counts=True)
    atom_rows = []
    for v, c in zip(values, counts):
        if c < 2:
            continue
        n_ge = int((scores >= v).sum())
        n_gt = n_ge - int(c)
        atom_rows.append(
            {"value": float(v), "delta": n_gt / n_ge, "multiplicity": int(c)}
        )

    rows_path = out_dir / "rows.csv"
    with rows_path.open("w", newline="") as fh:
        fh.write(ROWS_HEADER + "\n")
        fh.write(
            f"0,{EstimatorKind.CRUDE_MC.value},{report.p_hat!r},"
            f"{report.total_count},,{samples},{wall_ms:.3f}\n"
        )
    summary = {
        "config": cfg.to_jsonable(),
        "crude_mc": {
            "samples": samples,
            "p": report.p_hat,
            "standard_error": report.standard_error,
            "atoms": atom_rows,
        },
    }
    _write_json(out_dir / "summary.json", summary)
    return summary


def _crude_scores_for(
    target: _Target, rng: RngStream, samples: int, cfg: ExperimentConfig
) -> np.ndarray:
    if target.kind == "diffusion":
        return diffusion_scores(target.dcfg, rng, samples)
    if target.kind == "mixed":
        return np.array(
            [target.dist.sample_initial(rng) for _ in range(samples)]
        )
    # SAT: vectorized blocks of uniform assignments
    problem: SatProblem = target.problem
    out = np.empty(samples)
    block = 4096
    mat, _ = problem._lit_matrix
    pos = mat > 0
    neg = mat < 0
    idx = np.abs(mat) - 1
    idx[~(pos | neg)] = 0
    for start in range(0, samples, block):
        size = min(block, samples - start)
        bits = rng.generator.integers(0, 2, (size, problem.n)).astype(np.uint8)
        vals = bits[:, idx.ravel()].reshape(size, *idx.shape)
        sat = (pos[None, :, :] & (vals == 1)) | (neg[None, :, :] & (vals == 0))
        out[start : start + size] = (sat.any(axis=2)).sum(axis=1)
    return out
