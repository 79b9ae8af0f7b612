"""Experiment driver: row schema, summary consistency, determinism, errors."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from splitwalk import ConfigError
from splitwalk.experiment import (
    HISTOGRAM_HEADER,
    ROWS_HEADER,
    ExperimentConfig,
    run_experiment,
    run_histogram,
    run_reference,
)

MIXED_TARGET = {
    "kind": "mixed",
    "base": {"kind": "uniform", "a": 0.0, "b": 1.0},
    "weight": 0.7,
    "atoms": [[0.5, 0.3]],
}


def make_config(tmp_path: Path, **kwargs) -> ExperimentConfig:
    base = dict(
        target=MIXED_TARGET,
        level=0.9,
        N=50,
        modes=("NonStrict", "PurePoisson", "Strict"),
        replications=40,
        seed=424242,
        out_dir=str(tmp_path),
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


def read_rows(path: Path) -> list[dict]:
    with path.open() as fh:
        return list(csv.DictReader(fh))


class TestConfig:
    def test_rejects_unknown_mode(self, tmp_path):
        with pytest.raises(ConfigError):
            make_config(tmp_path, modes=("Elastic",))

    def test_rejects_bad_counts(self, tmp_path):
        with pytest.raises(ConfigError):
            make_config(tmp_path, N=1)
        with pytest.raises(ConfigError):
            make_config(tmp_path, replications=0)

    def test_from_dict_accepts_out_alias(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            {
                "target": MIXED_TARGET,
                "level": 0.9,
                "N": 10,
                "modes": ["NonStrict"],
                "replications": 2,
                "seed": 1,
                "out": str(tmp_path),
            }
        )
        assert cfg.out_dir == str(tmp_path)

    def test_mixed_level_above_support_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            run_experiment(make_config(tmp_path, level=1.5, replications=2))


@pytest.fixture(scope="module")
def outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("exp")
    summary = run_experiment(make_config(out))
    return out, summary


class TestRunExperiment:
    def test_rows_schema(self, outputs):
        out, _ = outputs
        text = (out / "rows.csv").read_text()
        assert text.splitlines()[0] == ROWS_HEADER
        rows = read_rows(out / "rows.csv")
        assert len(rows) == 3 * 40
        for row in rows:
            assert row["estimator"] in {"NonStrictMVUE", "PurePoisson", "StrictMVUE"}
            assert 0.0 <= float(row["p_hat"]) <= 1.0
            assert int(row["total_count"]) > 0
            assert float(row["wall_ms"]) >= 0.0

    def test_pure_poisson_count_population(self, outputs):
        # PP and NonStrict rows share one tracked batch; derived strict rows
        # never carry a pure-Poisson count.
        out, _ = outputs
        for row in read_rows(out / "rows.csv"):
            if row["estimator"] == "StrictMVUE":
                assert row["pure_poisson_count"] == ""
            else:
                assert row["pure_poisson_count"] != ""
                assert int(row["pure_poisson_count"]) <= int(row["total_count"])

    def test_summary_matches_rows(self, outputs):
        # The JSON block must be recomputable from the CSV alone.
        out, summary = outputs
        rows = read_rows(out / "rows.csv")
        by_kind: dict[str, list[float]] = {}
        for row in rows:
            by_kind.setdefault(row["estimator"], []).append(float(row["p_hat"]))
        for kind, vals in by_kind.items():
            block = summary["estimators"][kind]
            assert block["rows"] == len(vals)
            assert block["mean"] == pytest.approx(np.mean(vals), rel=1e-12)
            assert block["variance"] == pytest.approx(
                np.var(vals, ddof=1), rel=1e-12
            )

    def test_summary_json_identical_to_file(self, outputs):
        out, summary = outputs
        on_disk = json.loads((out / "summary.json").read_text())
        assert on_disk == json.loads(json.dumps(summary))

    def test_theory_block_exact_for_mixed(self, outputs):
        _, summary = outputs
        theory = summary["theory"]
        assert theory["source"] == "exact"
        assert theory["p"] == pytest.approx(0.07, abs=1e-15)
        assert theory["p_pois"] == pytest.approx(0.13, abs=1e-15)
        assert theory["atoms"][0]["delta"] == pytest.approx(7.0 / 13.0)

    def test_count_difference_sign(self, outputs):
        _, summary = outputs
        counts = summary["counts"]
        assert counts["nonstrict_mean_total"] >= counts["strict_mean_total"]
        assert counts["mean_count_difference"] >= 0.0

    def test_estimator_means_near_truth(self, outputs):
        # Coarse 6-sigma guard; the tight version is an acceptance test.
        _, summary = outputs
        for kind, block in summary["estimators"].items():
            se = math.sqrt(block["variance"] / block["rows"])
            assert abs(block["mean"] - 0.07) < 6 * se, kind


class TestDeterminism:
    def test_parallelism_does_not_change_bytes(self, tmp_path):
        # Everything except the config echo (which records the differing
        # parallelism and out dir) and per-row wall time must be identical.
        texts = {}
        for par in (1, 4):
            out = tmp_path / f"p{par}"
            out.mkdir()
            run_experiment(make_config(out, parallelism=par, replications=12))
            rows = (out / "rows.csv").read_text()
            stripped = "\n".join(
                line.rsplit(",", 1)[0] for line in rows.splitlines()
            )
            summary = json.loads((out / "summary.json").read_text())
            del summary["config"]
            texts[par] = (stripped, json.dumps(summary, sort_keys=True))
        assert texts[1] == texts[4]

    def test_reruns_are_identical(self, tmp_path):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / tag
            out.mkdir()
            summary = run_experiment(make_config(out, replications=8))
            del summary["config"]
            rows = "\n".join(
                line.rsplit(",", 1)[0]
                for line in (out / "rows.csv").read_text().splitlines()
            )
            outs.append((rows, json.dumps(summary, sort_keys=True)))
        assert outs[0] == outs[1]

    def test_seed_changes_output(self, tmp_path):
        summaries = []
        for seed in (1, 2):
            out = tmp_path / f"s{seed}"
            out.mkdir()
            summaries.append(run_experiment(make_config(out, seed=seed, replications=6)))
        a = summaries[0]["estimators"]["NonStrictMVUE"]["mean"]
        b = summaries[1]["estimators"]["NonStrictMVUE"]["mean"]
        assert a != b


class TestFailureHandling:
    def test_runaway_leaves_marker_row(self, tmp_path):
        cfg = make_config(tmp_path, max_draws=2, replications=4)
        with pytest.raises(Exception, match="replication 0"):
            run_experiment(cfg)
        lines = (tmp_path / "rows.csv").read_text().splitlines()
        assert lines[0] == ROWS_HEADER
        assert lines[1].startswith("0,error:RunawayWalkError")


class TestHistogram:
    def test_schema_and_consistency(self, tmp_path):
        cfg = make_config(tmp_path, replications=200, N=20)
        run_histogram(cfg)
        lines = (tmp_path / "histogram.csv").read_text().splitlines()
        assert lines[0] == HISTOGRAM_HEADER
        rows = read_rows(tmp_path / "histogram.csv")
        for col in ("strict", "nonstrict", "purepoisson"):
            observed = sum(int(r[f"observed_{col}"]) for r in rows)
            assert observed == 200
            expected = sum(float(r[f"expected_{col}"]) for r in rows)
            assert expected == pytest.approx(200, abs=0.5)
        ks = [int(r["count"]) for r in rows]
        assert ks == list(range(len(ks)))

    def test_modes_not_run_leave_blanks(self, tmp_path):
        cfg = make_config(tmp_path, modes=("NonStrict",), replications=150, N=20)
        run_histogram(cfg)
        rows = read_rows(tmp_path / "histogram.csv")
        assert all(r["observed_strict"] == "" for r in rows)
        assert all(r["observed_purepoisson"] == "" for r in rows)
        assert sum(int(r["observed_nonstrict"]) for r in rows) == 150
        # expected columns stay populated: the laws exist regardless
        assert sum(float(r["expected_strict"]) for r in rows) == pytest.approx(
            150, abs=0.5
        )


class TestReference:
    def test_crude_run(self, tmp_path):
        cfg = make_config(tmp_path, samples=20_000)
        summary = run_reference(cfg)
        block = summary["crude_mc"]
        assert block["samples"] == 20_000
        se = block["standard_error"]
        assert abs(block["p"] - 0.07) < 5 * se
        atom = block["atoms"][0]
        assert atom["value"] == 0.5
        assert abs(atom["delta"] - 7.0 / 13.0) < 0.02
        rows = read_rows(tmp_path / "rows.csv")
        assert len(rows) == 1
        assert rows[0]["estimator"] == "CrudeMC"

    def test_requires_positive_samples(self, tmp_path):
        with pytest.raises(ConfigError):
            run_reference(make_config(tmp_path, samples=0))
