import csv
import json
import math

import numpy as np
import pytest

from ma_secrecy.errors import InfeasibleSweepPoint
from ma_secrecy.experiment import (
    RAW_COLUMNS,
    SUMMARY_COLUMNS,
    ExperimentConfig,
    emit_csv,
    mean_std,
    run_sweep,
)


def small_cfg(**kw):
    base = dict(trials=5, sweep_param="M", sweep_values=(12, 24, 36), methods=("optimal", "fpa"))
    return ExperimentConfig(**{**base, **kw})


@pytest.fixture(scope="module")
def result():
    return run_sweep(small_cfg())


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_default_constants():
    cfg = ExperimentConfig()
    assert cfg.wavelength == 0.06
    assert cfg.d_min == 0.03
    assert cfg.alpha == 2.8
    assert cfg.beta == 10 ** -4.6
    assert (cfg.D_B, cfg.D_E) == (100.0, 100.0)
    assert cfg.n_paths == 9
    assert cfg.snr == 1e10
    assert (cfg.N, cfg.M, cfg.L) == (6, 60, 0.36)
    assert cfg.L == 6 * cfg.wavelength and cfg.d_min == cfg.wavelength / 2
    p = cfg.system_params()
    assert p.P_t / p.sigma2 == 1e10


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(methods=("optimal", "genetic"))
    with pytest.raises(ValueError):
        ExperimentConfig(sweep_param="L", sweep_values=(0.24,))
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"seeds": 3})


def test_infeasible_sweep_point_named():
    cfg = ExperimentConfig(sweep_param="L", sweep_values=(0.12, 0.24), delta_s=0.01)
    with pytest.raises(InfeasibleSweepPoint) as exc:
        cfg.grids()
    assert exc.value.param == "L" and exc.value.value == 0.12


def test_config_round_trip(tmp_path):
    cfg = small_cfg(seed=9)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.load(path) == cfg


def test_nested_sweep_single_trial():
    res = run_sweep(small_cfg(trials=1, sweep_values=(12, 24), methods=("optimal",)))
    assert res.rates("optimal", 24)[0] >= res.rates("optimal", 12)[0]


def test_determinism(result):
    again = run_sweep(small_cfg())
    assert again.records == result.records


def test_trial_order_does_not_matter(result):
    shuffled = run_sweep(small_cfg(), trial_order=[3, 0, 4, 2, 1])
    assert shuffled.records == result.records


def test_fpa_changes_only_through_channels():
    res = run_sweep(small_cfg(trials=3, sweep_param="L", sweep_values=(0.24, 0.48),
                              delta_s=0.01, methods=("fpa",)))
    assert len(res.records) == 6
    assert all(np.isfinite(res.rates("fpa", v)).all() for v in (0.24, 0.48))


def test_mean_std():
    assert mean_std([1.0, 2.0, 3.0]) == (2.0, 1.0)
    m, s = mean_std([4.0])
    assert m == 4.0 and math.isnan(s)


def test_summary_matches_raw(result):
    for row in result.summary():
        rates = result.rates(row.method, row.sweep_value)
        assert row.trials == len(rates) == 5
        assert row.mean == pytest.approx(float(np.mean(rates)), abs=1e-12)
        assert row.std == pytest.approx(float(np.std(rates, ddof=1)), abs=1e-12)


def test_csv_row_count_and_columns(result, tmp_path):
    raw, summary, meta = emit_csv(result, tmp_path / "out.csv")
    rows = read_csv(raw)
    assert tuple(rows[0]) == RAW_COLUMNS
    assert len(rows) - 1 == 2 * 3 * 5
    srows = read_csv(summary)
    assert tuple(srows[0]) == SUMMARY_COLUMNS
    assert len(srows) - 1 == 2 * 3
    doc = json.loads(meta.read_text())
    assert doc["schema_version"] == 1 and doc["coupled_sweep"] is True
    assert ExperimentConfig.from_dict(doc["config"]) == result.config


def test_csv_means_round_trip(result, tmp_path):
    raw, summary, _ = emit_csv(result, tmp_path / "out.csv")
    groups = {}
    for r in read_csv(raw)[1:]:
        groups.setdefault((r[1], r[2]), []).append(float(r[4]))
    for r in read_csv(summary)[1:]:
        values = groups[(r[1], r[2])]
        assert int(r[3]) == len(values)
        assert float(r[4]) == pytest.approx(sum(values) / len(values), abs=1e-9)


def test_header_only_csv_for_empty_methods(tmp_path):
    cfg = small_cfg(methods=())
    res = run_sweep(cfg)
    raw, summary, _ = emit_csv(res, tmp_path / "empty.csv")
    assert read_csv(raw) == [list(RAW_COLUMNS)]
    assert read_csv(summary) == [list(SUMMARY_COLUMNS)]


def test_emit_to_missing_directory(result, tmp_path):
    with pytest.raises(OSError):
        emit_csv(result, tmp_path / "nope" / "out.csv")
