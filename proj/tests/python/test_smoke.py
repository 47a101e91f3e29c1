import math
from pathlib import Path

import numpy as np
import pytest

import urboot

DATA = Path(__file__).resolve().parents[1] / "data" / "macro_panel.csv"


def walks(T=80, N=3, seed=0):
    return np.cumsum(np.random.default_rng(seed).standard_normal((T, N)), axis=0)


def test_load_csv_and_missing():
    panel = urboot.load_csv(str(DATA), time_column=True)
    assert panel["names"] == ["GDP_A", "GDP_B", "GDP_C", "GDP_D", "GDP_E"]
    values = panel["values"]
    assert values.shape == (80, 5)
    assert np.isnan(values[:4, 1]).all()
    assert urboot.check_missing_insample(values) == [False] * 5


def test_diff_mult_masks_head():
    y = walks(T=10, N=2)
    d = urboot.diff_mult(y, [1, 2])
    assert math.isnan(d[0, 0]) and np.isnan(d[:2, 1]).all()
    np.testing.assert_allclose(d[1:, 0], np.diff(y[:, 0]))


def test_adf_statistic_matches_fixed_lag_regression():
    y = walks(T=100, N=1)[:, 0]
    out = urboot.adf_statistic(y, dc=1, detr="OLS", p_min=0, p_max=0)
    yd = y - y.mean()
    x, dy = yd[:-1], np.diff(yd)
    g = x @ dy / (x @ x)
    s2 = ((dy - g * x) ** 2).sum() / (len(dy) - 1)
    assert out["lags"] == 0
    assert out["statistic"] == pytest.approx(g / math.sqrt(s2 / (x @ x)), rel=1e-9)


def test_union_and_iadf_agree_for_one_series():
    y = walks(N=1)[:, 0]
    u = urboot.boot_union(y, B=49, seed=3)
    i = urboot.iadf(y, B=49, seed=3)
    assert u["outcomes"][0]["p_value"] == i["outcomes"][0]["p_value"]
    assert 0.0 <= u["outcomes"][0]["p_value"] <= 1.0


def test_multivariate_procedures_run():
    y = walks(N=4, seed=1)
    y[:, 3] = np.random.default_rng(2).standard_normal(80)
    names = ["a", "b", "c", "d"]
    assert len(urboot.panel_test(y, names=names, B=19)["outcomes"]) == 1
    b = urboot.bsqt(y, q=[0, 0.5, 1], names=names, B=19)
    assert len(b["rej_h0"]) == 4
    f = urboot.fdr(y, names=names, B=19)
    assert f["steps"][0]["critical_value"] is not None
    o = urboot.order_integration(y, names=names, B=19)
    assert all(d in (0, 1, 2) for d in o["d"])
    assert o["diff_data"].shape == y.shape


def test_errors():
    y = walks(N=2)
    y[:3, 0] = np.nan
    with pytest.raises(urboot.ValidationError):
        urboot.panel_test(y, boot="MBB", B=19)
    with pytest.raises(urboot.DegenerateInputError):
        urboot.boot_adf(np.ones(50), B=19)
    with pytest.raises(TypeError):
        urboot.iadf(y, bogus=1)
    warned = urboot.iadf(y, boot="MBB", B=19)
    assert warned["warnings"]
