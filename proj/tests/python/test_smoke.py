import math

import numpy as np
import pytest

import sharpib


def test_version():
    assert sharpib.__version__


def test_kernel_partition_of_unity():
    for r in np.linspace(0.0, 1.0, 11):
        total = sum(sharpib.ib4_kernel(r - k) for k in range(-3, 4))
        assert abs(total - 1.0) < 1e-12


def test_oracles():
    assert sharpib.inflating_ring_inner_pressure() == pytest.approx(314.13801822837300539, rel=1e-12)
    jump = sharpib.static_ring_pressure(0.3125 + 1e-12) - sharpib.static_ring_pressure(0.3125 - 1e-12)
    assert jump == pytest.approx(-12.8, rel=1e-8)


def test_config_resolution():
    cfg = sharpib.config({"scenario": "inflating_ring", "N": 32})
    assert cfg["scenario"] == "inflating_ring"
    assert cfg["resolved"]["cells_per_axis"] == 64
    with pytest.raises(sharpib.ConfigError):
        sharpib.config({"N": 24})
    with pytest.raises(sharpib.ConfigError):
        sharpib.config("no_such_key = 1\n")


def test_short_run(tmp_path):
    out = sharpib.run({"method": "sharp_steady", "N": 16, "final_time_s": 0.002}, str(tmp_path))
    assert out["manifest"]["status"] == "ok"
    assert out["p"].shape == (16, 16)
    assert np.all(np.isfinite(out["p"]))
    assert len(out["phi"]) == out["position"].shape[0]
    assert (tmp_path / "manifest.json").exists()
    assert (tmp_path / "p.csv").exists()


def test_property_suite():
    results = sharpib.property_suite()
    assert len(results) == 6
    for r in results:
        assert r["passed"], r["name"]
        assert math.isfinite(r["value"])
