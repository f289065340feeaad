import math

import numpy as np
import pytest

import clustercov as cc
import clustercov.mc as mc
from clustercov._accel import BACKEND, _py

_core = pytest.importorskip(
    "clustercov._accel._core", reason="compiled extension not built"
)

from conftest import reference_link


def _payload(n_trials=64, clusters_per_trial=40, nodes_per_cluster=6, seed=0):
    rng = np.random.default_rng(seed)
    n_parents = clusters_per_trial * n_trials
    n_nodes = nodes_per_cluster * n_parents
    return dict(
        parent_r=20000.0 * np.sqrt(rng.uniform(size=n_parents)),
        trial_of_parent=np.repeat(np.arange(n_trials, dtype=np.intp), clusters_per_trial),
        node_parent=np.repeat(np.arange(n_parents, dtype=np.intp), nodes_per_cluster),
        off_r=500.0 * np.sqrt(rng.uniform(size=n_nodes)),
        off_th=rng.uniform(0.0, 2.0 * math.pi, size=n_nodes),
        h=rng.exponential(size=n_nodes),
        n_out=n_trials,
    )


class TestKernelAgreement:
    @pytest.mark.parametrize("alpha", [3.5, 4.2, 3.0])
    def test_inter_sums(self, alpha):
        payload = _payload()
        a = _py.inter_sums(neg_alpha=-alpha, **payload)
        b = _core.inter_sums(neg_alpha=-alpha, **payload)
        assert np.allclose(a, b, rtol=1e-12, atol=0.0)

    @pytest.mark.parametrize("alpha", [3.5, 4.2])
    def test_radial_sums(self, alpha):
        rng = np.random.default_rng(1)
        r = rng.uniform(1.0, 20000.0, 50000)
        h = rng.exponential(size=50000)
        idx = np.sort(rng.integers(0, 256, 50000)).astype(np.intp)
        a = _py.radial_sums(r, h, idx, 256, -alpha)
        b = _core.radial_sums(r, h, idx, 256, -alpha)
        assert np.allclose(a, b, rtol=1e-12, atol=0.0)

    def test_empty_inputs(self):
        empty_f = np.zeros(0)
        empty_i = np.zeros(0, dtype=np.intp)
        for impl in (_py, _core):
            out = impl.radial_sums(empty_f, empty_f, empty_i, 8, -3.5)
            assert out.shape == (8,) and np.all(out == 0.0)
            out = impl.inter_sums(empty_f, empty_i, empty_i, empty_f, empty_f, empty_f, 8, -3.5)
            assert out.shape == (8,) and np.all(out == 0.0)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            _core.radial_sums(np.ones(3), np.ones(2), np.zeros(3, dtype=np.intp), 4, -3.5)


class TestEndToEndAgreement:
    def test_estimates_match_across_backends(self, monkeypatch):
        link = reference_link()
        spec = cc.SimSpec(
            config=cc.NetworkConfig(link=link, window_radius=20000.0),
            scenario=cc.Scenario(cc.Unordered(), cc.FixedSize(6)),
            trials=2000,
            seed=9,
            gamma_grid=(0.05, 0.1, 0.5),
        )
        results = {}
        for name, impl in (("python", _py), ("compiled", _core)):
            monkeypatch.setattr(mc, "radial_sums", impl.radial_sums)
            monkeypatch.setattr(mc, "inter_sums", impl.inter_sums)
            results[name] = [e.mean for e in cc.estimate_coverage(spec)]
        assert np.allclose(results["python"], results["compiled"], atol=1e-9)

    def test_backend_reported(self):
        assert BACKEND in ("python", "compiled")
        assert cc.KERNEL_BACKEND == BACKEND
