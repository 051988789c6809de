import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomsa.sensitivity import (
    AnalysisConfig,
    analyze_dataset,
    analyze_variable,
    geometric_correlation,
    geometric_index,
)

seeds = st.integers(0, 2**32 - 1)

FIELDS = ("epsilon", "area_v", "area_box", "rho_geom", "s_geom", "area_symdiff")


def mirrored_cloud(rng, n=60):
    x = rng.uniform(size=n)
    y = rng.uniform(size=n)
    mid = (y.min() + y.max()) / 2
    return np.concatenate([x, x]), np.concatenate([y, 2 * mid - y])


@pytest.mark.parametrize("sd, v, expected", [(0.0, 0.4, 0.0), (0.8, 0.4, 1.0), (0.4, 0.4, 0.5), (0.3, 0.0, 0.0)])
def test_geometric_index(sd, v, expected):
    assert geometric_index(sd, v) == pytest.approx(expected)


def test_geometric_index_clamps_and_rejects():
    assert geometric_index(1.0, 0.4) == 1.0
    with pytest.raises(ValueError):
        geometric_index(-0.1, 1.0)


def test_geometric_correlation_table_values():
    assert geometric_correlation(0.31, 1.00) == pytest.approx(0.69)
    assert geometric_correlation(2.07, 3.94) == pytest.approx(0.4746, abs=1e-4)
    assert geometric_correlation(2.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        geometric_correlation(0.5, 0.0)


def test_config_needs_exactly_one_radius_rule():
    AnalysisConfig(epsilon=0.1, quantile=None)
    with pytest.raises(ValueError):
        AnalysisConfig(epsilon=0.1, quantile=0.05)
    with pytest.raises(ValueError):
        AnalysisConfig(epsilon=None, quantile=None)
    with pytest.raises(ValueError):
        AnalysisConfig(epsilon=None, quantile=1.5)


def test_input_validation():
    with pytest.raises(ValueError):
        analyze_variable(np.arange(5.0), np.arange(5.0))
    with pytest.raises(ValueError):
        analyze_variable(np.arange(20.0), np.arange(19.0))
    with pytest.raises(ValueError):
        analyze_variable(np.r_[np.arange(19.0), np.nan], np.arange(20.0))


def test_constant_column_is_degenerate():
    r = analyze_variable(np.ones(50), np.random.default_rng(0).uniform(size=50))
    assert r.s_geom == 0 and r.rho_geom == 0
    assert any("degenerate" in d for d in r.diagnostics)


def test_empty_complex_reports_diagnostic():
    x = np.arange(20.0)
    y = np.random.default_rng(1).uniform(size=20)
    r = analyze_variable(x, y, AnalysisConfig(epsilon=1e-4, quantile=None))
    assert r.area_v == 0 and r.s_geom == 0
    assert any("empty complex" in d for d in r.diagnostics)


def test_disjoint_from_reflection_scores_one():
    # two tight clumps at the top left and bottom right: the mirror of each lands in empty space
    rng = np.random.default_rng(2)
    a = rng.uniform(0, 0.2, (40, 2)) + [0, 0.8]
    b = rng.uniform(0, 0.2, (40, 2)) + [0.8, 0.0]
    pts = np.vstack([a, b])
    r = analyze_variable(pts[:, 0], pts[:, 1], AnalysisConfig(epsilon=0.1, quantile=None))
    assert r.area_v > 0
    assert r.s_geom == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds, st.floats(0.05, 0.3))
def test_mirror_nullity(seed, eps):
    x, y = mirrored_cloud(np.random.default_rng(seed))
    r = analyze_variable(x, y, AnalysisConfig(epsilon=eps, quantile=None))
    assert r.s_geom <= 0.05


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_flip_output_sign(seed):
    rng = np.random.default_rng(seed)
    x = rng.uniform(size=80)
    y = np.sin(3 * x) + 0.3 * rng.uniform(size=80)
    a = analyze_variable(x, y)
    b = analyze_variable(x, -y)
    assert b.s_geom == pytest.approx(a.s_geom, abs=1e-6)


@settings(max_examples=15, deadline=None)
@given(seeds, st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_translation_invariance(seed, dx, dy):
    rng = np.random.default_rng(seed)
    x = rng.uniform(size=80)
    y = x**2 + 0.2 * rng.uniform(size=80)
    a = analyze_variable(x, y)
    b = analyze_variable(x + dx, y + dy)
    for f in FIELDS:
        assert getattr(b, f) == pytest.approx(getattr(a, f), rel=1e-9, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(seeds, st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_scale_invariance(seed, sx, sy):
    rng = np.random.default_rng(seed)
    x = rng.uniform(size=80)
    y = np.abs(x - 0.5) + 0.2 * rng.uniform(size=80)
    a = analyze_variable(x, y)
    b = analyze_variable(x * sx, y * sy)
    assert b.s_geom == pytest.approx(a.s_geom, abs=1e-6)
    assert b.rho_geom == pytest.approx(a.rho_geom, abs=1e-6)


def test_indices_in_range_without_normalization():
    rng = np.random.default_rng(3)
    x = rng.normal(size=120) * 5
    y = rng.normal(size=120)
    r = analyze_variable(x, y, AnalysisConfig(normalize=False))
    assert 0 <= r.s_geom <= 1 and 0 <= r.rho_geom <= 1
    assert r.area_box > 1


def test_dataset_single_column_matches_variable():
    rng = np.random.default_rng(4)
    x = rng.uniform(size=100)
    y = x + rng.uniform(size=100)
    (r,) = analyze_dataset(x[:, None], y, names=["a"])
    assert r == analyze_variable(x, y, name="a")


def test_dataset_column_permutation():
    rng = np.random.default_rng(5)
    x = rng.uniform(size=(100, 3))
    y = 2 * x[:, 0] + x[:, 1]
    a = analyze_dataset(x, y, names=["a", "b", "c"])
    b = analyze_dataset(x[:, [2, 0, 1]], y, names=["c", "a", "b"])
    assert [a[2], a[0], a[1]] == b


def test_dataset_workers_match_serial():
    rng = np.random.default_rng(6)
    x = rng.uniform(size=(100, 3))
    y = x[:, 0] - x[:, 2]
    assert analyze_dataset(x, y, workers=3) == analyze_dataset(x, y)


def test_dataset_dimension_mismatch():
    with pytest.raises(ValueError):
        analyze_dataset(np.zeros((10, 2)), np.zeros(11))
    with pytest.raises(ValueError):
        analyze_dataset(np.zeros((10, 2)), np.zeros(10), names=["a"])


def test_barcode_attached_on_request():
    rng = np.random.default_rng(7)
    x, y = rng.uniform(size=60), rng.uniform(size=60)
    r = analyze_variable(x, y, AnalysisConfig(with_barcode=True, barcode_max_points=40))
    assert r.barcode is not None
    assert len(r.barcode.dimension(0)) == 40
    assert "barcode" in r.to_dict()


@pytest.mark.slow
def test_noise_baseline():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        r = analyze_variable(rng.uniform(size=1000), rng.uniform(size=1000))
        assert r.s_geom < 0.15, seed
