import numpy as np
import pytest

from saddletower.config import Configuration
from saddletower.plotting import PlotSpec, plot_strip, strip_points


def test_strip_points_of_plus_minus_one():
    cfg = Configuration([2], [[1, -1]], [0.5, -0.5], [0.5, -0.5])
    (w,) = strip_points(cfg)
    np.testing.assert_allclose(w, [0, 1j * np.pi], atol=1e-15)


def test_branch_cut_maps_to_plus_pi():
    cfg = Configuration([1], [[complex(-1, -0.0)]], [0, 0], [0, 0])
    (w,) = strip_points(cfg)
    assert w[0].imag == pytest.approx(np.pi)


def test_periods_duplicate_points():
    cfg = Configuration([2], [[1, 1j]], [0, 0], [0, 0])
    (w,) = strip_points(cfg, periods=2)
    np.testing.assert_allclose(w[2:] - w[:2], 2j * np.pi)


def test_marker_cycle_and_style():
    style = PlotSpec()
    assert [style.marker(l) for l in range(1, 5)] == ["o", "s", "D", "o"]
    with pytest.raises(ValueError):
        PlotSpec(periods=0)


def test_plot_three_marker_classes(tmp_path):
    cfg = Configuration([1, 3, 2], [[1], [2, 3j, -4], [-5, 6j]], [0, 0, 0, 0], [0, 0, 0, 0])
    path = tmp_path / "p.svg"
    pts = plot_strip(cfg, path, PlotSpec(periods=1))
    assert [p.size for p in pts] == [1, 3, 2]
    text = path.read_text()
    assert text.count("layer 1") == 1 and "layer 3" in text
