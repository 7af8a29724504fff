"""Tests for the SVG writer."""

import math
from unittest.mock import MagicMock

import pytest

from noise_fidelity.outputs import PlotSpec, SVGWriter, Table


@pytest.fixture
def mock_pyplot() -> MagicMock:
    """pyplot stand-in whose subplots() returns a figure and axes."""
    plt = MagicMock()
    plt.subplots.return_value = (MagicMock(), MagicMock())
    return plt


class TestSVGWriter:
    def test_renders_lines(self, tmp_path, mock_pyplot, sweep_table: Table):
        """Test one line per y column and a deterministic savefig."""
        writer = SVGWriter(tmp_path, pyplot=mock_pyplot)
        writer.write_table(sweep_table)

        fig, ax = mock_pyplot.subplots.return_value
        assert ax.plot.call_count == 2
        x, y = ax.plot.call_args_list[1].args
        assert x == [0.0, 6.0]
        assert y[0] == 0.96
        assert math.isnan(y[1])
        ax.legend.assert_called_once()
        fig.savefig.assert_called_once_with(
            tmp_path / "gamma_sweep.svg", format="svg", metadata={"Date": None}
        )
        mock_pyplot.close.assert_called_once_with(fig)

    def test_skips_tables_without_plot(self, tmp_path, mock_pyplot):
        """Test that tables without a PlotSpec are ignored."""
        writer = SVGWriter(tmp_path, pyplot=mock_pyplot)
        writer.write_table(Table(name="t", columns=("a",), rows=[{"a": 1}]))
        mock_pyplot.subplots.assert_not_called()

    def test_skips_empty_tables(self, tmp_path, mock_pyplot):
        """Test that empty tables are ignored."""
        writer = SVGWriter(tmp_path, pyplot=mock_pyplot)
        writer.write_table(
            Table(name="t", columns=("a",), rows=[], plot=PlotSpec(x="a", y=("a",)))
        )
        mock_pyplot.subplots.assert_not_called()

    def test_log_axes_and_styles(self, tmp_path, mock_pyplot):
        """Test log scales, step style and the x label fallback."""
        table = Table(
            name="psd",
            columns=("f", "power"),
            rows=[{"f": 1.0, "power": 2.0}, {"f": 10.0, "power": 0.5}],
            plot=PlotSpec(x="f", y=("power",), style="step", logx=True, logy=True),
        )
        SVGWriter(tmp_path, pyplot=mock_pyplot).write_table(table)

        _, ax = mock_pyplot.subplots.return_value
        ax.step.assert_called_once()
        ax.set_xscale.assert_called_once_with("log")
        ax.set_yscale.assert_called_once_with("log")
        ax.set_xlabel.assert_called_once_with("f")
        ax.legend.assert_not_called()

    def test_points_style(self, tmp_path, mock_pyplot):
        """Test marker-only rendering."""
        table = Table(
            name="hist",
            columns=("x", "n"),
            rows=[{"x": 0.1, "n": 3}],
            plot=PlotSpec(x="x", y=("n",), style="points"),
        )
        SVGWriter(tmp_path, pyplot=mock_pyplot).write_table(table)

        _, ax = mock_pyplot.subplots.return_value
        assert ax.plot.call_args.args[2] == "o"
