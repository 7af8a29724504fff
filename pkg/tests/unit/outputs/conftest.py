"""Output test fixtures."""

import pytest

from noise_fidelity.outputs import PlotSpec, Table


@pytest.fixture
def sweep_table() -> Table:
    """Small gamma-sweep table with a plot and a missing value."""
    return Table(
        name="gamma_sweep",
        columns=("gamma", "mean_F", "measured"),
        rows=[
            {"gamma": 0.0, "mean_F": 1.0, "measured": 0.96},
            {"gamma": 6.0, "mean_F": 0.9928, "measured": None},
        ],
        meta={"kind": "ou"},
        plot=PlotSpec(x="gamma", y=("mean_F", "measured"), ylabel="fidelity"),
    )
