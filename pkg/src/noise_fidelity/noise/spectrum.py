"""Power spectral density of noise realizations."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import optimize, signal

from ..errors import FitFailedError, InvalidArgumentError
from .generation import NoiseTrace

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

DEFAULT_NPERSEG = 4096


@dataclass(frozen=True)
class PowerSpectrum:
    """Ensemble-averaged one-sided PSD of the increment rate dX/dt."""

    frequencies: FloatArray  # Hz
    power: FloatArray  # (rad/s)^2 / Hz
    n_traces: int

    def band(self, f_min: float, f_max: float) -> tuple[FloatArray, FloatArray]:
        """Frequencies and powers with f_min <= f <= f_max and f > 0."""
        mask = (self.frequencies >= f_min) & (self.frequencies <= f_max) & (self.frequencies > 0)
        if np.count_nonzero(mask) < 3:
            raise InvalidArgumentError(f"fewer than 3 frequency bins in [{f_min}, {f_max}] Hz")
        return self.frequencies[mask], self.power[mask]


def psd(traces: Sequence[NoiseTrace], nperseg: int | None = None) -> PowerSpectrum:
    """Welch estimate of the increment-rate PSD averaged over traces.

    Each trace's dX/dt is split into Hann-windowed segments of ``nperseg``
    samples (50% overlap, mean removed per segment); segment periodograms are
    averaged within a trace and then across traces.

    Args:
        traces: One or more traces with identical length and dt.
        nperseg: Segment length; defaults to min(n_steps, 4096).

    Returns:
        PowerSpectrum up to the Nyquist frequency 1/(2 dt).
    """
    if not traces:
        raise InvalidArgumentError("psd requires at least one trace")
    dt = traces[0].dt
    n = traces[0].n_steps
    if any(t.dt != dt or t.n_steps != n for t in traces):
        raise InvalidArgumentError("all traces must share length and dt")

    seg = min(n, nperseg or DEFAULT_NPERSEG)
    total: FloatArray | None = None
    frequencies: FloatArray | None = None
    for trace in traces:
        frequencies, power = signal.welch(
            trace.dx / dt,
            fs=1.0 / dt,
            window="hann",
            nperseg=seg,
            detrend="constant",
            scaling="density",
        )
        total = power if total is None else total + power
    assert total is not None and frequencies is not None
    logger.debug("PSD over %d traces, %d bins", len(traces), frequencies.shape[0])
    return PowerSpectrum(frequencies=frequencies, power=total / len(traces), n_traces=len(traces))


def spectral_slope(spectrum: PowerSpectrum, f_min: float, f_max: float) -> float:
    """Least-squares slope of log10(power) against log10(frequency) over a band."""
    f, p = spectrum.band(f_min, f_max)
    slope, _ = np.polyfit(np.log10(f), np.log10(p), 1)
    return float(slope)


def _log_highpass(f: FloatArray, log_amp: float, log_knee: float) -> FloatArray:
    knee = np.exp(log_knee)
    return log_amp + 2.0 * np.log(f) - np.log(knee**2 + f**2)


def fit_ou_knee(spectrum: PowerSpectrum, f_min: float, f_max: float) -> float:
    """Fit the knee of the OU increment-rate spectrum A f^2 / (f_k^2 + f^2).

    The increment rate of an OU process is high-pass filtered white noise, so
    the knee f_k estimates kappa / (2 pi).

    Returns:
        Knee frequency in Hz.
    """
    f, p = spectrum.band(f_min, f_max)
    plateau = float(np.median(p[-max(3, len(p) // 10) :]))
    guess = (math.log(plateau), math.log(math.sqrt(f_min * f_max)))
    try:
        popt, _ = optimize.curve_fit(_log_highpass, f, np.log(p), p0=guess, maxfev=10000)
    except (RuntimeError, ValueError) as e:
        raise FitFailedError(
            f"OU knee fit failed: {e}", {"f_min": f_min, "f_max": f_max, "n_bins": len(f)}
        ) from e
    return float(np.exp(popt[1]))
