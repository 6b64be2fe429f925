"""Stock data profiles used by tests and CLI experiments."""

from __future__ import annotations

import numpy as np


def smooth_bump(t, lo: float, hi: float):
    """C-infinity bump supported exactly on (lo, hi), peak value 1."""
    t = np.asarray(t, dtype=float)
    s = (t - lo) / (hi - lo)
    out = np.zeros_like(s)
    inside = (s > 0.0) & (s < 1.0)
    si = s[inside]
    # exp(-1/(s(1-s))) normalized to 1 at the midpoint
    out[inside] = np.exp(4.0 - 1.0 / (si * (1.0 - si)))
    return out


def gaussian(x, center: float = 0.0, width: float = 1.0, amplitude: float = 1.0,
             wavenumber: float = 0.0):
    """Gaussian envelope with optional carrier wave."""
    x = np.asarray(x, dtype=float)
    env = amplitude * np.exp(-((x - center) ** 2) / (2.0 * width ** 2))
    if wavenumber:
        return env * np.exp(1j * wavenumber * x)
    return env.astype(complex)


def sech(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / np.cosh(x)
