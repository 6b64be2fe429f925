"""Numerical laboratory for quadratic Schrodinger interactions on the half-line.

Subpackage map: `fractional` (Riemann-Liouville operators on sampled
signals), `spectral` (free group, Duhamel integral, Bourgain-type norms,
cutoffs), `dispersion` (resonance functions, regime/region classification,
elementary integral estimates), `bilinear` (J-integral quadrature and
bilinear norm ratios), `boundary` (Duhamel boundary forcing operator class),
`ibvp` (Crank-Nicolson half-line solver, mass ledger, contraction map,
regularity predicates), `cli` (seeded experiment driver).
"""

__version__ = "0.1.0"

from .grids import GridFunction, SpaceTimeField, TimeSeries

__all__ = ["GridFunction", "SpaceTimeField", "TimeSeries", "__version__"]
