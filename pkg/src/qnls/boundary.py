"""Duhamel boundary forcing operator and its fractional class.

The base operator convolves the half-order time derivative of the boundary
datum against the free-propagator kernel (t-t')^{-1/2} exp(i x^2/(4a(t-t'))).
The substitution sigma = sqrt(t-t') removes the endpoint singularity; the
remaining oscillation exp(i B/sigma^2), B = x^2/(4a), is integrated on
half-period panels with a Fresnel-integral completion below the last panel
(exact for a frozen signal, with a bound on the freezing error).

Class members of order lambda are built from the base evaluations on a
uniform ray: for lambda > 0 the spatial kernel (y-x)^{lambda-1} is applied
by product integration (exact on the piecewise-linear interpolant, reusing
the fractional-integral weights from the right); for -2 < lambda < 0 the
integrated-by-parts representation with the explicit one-sided boundary
term is used, with the time derivative taken by central differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import fresnel

from .errors import (LambdaOutOfRange, NonPositiveA, SingularQuadratureFail,
                     SupportViolation, WindowViolation)
from .fractional import _integrate, rl_apply
from .grids import SpaceTimeField, TimeSeries
from .spectral import BourgainParams, bourgain_norm, cutoff, sobolev_norm_1d

_GL8 = np.polynomial.legendre.leggauss(8)


def kernel_constant(a: float) -> complex:
    """Normalization making the base operator reproduce the datum at x = 0."""
    return 2.0 * np.exp(-0.75j * np.pi) * np.sqrt(a)


def delta_coefficient(a: float) -> complex:
    """Coefficient of the point source the trace-normalized kernel satisfies.

    The kernel that reproduces the datum at x = 0 solves the free equation
    away from the origin with a Dirac line source whose coefficient is
    2 sqrt(a) exp(3 pi i / 4) -- the conjugate phase of kernel_constant.
    Normalizing the trace and normalizing the source force opposite phases
    for this kernel; the value is pinned by the weak-form refinement check.
    """
    return 2.0 * np.exp(0.75j * np.pi) * np.sqrt(a)


@dataclass
class ForcingSpec:
    """Dispersion a, class order lambda, and boundary datum supported in [0, T]."""

    a: float
    lam: float
    f: TimeSeries

    def __post_init__(self):
        if self.a <= 0:
            raise NonPositiveA(f"a must be positive, got {self.a}")
        if self.lam <= -2.0:
            raise LambdaOutOfRange(f"lambda must exceed -2, got {self.lam}")
        if self.f.t0 != 0.0:
            raise ValueError("boundary datum must start at t = 0")


@dataclass
class TraceReport:
    residual: float
    phase: str
    residuals: dict
    a: float
    lam: float


class _Interp:
    """Linear interpolant of a complex series, zero outside its window."""

    def __init__(self, ts: TimeSeries):
        self.t = ts.times
        self.re = ts.samples.real
        self.im = ts.samples.imag
        self.dt = ts.dt
        self.sup = ts.sup()
        grad = np.gradient(ts.samples, ts.dt) if ts.n > 2 else np.zeros(ts.n)
        self.dsup = float(np.max(np.abs(grad)))

    def __call__(self, t):
        return (np.interp(t, self.t, self.re, left=0.0, right=0.0)
                + 1j * np.interp(t, self.t, self.im, left=0.0, right=0.0))


def _osc_tail_factor(z):
    """E(z) = integral over v in [1, inf) of exp(i z v^2) / v^2, for z >= 0."""
    z = np.asarray(z, dtype=float)
    out = np.ones(z.shape, dtype=complex)
    pos = z > 0
    zp = z[pos]
    w = np.sqrt(2.0 * zp / np.pi)
    s_f, c_f = fresnel(w)
    j_full = 0.5 * np.sqrt(np.pi / zp) * np.exp(0.25j * np.pi)
    j_head = np.sqrt(np.pi / (2.0 * zp)) * (c_f + 1j * s_f)
    out[pos] = np.exp(1j * zp) + 2j * zp * (j_full - j_head)
    return out


def _gl_sum(g, edges):
    nodes, weights = _GL8
    lo = edges[:-1]
    half = 0.5 * (edges[1:] - lo)
    pts = (lo + half)[:, None] + half[:, None] * nodes[None, :]
    vals = g(pts.ravel()).reshape(pts.shape)
    return np.sum((vals @ weights) * half)


def _kernel_integral(m: _Interp, a: float, x: float, t: float,
                     rel_tol: float = 1e-6) -> complex:
    """Base-operator value at (x, t) given the half-derivative series m."""
    if t <= 0.0 or m.sup == 0.0:
        return 0.0 + 0.0j
    shi = math.sqrt(t)
    B = x * x / (4.0 * a)
    g = lambda sig: np.exp(1j * B / (sig * sig)) * m(t - sig * sig)
    if B < 1e-300:
        edges = shi * np.linspace(0.0, 1.0, 33)
        edges[0] = 1e-12 * shi
        val = _gl_sum(g, edges) + 1e-12 * shi * m(t)
        return (2.0 / math.sqrt(np.pi)) * val

    scale0 = m.sup * min(shi, 1.0) + 1e-300
    tol_abs = rel_tol * scale0
    phi_hi = B / t
    k0 = max(1, math.ceil(phi_hi / np.pi))
    md = m.dsup + 1e-300
    K = math.ceil((0.4 * md * B ** 1.5 / tol_abs) ** 0.4 / np.pi)
    K = min(max(K, k0 + 8), k0 + 4096)
    sig = np.sqrt(B / (np.pi * np.arange(K, k0 - 1, -1, dtype=float)))
    top = np.linspace(sig[-1], shi, 33)
    edges = np.concatenate([sig, top[1:]]) if top[-1] > sig[-1] else sig
    val = _gl_sum(g, edges)
    s_k = sig[0]
    val += m(t - s_k * s_k) * s_k * _osc_tail_factor(B / (s_k * s_k))
    err = 0.4 * md * s_k ** 5 / B
    if err > 0.01 * max(abs(val), 0.1 * scale0):
        raise SingularQuadratureFail(
            f"freezing error {err:.2e} above 1% at (x={x:.3g}, t={t:.3g})")
    return (2.0 / math.sqrt(np.pi)) * complex(val)


def _half_order_series(spec: ForcingSpec) -> TimeSeries:
    """I_{-1/2 - lambda/2} f, the series the base kernel acts on."""
    return rl_apply(spec.f, -0.5 - spec.lam / 2.0)


def _column_values(m: _Interp, a: float, x: float, ts: np.ndarray,
                   rel_tol: float = 1e-5) -> np.ndarray:
    """Base-operator values at one x for all times, sharing the sigma ladder.

    At fixed x the oscillation edges and phases are time-independent; only
    the interpolated signal changes, so all times share one node set masked
    per time by sigma <= sqrt(t), plus a partial top panel and the Fresnel
    tail below the deepest edge.
    """
    ts = np.asarray(ts, dtype=float)
    out = np.zeros(ts.size, dtype=complex)
    live = ts > 0.0
    if not np.any(live) or m.sup == 0.0:
        return out
    t_live = ts[live]
    rt = np.sqrt(t_live)
    t_max = float(np.max(t_live))
    B = x * x / (4.0 * a)
    scale0 = m.sup * min(math.sqrt(t_max), 1.0) + 1e-300

    if B < 1e-300:
        edges = math.sqrt(t_max) * np.linspace(0.0, 1.0, 65)
    else:
        md = m.dsup + 1e-300
        k_min = max(1, math.ceil(B / (np.pi * t_max)))
        K = math.ceil((0.4 * md * B ** 1.5 / (rel_tol * scale0)) ** 0.4 / np.pi)
        K = min(max(K, k_min + 8), k_min + 4096)
        edges = np.sqrt(B / (np.pi * np.arange(K, k_min - 1, -1, dtype=float)))
        gap = math.sqrt(t_max) - edges[-1]
        if gap > 1e-14:
            n_top = max(8, min(48, int(np.ceil(48 * gap / math.sqrt(t_max)))))
            edges = np.concatenate([edges,
                                    np.linspace(edges[-1], math.sqrt(t_max),
                                                n_top + 1)[1:]])

    nodes, glw = _GL8
    lo = edges[:-1]
    half = 0.5 * (edges[1:] - lo)
    sig = ((lo + half)[:, None] + half[:, None] * nodes[None, :]).ravel()
    phase = np.exp(1j * B / (sig * sig)) if B > 0 else np.ones_like(sig)
    args = t_live[:, None] - sig[None, :] ** 2
    mv = m(args.ravel()).reshape(args.shape) * phase[None, :]
    panel_vals = (mv.reshape(t_live.size, lo.size, nodes.size) @ glw) * half[None, :]
    complete = edges[1:][None, :] <= rt[:, None] + 1e-15
    vals = np.sum(np.where(complete, panel_vals, 0.0), axis=1)

    # partial top panel [last complete edge, sqrt(t)]
    idx = np.searchsorted(edges, rt + 1e-15, side="right") - 1
    has = idx >= 0
    lo_t = np.where(has, edges[np.clip(idx, 0, edges.size - 1)], 0.0)
    half_t = 0.5 * np.maximum(rt - lo_t, 0.0) * has
    sig_t = (lo_t + half_t)[:, None] + half_t[:, None] * nodes[None, :]
    ph_t = np.exp(1j * B / (sig_t ** 2 + 1e-300)) if B > 0 else np.ones_like(sig_t)
    mv_t = m((t_live[:, None] - sig_t ** 2).ravel()).reshape(sig_t.shape)
    vals += ((mv_t * ph_t) @ glw) * half_t

    # Fresnel completion below the deepest covered edge
    s_eff = np.minimum(edges[0], rt)
    if B > 0:
        tail = m(t_live - s_eff ** 2) * s_eff * _osc_tail_factor(B / (s_eff ** 2 + 1e-300))
        vals += tail
        err = 0.4 * (m.dsup + 1e-300) * float(np.max(s_eff)) ** 5 / B
        if err > 0.01 * max(float(np.max(np.abs(vals))), 0.1 * scale0):
            raise SingularQuadratureFail(
                f"freezing error {err:.2e} above 1% at x={x:.3g}")
    out[live] = (2.0 / math.sqrt(np.pi)) * vals
    return out


def _base_field(m: _Interp, a: float, ys, ts, rel_tol: float = 1e-5) -> np.ndarray:
    out = np.empty((len(ys), len(ts)), dtype=complex)
    ts = np.asarray(ts, dtype=float)
    for i, y in enumerate(ys):
        out[i, :] = _column_values(m, a, float(y), ts, rel_tol)
    return out


def _ray_grid(xs: np.ndarray, spec: ForcingSpec, n_pad: int | None = None):
    """Uniform y-grid extending xs to the right for the spatial convolution.

    The spacing resolves the propagator's spatial oscillation where the
    field still carries mass (local wavelength ~ sqrt(a T) there).
    """
    xs = np.asarray(xs, dtype=float)
    t_max = spec.f.t_end
    if xs.size > 1:
        dy = xs[1] - xs[0]
        if not np.allclose(np.diff(xs), dy):
            raise ValueError("xs must be uniformly spaced")
    else:
        dy = float(np.clip(0.1 * math.sqrt(spec.a * t_max), 0.01, 0.1))
    pad = max(12.0 * math.sqrt(spec.a * t_max), 6.0, 32 * dy)
    n_extra = int(np.ceil(pad / dy)) if n_pad is None else n_pad
    return np.concatenate([xs, xs[-1] + dy * np.arange(1, n_extra + 1)]), dy


def forcing_field(spec: ForcingSpec, xs, ts, representation: str = "auto") -> np.ndarray:
    """Class-operator field on the tensor grid xs x ts, shape (nx, nt).

    representation: "auto" picks the direct kernel at lambda = 0, the
    right-sided fractional convolution for lambda > 0, and the
    integrated-by-parts form for lambda < 0; "def0"/"alt" force a branch.
    """
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)
    lam = spec.lam
    if representation == "auto":
        representation = "kernel" if lam == 0.0 else ("def0" if lam > 0 else "alt")
    m = _Interp(_half_order_series(spec))

    if representation == "kernel":
        if lam != 0.0:
            raise LambdaOutOfRange("direct kernel representation needs lambda = 0")
        return _base_field(m, spec.a, xs, ts)

    if representation == "def0":
        if lam <= 0.0:
            raise LambdaOutOfRange("def0 representation needs lambda > 0")
        ys, dy = _ray_grid(xs, spec)
        G = _base_field(m, spec.a, ys, ts)
        out = np.empty((xs.size, ts.size), dtype=complex)
        for j in range(ts.size):
            conv = _integrate(G[::-1, j], dy, lam)[::-1]
            out[:, j] = conv[:xs.size]
        return out

    if representation != "alt":
        raise ValueError(f"unknown representation {representation!r}")
    if not (-2.0 < lam):
        raise LambdaOutOfRange(f"alt representation needs lambda > -2, got {lam}")
    ys, dy = _ray_grid(xs, spec)
    delta = spec.f.dt
    g_plus = _base_field(m, spec.a, ys, ts + delta)
    g_minus = _base_field(m, spec.a, ys, ts - delta)
    dt_term = 1j * (g_plus - g_minus) / (2.0 * delta)
    out = np.empty((xs.size, ts.size), dtype=complex)
    for j in range(ts.size):
        conv = _integrate(dt_term[::-1, j], dy, lam + 2.0)[::-1]
        out[:, j] = -conv[:xs.size] / spec.a
    # explicit one-sided boundary term C' / a * x_-^{lambda+1}/Gamma(lambda+2)
    if lam <= -1.0 and np.any(xs == 0.0):
        raise LambdaOutOfRange("boundary term singular at x = 0 for lambda <= -1")
    x_neg = np.zeros_like(xs)
    neg = xs < 0.0
    x_neg[neg] = (-xs[neg]) ** (lam + 1.0)
    out += (delta_coefficient(spec.a) / spec.a / math.gamma(lam + 2.0)
            * np.outer(x_neg, m(ts)))
    return out


def forcing_eval(spec: ForcingSpec, x: float, t: float,
                 representation: str = "auto"):
    """Class-operator value at a single point."""
    if spec.lam == 0.0 and representation in ("auto", "kernel"):
        m = _Interp(_half_order_series(spec))
        return _kernel_integral(m, spec.a, x, t)
    field = forcing_field(spec, np.array([x]), np.array([t]), representation)
    return complex(field[0, 0])


def trace_check(spec: ForcingSpec, n_samples: int = 48) -> TraceReport:
    """Compare the x = 0 trace against both candidate phase variants.

    The reference amplitude is a^(lambda/2), the unique power consistent
    with the base identity trace = f at lambda = 0 (any fixed sqrt(a)
    amplitude fails there for a != 1); the kernel quadrature confirms it
    to 5 digits across a and lambda.  The phase winner is selected
    empirically between exp(i lambda pi/4) and exp(3 i lambda pi/4) and
    reported alongside both residuals.
    """
    if spec.lam <= -1.0:
        raise LambdaOutOfRange("trace identity needs lambda > -1")
    f = spec.f
    idx = np.unique(np.linspace(1, f.n - 1, n_samples).astype(int))
    ts = f.times[idx]
    got = forcing_field(spec, np.array([0.0]), ts)[0, :]
    ref = spec.a ** (spec.lam / 2.0) * f.samples[idx]
    den = float(np.max(np.abs(ref)))
    if den == 0.0:
        return TraceReport(0.0, "lambda*pi/4", {}, spec.a, spec.lam)
    residuals = {}
    for name, phase in (("lambda*pi/4", np.exp(0.25j * np.pi * spec.lam)),
                        ("3*lambda*pi/4", np.exp(0.75j * np.pi * spec.lam))):
        residuals[name] = float(np.max(np.abs(got - phase * ref)) / den)
    phase = min(residuals, key=residuals.get)
    return TraceReport(residuals[phase], phase, residuals, spec.a, spec.lam)


def trace_residual(spec: ForcingSpec) -> float:
    return trace_check(spec).residual


def pde_residual(spec: ForcingSpec, testfn: SpaceTimeField) -> complex:
    """Weak-form defect of the forced Schrodinger identity against a test field.

    Pairs the operator field with (-i d_t + a d_xx) of the test function and
    subtracts the paired source term; all integrations by parts sit on the
    test function, so the result is pure discretization error, O(dx^2+dt^2).
    """
    z = testfn.samples
    edge_mass = (np.abs(z[0, :]).max() + np.abs(z[-1, :]).max()
                 + np.abs(z[:, 0]).max() + np.abs(z[:, -1]).max())
    if edge_mass > 1e-12 * max(np.abs(z).max(), 1e-300):
        raise SupportViolation("test function must vanish on the grid boundary")
    lam = spec.lam
    xs, ts_grid = testfn.x, testfn.t
    if lam < 0.0 and np.any((np.abs(z) > 0) & (xs[:, None] <= 0.0)):
        raise SupportViolation(
            "for lambda < 0 the source pairing needs support in x > 0")
    field = forcing_field(spec, xs, ts_grid)
    dt_z = np.zeros_like(z)
    dt_z[:, 1:-1] = (z[:, 2:] - z[:, :-2]) / (2.0 * testfn.dt)
    dxx_z = np.zeros_like(z)
    dxx_z[1:-1, :] = (z[2:, :] - 2 * z[1:-1, :] + z[:-2, :]) / testfn.dx ** 2
    adj = -1j * dt_z + spec.a * dxx_z
    lhs = np.sum(field * adj) * testfn.dx * testfn.dt

    C = delta_coefficient(spec.a)
    m_src = _Interp(rl_apply(spec.f, -0.5 - lam / 2.0))(ts_grid)
    if lam == 0.0:
        # line source on x = 0: interpolate the test function there
        if np.any(xs == 0.0):
            line = z[int(np.argwhere(xs == 0.0)[0, 0]), :]
        else:
            right = int(np.searchsorted(xs, 0.0))
            if right == 0 or right == xs.size:
                line = np.zeros(ts_grid.size)
            else:
                w = -xs[right - 1] / testfn.dx
                line = (1 - w) * z[right - 1, :] + w * z[right, :]
        rhs = C * np.sum(m_src * line) * testfn.dt
    elif lam > 0.0:
        neg = xs <= 0.0
        if np.count_nonzero(neg) < 2:
            rhs = 0.0
        else:
            block = z[neg, :]
            kernel_vals = np.empty(ts_grid.size, dtype=complex)
            for j in range(ts_grid.size):
                kernel_vals[j] = _integrate(block[:, j], testfn.dx, lam)[-1]
            rhs = C * np.sum(m_src * kernel_vals) * testfn.dt
    else:
        rhs = 0.0       # support check above guarantees the source is absent
    return complex(lhs - rhs)


#: admissible lambda window per estimate branch, as (lower, upper) callables
_WINDOWS = {
    "SpaceTraces": lambda s: (s - 1.5, min(s + 0.5, 0.5)),
    "TimeTraces": lambda s: (-1.0, 1.0),
    "Bourgain": lambda s: (s - 0.5, min(s + 0.5, 0.5)),
}


def boundary_estimate_ratio(spec: ForcingSpec, s: float, which: str,
                            b: float | None = None, nx: int = 128,
                            nt: int = 64, x_half: float = 12.0) -> float:
    """Left-side discrete norm of one trace estimate over ||f||_{H^{(2s+1)/4}}."""
    if which not in _WINDOWS:
        raise WindowViolation(f"unknown branch {which!r}")
    lo, hi = _WINDOWS[which](s)
    if not (lo < spec.lam < hi):
        raise WindowViolation(
            f"{which} needs lambda in ({lo:.3g}, {hi:.3g}), got {spec.lam}")
    if which == "Bourgain":
        if b is None or not b < 0.5:
            raise WindowViolation("Bourgain branch needs b < 1/2")
    f = spec.f
    if f.sup() == 0.0:
        return 0.0
    pad = np.concatenate([f.samples, np.zeros(f.n)])
    den = sobolev_norm_1d(pad, f.dt, (2.0 * s + 1.0) / 4.0)

    dx = 2.0 * x_half / nx
    xs = -x_half + dx * np.arange(nx)
    dt = f.t_end / nt
    ts = dt * np.arange(nt)
    field = forcing_field(spec, xs, ts)
    if which == "SpaceTraces":
        half = field.copy()
        half[xs < 0.0, :] = 0.0
        norms = [sobolev_norm_1d(half[:, j], dx, s) for j in range(nt)]
        return float(np.max(norms)) / den
    if which == "TimeTraces":
        loc = field * cutoff(ts)[None, :]
        r = (2.0 * s + 1.0) / 4.0
        norms = [sobolev_norm_1d(loc[i, :], dt, r) for i in range(nx)]
        return float(np.max(norms)) / den
    loc = field * cutoff(ts)[None, :]
    u = SpaceTimeField(xs[0], dx, 0.0, dt, loc)
    return bourgain_norm(u, BourgainParams(s, b, spec.a)) / den
