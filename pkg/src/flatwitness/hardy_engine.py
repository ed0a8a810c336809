"""Boundary-grid Hardy space core.

Functions on the circle are sampled at the midpoint grid
theta_j = 2*pi*(j + 1/2)/N (wrapped to (-pi, pi]), N a power of two.  The
midpoint placement means the angle zero, where the weight construction
accumulates, is never itself a sample.  Fourier data uses the unitary-mean
convention: coefficient m is (1/N) sum_j samples_j exp(-i m theta_j) for
m in [-N/2, N/2), so the squared 2-norm is both the mean squared sample
and the summed squared spectrum.

The outer synthesis folds the spectrum of the prescribed log-modulus with
the analytic-signal multiplier (1 at the zero and Nyquist bins, 2 on
positive bins, 0 on negative bins).  That multiplier makes the real part of
the synthesized completion reproduce the log-modulus at every grid sample
exactly, so the boundary modulus of the result matches the prescription to
rounding error; the completion is kept as an explicit polynomial in z for
evaluation anywhere in the closed disk.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import (
    DegenerateTail,
    GridTooCoarse,
    InvalidInput,
    InvalidWeight,
    NotInner,
    ScaleOverflow,
)
from .seq_core import TailProfile, profile_from_energies

__all__ = [
    "GridFunction",
    "ArcLayout",
    "CircleWeight",
    "OuterFunction",
    "LogIntegralReport",
    "HardyFactorization",
    "RadialDecayReport",
    "InnerCheckReport",
    "ProjectionResult",
    "grid_thetas",
    "grid_function",
    "constant_function",
    "coordinate_function",
    "from_taylor",
    "analytic_project",
    "neg_mode_leakage",
    "arc_layout",
    "arc_energies",
    "build_circle_weight",
    "check_log_integrable",
    "outer_from_modulus",
    "hardy_factor",
    "radial_decay_check",
    "inner_check",
    "project_onto_bH2",
]

EXP_OVERFLOW_LIMIT = 700.0  # exp argument beyond which float64 overflows
DEFAULT_CLAMP = 1e-12
DEFAULT_R_FLOOR = 1e-280


def _signed_modes(n: int) -> np.ndarray:
    m = np.arange(n)
    m[n // 2:] -= n
    return m


def grid_thetas(n: int) -> np.ndarray:
    """Midpoint sample angles in (-pi, pi]."""
    th = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    return np.where(th > np.pi, th - 2.0 * np.pi, th)


class GridFunction:
    """Complex boundary samples on the midpoint circle grid."""

    __slots__ = ("samples", "_spectrum")

    def __init__(self, samples):
        arr = np.asarray(samples, dtype=complex)
        n = arr.size
        if arr.ndim != 1 or n < 4 or n & (n - 1):
            raise InvalidInput("samples must be a 1-d array whose length is a power of two >= 4")
        if not np.all(np.isfinite(arr)):
            raise InvalidInput("samples must be finite")
        self.samples = arr
        self._spectrum = None

    @property
    def n(self) -> int:
        return self.samples.size

    def thetas(self) -> np.ndarray:
        return grid_thetas(self.n)

    def spectrum(self) -> np.ndarray:
        """Fourier coefficients in bin order: modes 0..N/2-1 then -N/2..-1."""
        if self._spectrum is None:
            n = self.n
            raw = np.fft.fft(self.samples) / n
            self._spectrum = raw * np.exp(-1j * np.pi * _signed_modes(n) / n)
            self._spectrum.flags.writeable = False
        return self._spectrum

    @classmethod
    def from_spectrum(cls, coefficients) -> "GridFunction":
        coefficients = np.asarray(coefficients, dtype=complex)
        n = coefficients.size
        tw = np.exp(1j * np.pi * _signed_modes(n) / n)
        return cls(np.fft.ifft(coefficients * tw * n))

    def coeff(self, m: int) -> complex:
        if not -self.n // 2 <= m < self.n // 2:
            raise InvalidInput(f"mode {m} outside [-N/2, N/2)")
        return complex(self.spectrum()[m % self.n])

    def taylor(self) -> np.ndarray:
        """Nonnegative-mode coefficients, the power-series view of the function."""
        return self.spectrum()[: self.n // 2].copy()

    @property
    def norm_sq(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq))


def grid_function(samples) -> GridFunction:
    return GridFunction(samples)


def constant_function(n: int, value=1.0) -> GridFunction:
    return GridFunction(np.full(n, value, dtype=complex))


def coordinate_function(n: int) -> GridFunction:
    return GridFunction(np.exp(1j * grid_thetas(n)))


def from_taylor(coeffs, n: int) -> GridFunction:
    """Sample a power series (coefficient list) on the n-point grid."""
    c = np.asarray(coeffs, dtype=complex)
    if c.size > n // 2:
        raise InvalidInput("power series longer than the analytic bandwidth of the grid")
    coefficients = np.zeros(n, dtype=complex)
    coefficients[: c.size] = c
    return GridFunction.from_spectrum(coefficients)


def analytic_project(h: GridFunction) -> GridFunction:
    """Zero the negative-mode bins; the orthogonal projection onto the analytic part."""
    coefficients = h.spectrum().copy()
    coefficients[h.n // 2:] = 0.0
    return GridFunction.from_spectrum(coefficients)


def neg_mode_leakage(h: GridFunction) -> float:
    """2-norm fraction of the spectrum sitting in negative-mode bins."""
    coefficients = h.spectrum()
    total = np.linalg.norm(coefficients)
    if total == 0.0:
        return 0.0
    return float(np.linalg.norm(coefficients[h.n // 2:]) / total)


# ---------------------------------------------------------------------------
# arc shells


@dataclass(frozen=True)
class ArcLayout:
    """Partition of the grid: outer region, arc shells 1..M, residual core.

    ``region[j]`` is 0 for |theta| >= 1, n for the shell
    1/(n+1) <= |theta| < 1/n, and M+1 for the core |theta| < 1/(M+1).
    """

    n_samples: int
    max_shell: int
    region: np.ndarray

    def counts(self) -> np.ndarray:
        return np.bincount(self.region, minlength=self.max_shell + 2)

    def shell_indices(self, n: int) -> np.ndarray:
        return np.nonzero(self.region == n)[0]


def arc_layout(n_samples: int, max_shell: int) -> ArcLayout:
    if max_shell < 1:
        raise InvalidInput("need at least one shell")
    ath = np.abs(grid_thetas(n_samples))
    region = np.zeros(n_samples, dtype=int)
    inner = ath < 1.0
    # midpoint angles are irrational multiples of pi, so no sample sits on a
    # shell boundary and none sits at angle zero
    region[inner] = np.minimum(np.floor(1.0 / ath[inner]).astype(int), max_shell + 1)
    return ArcLayout(n_samples, max_shell, region)


def arc_energies(f: GridFunction, layout, allow_empty_shells: bool = False) -> TailProfile:
    """Per-shell mean-square mass of the boundary samples, core mass as tail.

    Shells narrower than the sample spacing may contain no samples at all;
    by default that raises GridTooCoarse, since the shell masses are then
    unreliable as quadrature.  ``allow_empty_shells=True`` accepts them with
    zero mass, which is what the factorization pipeline wants: an empty
    shell contributes nothing to either side of its bounds.
    """
    if isinstance(layout, int):
        layout = arc_layout(f.n, layout)
    if layout.n_samples != f.n:
        raise InvalidInput("layout and function grid sizes differ")
    counts = layout.counts()
    if not allow_empty_shells:
        empty = np.nonzero(counts[1: layout.max_shell + 1] == 0)[0]
        if empty.size:
            raise GridTooCoarse(int(empty[0]) + 1)
    energy = np.abs(f.samples) ** 2 / f.n
    sums = np.bincount(layout.region, weights=energy, minlength=layout.max_shell + 2)
    return profile_from_energies(sums[1: layout.max_shell + 1], float(sums[layout.max_shell + 1]))


@dataclass(frozen=True)
class CircleWeight:
    grid: GridFunction          # real-valued weight, >= 1 everywhere
    region_values: np.ndarray   # value on outer, shells 1..M, core
    floored: int                # suffix sums clamped before rooting


def build_circle_weight(profile: TailProfile, layout: ArcLayout,
                        r_floor: Optional[float] = DEFAULT_R_FLOOR) -> CircleWeight:
    """Weight 1 on |theta| >= 1/2, min(r_{n-1}^(-1/4), n) on shell n >= 2.

    The core gets the same formula continued one step past the last shell.
    Requires every used suffix sum at most 1, which holds for profiles of
    functions with 2-norm at most 1.  A zero suffix sum raises
    DegenerateTail unless ``r_floor`` is set, in which case it is floored
    and counted (the cap min(..., n) then takes over).
    """
    M = layout.max_shell
    if profile.n_terms != M:
        raise InvalidInput("profile length does not match the layout's shell count")
    r_used = profile.suffix_sums[1: M + 1].copy()  # r_1 .. r_M
    zero_mask = r_used == 0.0
    if np.any(zero_mask) and r_floor is None:
        raise DegenerateTail(f"suffix sum r_{1 + int(np.argmax(zero_mask))} is zero")
    floored = int(np.sum(r_used < (r_floor or 0.0)))
    if r_floor is not None:
        r_used = np.maximum(r_used, r_floor)
    # allow rounding-level excess over 1 from a unit-norm input; the weight
    # then dips below 1 by well under the validator's 1e-12 slack
    if np.any(r_used > 1.0 + 1e-12):
        raise InvalidWeight("suffix sums exceed 1; normalize the input to unit 2-norm")
    region_values = np.ones(M + 2)
    shells = np.arange(2, M + 1, dtype=float)
    region_values[2: M + 1] = np.minimum(r_used[: M - 1] ** -0.25, shells)
    region_values[M + 1] = min(r_used[M - 1] ** -0.25, float(M + 1))
    w = region_values[layout.region]
    return CircleWeight(GridFunction(w.astype(complex)), region_values, floored)


@dataclass(frozen=True)
class LogIntegralReport:
    integral_value: float     # mean of |log(1/w)| over the circle
    comparison_bound: float   # 2 sum log(n)/n^2 over the shells, plus the core part


def check_log_integrable(w: GridFunction, layout: ArcLayout) -> LogIntegralReport:
    """Mean absolute log of the reciprocal weight, with its summable majorant.

    The bound is meaningful for weights produced by ``build_circle_weight``;
    for arbitrary w >= 1 only ``integral_value`` is.
    """
    vals = w.samples
    if np.max(np.abs(vals.imag)) > 1e-12 * (1.0 + np.max(np.abs(vals.real))):
        raise InvalidWeight("weight must be real")
    re = vals.real
    if np.min(re) < 1.0 - 1e-12:
        raise InvalidWeight("weight must be >= 1 everywhere")
    logs = np.log(np.maximum(re, 1.0))
    integral = float(np.mean(logs))
    shells = np.arange(2, layout.max_shell + 1, dtype=float)
    core = layout.region == layout.max_shell + 1
    bound = 2.0 * float(np.sum(np.log(shells) / shells**2)) + float(np.sum(logs[core]) / w.n)
    return LogIntegralReport(integral, bound)


# ---------------------------------------------------------------------------
# outer synthesis


@dataclass(frozen=True)
class OuterFunction:
    """Zero-free analytic function with prescribed boundary modulus.

    ``boundary`` holds the grid samples; ``log_coeffs`` are the power-series
    coefficients (degree N/2) of the analytic completion A, so the function
    itself is exp(A(z)) anywhere in the closed disk.  ``taylor`` is the
    nonnegative part of the boundary spectrum.
    """

    boundary: GridFunction
    log_coeffs: np.ndarray
    taylor: np.ndarray
    clamp_count: int

    def __call__(self, z):
        return np.exp(np.polyval(self.log_coeffs[::-1], z))


def _bins_to_polynomial(c_bins: np.ndarray, n: int) -> np.ndarray:
    """Rewrite analytic-half bin coefficients as power-series coefficients.

    On the midpoint grid, bin m carries exp(2i pi m j / n) = z_j^m * e^{-i pi m/n}
    for m < n/2, and the Nyquist bin carries (-1)^j = -i * z_j^{n/2}.
    """
    p = np.empty(n // 2 + 1, dtype=complex)
    m = np.arange(n // 2)
    p[: n // 2] = c_bins[: n // 2] * np.exp(-1j * np.pi * m / n)
    p[n // 2] = -1j * c_bins[n // 2]
    return p


def outer_from_modulus(log_modulus, clamp: float = DEFAULT_CLAMP) -> OuterFunction:
    """Synthesize the outer function whose boundary modulus is exp(log_modulus).

    Accepts a GridFunction or a plain sample array; -inf entries (zeros of
    the prescribed modulus) are legal.  Samples below log(clamp) are lifted
    to log(clamp) and counted.  The boundary modulus of the result
    reproduces the (clamped) prescription at every sample to rounding error.
    """
    if isinstance(log_modulus, GridFunction):
        vals = log_modulus.samples
    else:
        vals = np.asarray(log_modulus, dtype=complex)
        n_ = vals.size
        if vals.ndim != 1 or n_ < 4 or n_ & (n_ - 1):
            raise InvalidInput("log-modulus must have power-of-two length >= 4")
    finite = vals.real[np.isfinite(vals.real)]
    scale = 1.0 + (float(np.max(np.abs(finite))) if finite.size else 0.0)
    imag = vals.imag[np.isfinite(vals.imag)]
    if imag.size != vals.size or (imag.size and np.max(np.abs(imag)) > 1e-12 * scale):
        raise InvalidInput("log-modulus must be real")
    k = vals.real.copy()
    if np.any(np.isposinf(k)) or np.any(np.isnan(k)):
        raise InvalidInput("log-modulus must be bounded above and not NaN")
    floor = np.log(clamp)
    clamp_count = int(np.sum(k < floor))
    k = np.maximum(k, floor)
    peak = float(np.max(k))
    if peak > EXP_OVERFLOW_LIMIT:
        raise ScaleOverflow(float(np.exp(EXP_OVERFLOW_LIMIT - peak)))

    n = k.size
    raw = np.fft.fft(k) / n
    fold = np.zeros(n)
    fold[0] = 1.0
    fold[1: n // 2] = 2.0
    fold[n // 2] = 1.0
    c_bins = raw * fold
    completion = np.fft.ifft(c_bins * n)
    boundary = GridFunction(np.exp(completion))
    return OuterFunction(
        boundary=boundary,
        log_coeffs=_bins_to_polynomial(c_bins, n),
        taylor=boundary.taylor(),
        clamp_count=clamp_count,
    )


# ---------------------------------------------------------------------------
# the factorization pipeline


@dataclass(frozen=True)
class HardyFactorization:
    """f = g * h on the boundary grid, g outer with modulus 1/w.

    ``scale`` is the factor the input was divided by to reach unit norm;
    the factorization is of the normalized input.  ``star_rhs`` is the
    norm majorant head + weighted tail series + core term, and
    ``gw_deviation`` is max | |g| w - 1 | over the grid.
    """

    f: GridFunction
    g: GridFunction
    h: GridFunction
    w: CircleWeight
    outer: OuterFunction
    profile: TailProfile
    layout: ArcLayout
    scale: float
    gw_deviation: float
    h_norm_sq: float
    star_rhs: float
    h_leakage: float
    log_report: LogIntegralReport

    def evaluators(self) -> Tuple[Callable, Callable, Callable]:
        """Analytic evaluators (f, g, h) agreeing with the boundary data.

        h is evaluated as f/g, its analytic continuation, so the product
        identity g*h = f holds pointwise wherever they are evaluated.
        """
        f_taylor = self.f.taylor()

        def f_eval(z):
            return np.polyval(f_taylor[::-1], z)

        def g_eval(z):
            return self.outer(z)

        def h_eval(z):
            return f_eval(z) / g_eval(z)

        return f_eval, g_eval, h_eval

    def radial_profile(self, depths: int = 12) -> "RadialDecayReport":
        return radial_decay_check(self.outer.log_coeffs, depths,
                                  log_domain=True, grid_size=self.f.n)


def _weighted_tail_series(profile: TailProfile, r_floor: float) -> float:
    # sum over shells n >= 2 of a_n^2 / sqrt(r_{n-1}), skipping massless shells
    a2 = profile.magnitudes_sq[1:]
    r_prev = np.maximum(profile.suffix_sums[1:-1], r_floor)
    return float(np.sum(np.where(a2 > 0, a2 / np.sqrt(r_prev), 0.0)))


def hardy_factor(f: GridFunction, max_shell: int,
                 r_floor: float = DEFAULT_R_FLOOR,
                 analytic_tol: float = 1e-10) -> HardyFactorization:
    """Factor an analytic boundary function against the arc-shell weight.

    Pipeline: arc masses -> weight -> log-integrability report -> outer
    function with modulus 1/w -> h = f/g on the grid.  The input must be
    analytic to ``analytic_tol`` (negative-mode fraction) and not the zero
    function; it is divided by its norm when that norm exceeds 1.
    """
    if f.norm == 0.0:
        raise InvalidInput("cannot factor the zero function")
    leak = neg_mode_leakage(f)
    if leak > analytic_tol:
        raise InvalidInput(f"input is not analytic: negative-mode fraction {leak:.2e}")
    scale = max(1.0, f.norm)
    fn = GridFunction(f.samples / scale) if scale > 1.0 else f

    layout = arc_layout(fn.n, max_shell)
    profile = arc_energies(fn, layout, allow_empty_shells=True)
    weight = build_circle_weight(profile, layout, r_floor)
    log_report = check_log_integrable(weight.grid, layout)
    outer = outer_from_modulus(-np.log(weight.grid.samples.real))
    g = outer.boundary
    h = GridFunction(fn.samples / g.samples)

    w_samps = weight.grid.samples.real
    gw_dev = float(np.max(np.abs(np.abs(g.samples) * w_samps - 1.0)))
    core_term = float(profile.tail / np.sqrt(max(profile.suffix_sums[-1], r_floor))) \
        if profile.tail > 0 else 0.0
    star_rhs = fn.norm_sq + _weighted_tail_series(profile, r_floor) + core_term
    return HardyFactorization(
        f=fn, g=g, h=h, w=weight, outer=outer, profile=profile, layout=layout,
        scale=scale, gw_deviation=gw_dev, h_norm_sq=h.norm_sq, star_rhs=star_rhs,
        h_leakage=neg_mode_leakage(h), log_report=log_report,
    )


# ---------------------------------------------------------------------------
# diagnostics on analytic representations


@dataclass(frozen=True)
class RadialDecayReport:
    radii: np.ndarray
    values: np.ndarray
    ratio: float  # last value over first
    truncation_warning: bool


def radial_decay_check(coeffs, depths: int = 12, log_domain: bool = False,
                       grid_size: Optional[int] = None) -> RadialDecayReport:
    """Evaluate |g| at the radii 1 - 2^-j, j = 1..depths, along the positive axis.

    ``coeffs`` is a power series for g itself, or for log g when
    ``log_domain`` is set (the exact form the outer synthesis produces).
    The warning flags depths finer than the spectral resolution of the
    originating grid.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise InvalidInput("need a nonempty coefficient array")
    if depths < 1:
        raise InvalidInput("need at least one depth")
    j = np.arange(1, depths + 1, dtype=float)
    radii = 1.0 - 2.0**-j
    vals = np.polyval(c[::-1], radii)
    values = np.abs(np.exp(vals)) if log_domain else np.abs(vals)
    ratio = float(values[-1] / values[0]) if values[0] != 0.0 else float("inf")
    warn = grid_size is not None and 2.0**-depths < 1.0 / grid_size
    return RadialDecayReport(radii, values, ratio, bool(warn))


@dataclass(frozen=True)
class InnerCheckReport:
    boundary_dev: float   # max | |b| - 1 | on the grid
    interior_max: float   # max |b| over a coarse polar sample grid
    interior_ok: bool


def inner_check(b: GridFunction, tol: float = 1e-8,
                analytic_tol: float = 1e-8) -> InnerCheckReport:
    """Unimodular boundary values plus a coarse interior maximum check."""
    if neg_mode_leakage(b) > analytic_tol:
        raise InvalidInput("candidate is not analytic to tolerance")
    dev = float(np.max(np.abs(np.abs(b.samples) - 1.0)))
    taylor = b.taylor()
    radii = np.linspace(0.15, 0.9, 6)
    angles = np.exp(1j * 2.0 * np.pi * np.arange(64) / 64)
    pts = (radii[:, None] * angles[None, :]).ravel()
    interior_max = float(np.max(np.abs(np.polyval(taylor[::-1], pts))))
    return InnerCheckReport(dev, interior_max, bool(interior_max <= 1.0 + tol))


@dataclass(frozen=True)
class ProjectionResult:
    projection: GridFunction
    distance: float


def project_onto_bH2(f: GridFunction, b: GridFunction,
                     inner_tol: float = 1e-8) -> ProjectionResult:
    """Orthogonal projection of f onto the shifted analytic subspace b * H2.

    For unimodular-boundary b this is b P+(conj(b) f).  The distance from
    the constant function 1 is positive for every nonconstant inner b,
    which exhibits the subspace as proper.
    """
    if f.n != b.n:
        raise InvalidInput("f and b must share a grid")
    chk = inner_check(b, tol=inner_tol)
    if chk.boundary_dev > inner_tol or not chk.interior_ok:
        raise NotInner(
            f"boundary deviation {chk.boundary_dev:.2e}, interior max {chk.interior_max:.6f}"
        )
    inner_part = analytic_project(GridFunction(np.conj(b.samples) * f.samples))
    proj = GridFunction(b.samples * inner_part.samples)
    distance = float(np.sqrt(np.mean(np.abs(f.samples - proj.samples) ** 2)))
    return ProjectionResult(proj, distance)
