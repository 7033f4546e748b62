"""Periodic-box discretization and Fourier-multiplier operators.

All fields live on a uniform periodic grid and are represented as plain
numpy arrays of shape ``grid.shape`` (complex128 for wave functions,
float64 for potentials).  The transform pair is normalized so that a
constant field A has spectral coefficient A at k = 0: coefficients are
the discrete Fourier-series coefficients c_k with f = sum_k c_k e^{ikx}.

Quadrature is the trapezoid rule on the periodic grid (uniform weights),
which is spectrally accurate for smooth periodic data.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as _fft


def _fft_workers() -> int:
    """Worker count for FFTs: hardware count, capped by SHNLS_THREADS."""
    count = os.cpu_count() or 1
    env = os.environ.get("SHNLS_THREADS")
    if env:
        try:
            count = min(count, max(1, int(env)))
        except ValueError:
            pass
    return count


_WORKERS = _fft_workers()


class NonFiniteFieldError(ValueError):
    """A field contains NaN or Inf samples."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic box in 1, 2 or 3 dimensions.

    Attributes:
        n: samples per axis, each a power of two >= 8.
        box_length: physical extent L_d > 0 per axis.  Coordinates run
            over [0, L_d) and the box center is at L_d / 2.
    """

    n: tuple[int, ...]
    box_length: tuple[float, ...]
    _k2: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        n = tuple(int(m) for m in self.n)
        box = tuple(float(b) for b in self.box_length)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "box_length", box)
        if not 1 <= len(n) <= 3:
            raise ValueError(f"grid dimension must be 1, 2 or 3, got {len(n)}")
        if len(box) != len(n):
            raise ValueError("n and box_length must have the same length")
        for m in n:
            if m < 8 or m & (m - 1):
                raise ValueError(f"samples per axis must be a power of two >= 8, got {m}")
        for b in box:
            if not (b > 0):
                raise ValueError(f"box_length must be positive, got {b}")
        k2 = np.zeros(n)
        for d in range(len(n)):
            shape = [1] * len(n)
            shape[d] = n[d]
            k2 = k2 + self.wavenumbers(d).reshape(shape) ** 2
        object.__setattr__(self, "_k2", k2)

    @property
    def dim(self) -> int:
        return len(self.n)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.n

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(b / m for b, m in zip(self.box_length, self.n))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(self.box_length))

    @property
    def total_samples(self) -> int:
        return int(np.prod(self.n))

    @property
    def center(self) -> tuple[float, ...]:
        return tuple(b / 2 for b in self.box_length)

    @property
    def inscribed_radius(self) -> float:
        return min(self.box_length) / 2

    def axis_coordinates(self, d: int) -> np.ndarray:
        """Sample positions x_j = j * spacing along axis d, in [0, L_d)."""
        return np.arange(self.n[d]) * self.spacing[d]

    def meshgrid(self) -> tuple[np.ndarray, ...]:
        """Coordinate meshes in 'ij' indexing, one array per axis."""
        axes = [self.axis_coordinates(d) for d in range(self.dim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def radius_from_center(self) -> np.ndarray:
        """Euclidean distance of every sample from the box center."""
        r2 = np.zeros(self.shape)
        for x, c in zip(self.meshgrid(), self.center):
            r2 = r2 + (x - c) ** 2
        return np.sqrt(r2)

    def wavenumbers(self, d: int) -> np.ndarray:
        """k_j = 2*pi*m / L_d in the standard signed FFT ordering."""
        return 2 * np.pi * _fft.fftfreq(self.n[d], d=self.spacing[d])

    @property
    def k_squared(self) -> np.ndarray:
        """|k|^2 mesh over the full grid."""
        return self._k2

    def check_field(self, f: np.ndarray, name: str = "field") -> np.ndarray:
        """Validate shape and finiteness of a field; returns it unchanged."""
        f = np.asarray(f)
        if f.shape != self.shape:
            raise ValueError(f"{name} has shape {f.shape}, expected {self.shape}")
        if not np.isfinite(f).all():
            raise NonFiniteFieldError(f"{name} contains non-finite samples")
        return f


def to_spectral(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Forward transform to Fourier-series coefficients c_k."""
    f = grid.check_field(f)
    return _fft.fftn(f, workers=_WORKERS) / grid.total_samples


def from_spectral(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_spectral`: synthesize f = sum_k c_k e^{ikx}."""
    coeffs = grid.check_field(coeffs, "coefficients")
    return _fft.ifftn(coeffs * grid.total_samples, workers=_WORKERS)


def _apply_multiplier(grid: Grid, f: np.ndarray, mult: np.ndarray,
                      imag_tol: float | None) -> np.ndarray:
    """Apply a spectral multiplier; optionally strip checked imag residue.

    When imag_tol is not None and the input is a real array, the result is
    checked to be real within imag_tol (relative to the max magnitude) and
    the imaginary rounding residue is discarded.
    """
    was_real = imag_tol is not None and not np.iscomplexobj(f)
    out = _fft.ifftn(_fft.fftn(f, workers=_WORKERS) * mult, workers=_WORKERS)
    if was_real:
        scale = np.abs(out.real).max()
        resid = np.abs(out.imag).max()
        if resid > imag_tol * max(scale, 1e-300):
            raise ValueError(
                f"expected a real result, imaginary residue {resid:.3e} "
                f"exceeds {imag_tol:.1e} x {scale:.3e}")
        return out.real
    return out


def helmholtz_multiplier(grid: Grid, alpha: float) -> np.ndarray:
    """Multiplier table of (I - alpha^2 Lap)^{-1}: 1 / (1 + alpha^2 |k|^2)."""
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return 1.0 / (1.0 + alpha**2 * grid.k_squared)


def helmholtz_regularity_ratio(grid: Grid, alpha: float) -> np.ndarray:
    """Table (1 + |k|^2) / (1 + alpha^2 |k|^2), the H^2-over-L^2 gain.

    Bounded by max(1, alpha^{-2}) for every wavenumber, with the bound
    approached as |k| grows; the discrete counterpart of the elliptic
    regularity estimate for the Helmholtz inverse.
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    k2 = grid.k_squared
    return (1.0 + k2) / (1.0 + alpha**2 * k2)


def helmholtz_inverse(grid: Grid, f: np.ndarray, alpha: float) -> np.ndarray:
    """Solve u - alpha^2 Lap u = f on the periodic box.

    alpha = 0 is permitted and returns f unchanged.  A real input yields
    a real output (imaginary rounding residue checked against 1e-12 and
    discarded).
    """
    f = grid.check_field(f)
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return f
    return _apply_multiplier(grid, f, helmholtz_multiplier(grid, alpha), 1e-12)


def poisson_inverse_zero_mean(grid: Grid, f: np.ndarray, alpha: float) -> np.ndarray:
    """Solve -alpha^2 Lap psi = f in the mean-removed gauge.

    The k = 0 mode is projected out (psi_hat(0) = 0): on a periodic box
    the source generally has nonzero mean, and a constant shift of the
    potential only contributes a global phase to the evolved field.
    """
    f = grid.check_field(f)
    if alpha <= 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    k2 = grid.k_squared.copy()
    zero = (0,) * grid.dim
    k2[zero] = 1.0  # avoid 0/0; the mode is zeroed below
    mult = 1.0 / (alpha**2 * k2)
    mult[zero] = 0.0
    return _apply_multiplier(grid, f, mult, 1e-12)


def free_propagator(grid: Grid, f: np.ndarray, t: float) -> np.ndarray:
    """Exact free evolution by time t: multiplier e^{-i |k|^2 t}.

    Unimodular in every mode, hence exactly unitary in the discrete L^2
    norm; t may have either sign (negative t propagates backwards).
    """
    f = grid.check_field(f)
    if t == 0:
        return np.array(f, dtype=complex)
    phase = np.exp(-1j * grid.k_squared * t)
    return _apply_multiplier(grid, f, phase, None)


def gradient(grid: Grid, f: np.ndarray) -> tuple[np.ndarray, ...]:
    """Spectral gradient: one complex array per axis (i k_d multiplier)."""
    f = grid.check_field(f)
    fhat = _fft.fftn(f, workers=_WORKERS)
    out = []
    for d in range(grid.dim):
        shape = [1] * grid.dim
        shape[d] = grid.n[d]
        kd = grid.wavenumbers(d).reshape(shape)
        out.append(_fft.ifftn(1j * kd * fhat, workers=_WORKERS))
    return tuple(out)


def gradient_sq_integral(grid: Grid, f: np.ndarray) -> float:
    """Integral of |grad f|^2 over the box, summed in spectral space.

    By Parseval this equals dV/N * sum_k |k|^2 |fft(f)_k|^2; always >= 0.
    """
    f = grid.check_field(f)
    fhat = _fft.fftn(f, workers=_WORKERS)
    total = np.sum(grid.k_squared * (fhat.real**2 + fhat.imag**2))
    return float(total * grid.cell_volume / grid.total_samples)


def integrate(grid: Grid, f: np.ndarray):
    """Trapezoid quadrature on the periodic grid: dV * sum of samples."""
    return np.sum(f) * grid.cell_volume


def l2_norm_sq(grid: Grid, f: np.ndarray) -> float:
    """Discrete L^2 norm squared, integral of |f|^2."""
    f = np.asarray(f)
    return float(np.sum(f.real**2 + f.imag**2) * grid.cell_volume)


def l2_norm(grid: Grid, f: np.ndarray) -> float:
    return float(np.sqrt(l2_norm_sq(grid, f)))
