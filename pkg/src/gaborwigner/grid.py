"""Periodic sampling grids and the containers built on them.

Everything lives on a centered lattice ``x_j = (j - n/2) dx`` with the dual
frequency lattice ``w_k = (k - n/2) dw``, ``dw = 1/(n dx)``.  Integrals over
the line are replaced by rectangle sums over one period, so every
convolution in the package is circular.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatch


def _frozen(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    """Centered periodic grid of ``n`` samples with spacing ``dx``."""

    n: int
    dx: float

    def __post_init__(self):
        n = self.n
        if isinstance(n, (bool, np.bool_)) or int(n) != n:
            raise ValueError(f"n must be an integer, got {n!r}")
        n = int(n)
        if n < 8 or n % 2:
            raise ValueError(f"n must be even and >= 8, got {n}")
        dx = float(self.dx)
        if not (np.isfinite(dx) and dx > 0):
            raise ValueError(f"dx must be positive, got {self.dx!r}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "dx", dx)

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def dw(self) -> float:
        return 1.0 / (self.n * self.dx)

    @cached_property
    def x(self) -> np.ndarray:
        return _frozen((np.arange(self.n) - self.n // 2) * self.dx)

    @cached_property
    def w(self) -> np.ndarray:
        return _frozen((np.arange(self.n) - self.n // 2) * self.dw)

    def dual(self) -> "Grid":
        """The frequency lattice reinterpreted as a position grid."""
        return Grid(self.n, self.dw)

    def fine(self) -> "Grid":
        """The nested grid with ``2n`` samples and spacing ``dx/2``."""
        return Grid(2 * self.n, self.dx / 2)

    def matches(self, other: "Grid", rtol: float = 1e-12) -> bool:
        return self.n == other.n and abs(self.dx - other.dx) <= rtol * self.dx

    def require(self, *others: "Grid") -> None:
        for o in others:
            if not self.matches(o):
                raise GridMismatch(f"grid mismatch: {self} vs {o}")


def _as_values(values, shape):
    a = np.array(values, dtype=complex)
    if a.shape != shape:
        raise ValueError(f"expected shape {shape}, got {a.shape}")
    return _frozen(a)


class _Sampled:
    # shared arithmetic for Signal and PhaseField

    def like(self, values):
        return type(self)(self.grid, values)

    def _other(self, other):
        if isinstance(other, type(self)):
            self.grid.require(other.grid)
            return other.values
        if np.isscalar(other):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self.like(self.values + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self.like(self.values - v)

    def __rsub__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self.like(v - self.values)

    def __mul__(self, other):
        v = self._other(other)
        return NotImplemented if v is NotImplemented else self.like(self.values * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not np.isscalar(other):
            return NotImplemented
        return self.like(self.values / other)

    def __neg__(self):
        return self.like(-self.values)

    def conj(self):
        return self.like(np.conj(self.values))


@dataclass(frozen=True, eq=False)
class Signal(_Sampled):
    """Complex samples of a function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values, (self.grid.n,)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "Signal":
        return cls(grid, fn(grid.x))

    @classmethod
    def zeros(cls, grid: Grid) -> "Signal":
        return cls(grid, np.zeros(grid.n))


@dataclass(frozen=True, eq=False)
class PhaseField(_Sampled):
    """Complex samples ``F[m, k] = F(x_m, w_k)`` on the tensor grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        n = self.grid.n
        object.__setattr__(self, "values", _as_values(self.values, (n, n)))

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "PhaseField":
        X, W = np.meshgrid(grid.x, grid.w, indexing="ij")
        return cls(grid, fn(X, W))

    @classmethod
    def zeros(cls, grid: Grid) -> "PhaseField":
        return cls(grid, np.zeros((grid.n, grid.n)))

    @classmethod
    def delta(cls, grid: Grid, m: int, k: int) -> "PhaseField":
        """Unit spike at ``(x_m, w_k)``; note it has no ``1/(dx dw)`` scaling."""
        v = np.zeros((grid.n, grid.n), dtype=complex)
        v[m, k] = 1.0
        return cls(grid, v)


def quad_sum(s: Signal) -> complex:
    return complex(s.grid.dx * s.values.sum())


def quad_sum2(F: PhaseField) -> complex:
    return complex(F.grid.dx * F.grid.dw * F.values.sum())


def l2_norm(s: Signal) -> float:
    return float(np.sqrt(s.grid.dx * np.sum(np.abs(s.values) ** 2)))


def l2_norm2(F: PhaseField) -> float:
    return float(np.sqrt(F.grid.dx * F.grid.dw * np.sum(np.abs(F.values) ** 2)))


def inner(a: Signal, b: Signal) -> complex:
    """``<a, b> = integral of a * conj(b)``."""
    a.grid.require(b.grid)
    return complex(a.grid.dx * np.vdot(b.values, a.values))


def inner2(F: PhaseField, H: PhaseField) -> complex:
    F.grid.require(H.grid)
    return complex(F.grid.dx * F.grid.dw * np.vdot(H.values, F.values))


def edge_ratio(s: Signal) -> float:
    """Largest magnitude in the outer two samples at each end, relative to the peak."""
    a = np.abs(s.values)
    peak = a.max()
    if peak == 0:
        return 0.0
    return float(max(a[:2].max(), a[-2:].max()) / peak)


def _upsample(v: np.ndarray, axis: int = -1) -> np.ndarray:
    # Zero-pad the spectrum of centered data to twice the length; the
    # Nyquist coefficient is split evenly between +/- n/2.
    n = v.shape[axis]
    h = n // 2
    c = np.fft.fft(np.fft.ifftshift(v, axes=axis), axis=axis)
    c = np.moveaxis(c, axis, -1)
    C = np.zeros(c.shape[:-1] + (2 * n,), dtype=complex)
    C[..., :h] = c[..., :h]
    C[..., n + h + 1:] = c[..., h + 1:]
    C[..., h] = c[..., h] / 2
    C[..., n + h] = c[..., h] / 2
    out = 2 * np.fft.fftshift(np.fft.ifft(C, axis=-1), axes=-1)
    return np.moveaxis(out, -1, axis)


def oversample2(s: Signal) -> Signal:
    """Trigonometric interpolation onto ``s.grid.fine()``.

    Original node ``j`` becomes fine node ``2j``.
    """
    return Signal(s.grid.fine(), _upsample(s.values))


def decimate2(s: Signal) -> Signal:
    """Keep every other sample; the inverse of :func:`oversample2`."""
    n = s.grid.n
    if n % 4:
        raise ValueError("decimation needs n divisible by 4")
    return Signal(Grid(n // 2, 2 * s.grid.dx), s.values[::2])
