"""Elementary operators on signals and phase-space fields.

Translations are restricted to lattice multiples so that every identity
between them holds to roundoff; modulations accept any real frequency.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonLatticeShift, UnsupportedDilation
from .grid import Grid, PhaseField, Signal, _upsample

LATTICE_TOL = 1e-9


def lattice_steps(a: float, step: float) -> int:
    """Return ``a / step`` as an integer or raise :class:`NonLatticeShift`."""
    r = a / step
    k = round(r)
    if abs(r - k) > LATTICE_TOL:
        raise NonLatticeShift(f"{a!r} is not a multiple of {step!r}")
    return int(k)


@dataclass(frozen=True)
class Shift2D:
    """A lattice-aligned phase-space displacement.

    ``u`` is a position offset (multiple of ``dx``) and ``eta`` a frequency
    offset (multiple of ``dw``).  For :func:`mod2` the roles are the
    frequencies of the plane wave ``exp(2 pi i (x eta + w u))``.
    """

    u: float = 0.0
    eta: float = 0.0

    def steps(self, grid: Grid) -> tuple[int, int]:
        return lattice_steps(self.u, grid.dx), lattice_steps(self.eta, grid.dw)


def translate(s: Signal, a: float) -> Signal:
    k = lattice_steps(a, s.grid.dx)
    return s.like(np.roll(s.values, k))


def modulate(s: Signal, b: float) -> Signal:
    return s.like(np.exp(2j * np.pi * b * s.grid.x) * s.values)


def reflect_index(n: int) -> np.ndarray:
    return (-np.arange(n)) % n


def reflect(s: Signal) -> Signal:
    return s.like(s.values[reflect_index(s.grid.n)])


def conjugate(s: Signal) -> Signal:
    return s.like(np.conj(s.values))


def involution_dagger(s: Signal) -> Signal:
    return conjugate(reflect(s))


def dilate(s: Signal, t: float) -> Signal:
    """Unitary dyadic dilation ``t**-0.5 * s(x / t)`` for ``t`` in {2, 1/2}.

    ``t = 2`` reads the trigonometric interpolant on the half-spacing grid,
    so it is exact when ``s`` is band-limited and supported in the middle
    half of the period.  ``t = 1/2`` subsamples; points whose argument ``2x``
    leaves the period are set to zero rather than wrapped.
    """
    n = s.grid.n
    if t == 2:
        fine = _upsample(s.values)
        return s.like(fine[n // 2: n // 2 + n] / np.sqrt(2.0))
    if t == 0.5:
        idx = 2 * np.arange(n) - n // 2
        inside = (idx >= 0) & (idx < n)
        out = np.zeros(n, dtype=complex)
        out[inside] = np.sqrt(2.0) * s.values[idx[inside]]
        return s.like(out)
    raise UnsupportedDilation(f"dilation factor must be 2 or 1/2, got {t!r}")


def shift2(F: PhaseField, sh: Shift2D) -> PhaseField:
    """``F(x - u, w - eta)`` with periodic wrap."""
    ku, ke = sh.steps(F.grid)
    return F.like(np.roll(F.values, (ku, ke), axis=(0, 1)))


def mod2(F: PhaseField, sh: Shift2D) -> PhaseField:
    """Multiply by ``exp(2 pi i (x eta + w u))``."""
    sh.steps(F.grid)
    g = F.grid
    phase = np.exp(2j * np.pi * (g.x[:, None] * sh.eta + g.w[None, :] * sh.u))
    return F.like(phase * F.values)


def z_xi(F: PhaseField, xi: float) -> PhaseField:
    """``F(x, xi - w)``, periodic in the frequency index."""
    n = F.grid.n
    r = lattice_steps(xi, F.grid.dw)
    idx = (r - np.arange(n)) % n
    return F.like(F.values[:, idx])


def star(F: PhaseField) -> PhaseField:
    """Involution ``conj(F(x, -w))``."""
    return F.like(np.conj(F.values[:, reflect_index(F.grid.n)]))


def chirp_factor(grid: Grid, c: float) -> np.ndarray:
    return np.exp(1j * np.pi * c * grid.x[:, None] * grid.w[None, :])


def chirp(F: PhaseField, c: float) -> PhaseField:
    return F.like(chirp_factor(F.grid, c) * F.values)
