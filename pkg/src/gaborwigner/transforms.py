"""Fourier, short-time Fourier and Wigner-type transforms.

Fourier convention: ``f^(w) = integral f(x) exp(-2 pi i w x) dx``.  On a
grid this is ``dx * sum_j``; the result lives on ``grid.dual()``.

Each transform that has a cheap FFT form also has a ``direct=True`` branch
that evaluates the defining sum term by term.  The direct branches cost
O(n^3) and exist as test oracles.
"""
from __future__ import annotations

import warnings

import numpy as np

from .errors import NonHermitianResidue, OrthogonalWindows, ResolutionWarning, ZeroWindow
from .grid import Grid, PhaseField, Signal, _upsample, inner, l2_norm
from .ops import chirp, reflect

HERMITIAN_WARN = 1e-10
HERMITIAN_FAIL = 1e-6


def dft(v: np.ndarray, dx: float, axis: int = -1) -> np.ndarray:
    """Centered DFT with quadrature weight ``dx`` along ``axis``."""
    return dx * np.fft.fftshift(
        np.fft.fft(np.fft.ifftshift(v, axes=axis), axis=axis), axes=axis)


def idft(v: np.ndarray, dw: float, axis: int = -1) -> np.ndarray:
    n = v.shape[axis]
    return dw * n * np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(v, axes=axis), axis=axis), axes=axis)


def fourier(s: Signal) -> Signal:
    return Signal(s.grid.dual(), dft(s.values, s.grid.dx))


def inverse_fourier(s: Signal) -> Signal:
    return Signal(s.grid.dual(), idft(s.values, s.grid.dx))


def trig_eval(s: Signal, t) -> np.ndarray:
    """Evaluate the trigonometric interpolant of ``s`` at arbitrary points.

    Direct O(n len(t)) sum, used as an independent check of the FFT-based
    resampling.  The Nyquist term is taken as a cosine.
    """
    g = s.grid
    n = g.n
    q = np.arange(n) - n // 2
    c = np.exp(-2j * np.pi * np.outer(q, g.x) / g.length) @ s.values / n
    t = np.asarray(t, dtype=float)
    e = np.exp(2j * np.pi * np.multiply.outer(t, q[1:]) / g.length)
    return e @ c[1:] + c[0] * np.cos(np.pi * n * t / g.length)


def _check_window(g: Signal) -> None:
    if not np.any(g.values):
        raise ZeroWindow("window has zero norm")


def _window_index(n: int) -> np.ndarray:
    # W[m, j] = index of x_j - x_m
    j = np.arange(n)
    return (j[None, :] - j[:, None] + n // 2) % n


def stft(f: Signal, g: Signal, direct: bool = False) -> PhaseField:
    """``V_g f(x, w) = integral f(t) conj(g(t - x)) exp(-2 pi i w t) dt``."""
    f.grid.require(g.grid)
    _check_window(g)
    grid = f.grid
    M = f.values[None, :] * np.conj(g.values[_window_index(grid.n)])
    if direct:
        E = np.exp(-2j * np.pi * np.outer(grid.x, grid.w))
        return PhaseField(grid, grid.dx * M @ E)
    return PhaseField(grid, dft(M, grid.dx, axis=1))


def stft_adjoint(F: PhaseField, phi: Signal) -> Signal:
    """``V_phi^* F = integral F(x, w) M_w T_x phi dx dw``."""
    F.grid.require(phi.grid)
    grid = F.grid
    G = idft(F.values, grid.dw, axis=1)
    win = phi.values[_window_index(grid.n)]
    return Signal(grid, grid.dx * np.sum(G * win, axis=0))


def stft_invert(F: PhaseField, phi: Signal, g: Signal) -> Signal:
    """Reconstruct ``f`` from ``F = V_g f`` using synthesis window ``phi``."""
    c = inner(phi, g)
    if abs(c) <= 1e-9 * l2_norm(phi) * l2_norm(g):
        raise OrthogonalWindows("synthesis and analysis windows are orthogonal")
    return stft_adjoint(F, phi) / c


def _half_shift_pairs(f: Signal, g: Signal):
    # fine-grid values and the fine indices of x_m + y_j/2, x_m - y_j/2
    n = f.grid.n
    m = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    p = (2 * m + j - n // 2) % (2 * n)
    q = (2 * m - j + n // 2) % (2 * n)
    return p, q


def cross_wigner(f: Signal, g: Signal, direct: bool = False) -> PhaseField:
    """``W(f,g)(x,w) = integral f(x + y/2) conj(g(x - y/2)) exp(-2 pi i w y) dy``.

    Half-integer shifts are read from the factor-2 trigonometric
    interpolant.  The lag ``y`` runs over one period, ``y_j = (j - n/2) dx``.
    """
    f.grid.require(g.grid)
    grid = f.grid
    p, q = _half_shift_pairs(f, g)
    if direct:
        xf = grid.fine().x
        K = trig_eval(f, xf[p]) * np.conj(trig_eval(g, xf[q]))
        E = np.exp(-2j * np.pi * np.outer(grid.x, grid.w))
        return PhaseField(grid, grid.dx * K @ E)
    ff = _upsample(f.values)
    gf = ff if g is f else _upsample(g.values)
    K = ff[p] * np.conj(gf[q])
    return PhaseField(grid, dft(K, grid.dx, axis=1))


def wigner(f: Signal) -> PhaseField:
    """Real Wigner distribution ``W(f, f)``.

    Warns above ``1e-10`` and raises :class:`NonHermitianResidue` when the
    discarded imaginary part exceeds ``1e-6`` of the peak, which means ``f`` is not resolved by the
    grid (it reaches the edge of the period or of the band).
    """
    W = cross_wigner(f, f).values
    peak = np.max(np.abs(W.real))
    resid = np.max(np.abs(W.imag))
    if peak > 0 and resid > HERMITIAN_FAIL * peak:
        raise NonHermitianResidue(
            f"imaginary residue {resid / peak:.2e} of peak; grid too coarse")
    if peak > 0 and resid > HERMITIAN_WARN * peak:
        warnings.warn(f"Wigner imaginary residue {resid / peak:.1e} of peak", ResolutionWarning,
                      stacklevel=2)
    return PhaseField(f.grid, W.real)


def wigner_residue(f: Signal) -> float:
    """Relative imaginary residue of ``W(f, f)``."""
    W = cross_wigner(f, f).values
    peak = np.max(np.abs(W.real))
    return float(np.max(np.abs(W.imag)) / peak) if peak > 0 else 0.0


def wavepacket(f: Signal, g: Signal, route: str = "chirp") -> PhaseField:
    """Wigner wave-packet transform ``W_g f(x,w) = W(f,g)(x/2, w/2) / 2``.

    ``route="chirp"`` uses ``exp(i pi x w) V_{Ig} f``; ``route="wigner"``
    evaluates the half-argument cross-Wigner integral on the fine grid.  The
    two agree when ``f`` and ``g`` are localized to the middle half of the
    period and band-limited to the middle half of the band.
    """
    f.grid.require(g.grid)
    if route == "chirp":
        return chirp(stft(f, reflect(g)), 1.0)
    if route != "wigner":
        raise ValueError(f"unknown route {route!r}")
    grid = f.grid
    n = grid.n
    ff = _upsample(f.values)
    gf = _upsample(g.values)
    m = np.arange(n)[:, None]
    j = np.arange(2 * n)[None, :]  # y_j = (j - n) dx spans two periods
    p = (m + j - n // 2) % (2 * n)
    q = (m - j + 3 * n // 2) % (2 * n)
    K = ff[p] * np.conj(gf[q])
    # exp(-i pi w_k y_j) is a length-2n DFT at index k + n/2
    full = dft(K, grid.dx, axis=1)
    return PhaseField(grid, 0.5 * full[:, n // 2: n // 2 + n])


def ambiguity(f: Signal, g: Signal) -> PhaseField:
    """``A(f,g)(x,w) = integral exp(-2 pi i w t) f(t + x/2) conj(g(t - x/2)) dt``."""
    f.grid.require(g.grid)
    grid = f.grid
    n = grid.n
    ff = _upsample(f.values)
    gf = ff if g is f else _upsample(g.values)
    m = np.arange(n)[:, None]
    j = np.arange(n)[None, :]
    K = ff[(2 * j + m - n // 2) % (2 * n)] * np.conj(gf[(2 * j - m + n // 2) % (2 * n)])
    return PhaseField(grid, dft(K, grid.dx, axis=1))


def symplectic_fourier(F: PhaseField) -> PhaseField:
    """``integral F(a, b) exp(-2 pi i (w a - x b)) da db``."""
    grid = F.grid
    G = idft(F.values, grid.dw, axis=1)          # b -> x
    return PhaseField(grid, dft(G.T, grid.dx, axis=1))  # a -> w


def grossmann_royer(f: Signal, g: Signal) -> PhaseField:
    return cross_wigner(f, g) / 2.0
