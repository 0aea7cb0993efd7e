"""Bilinear phase-space products.

Three products are provided, each as a brute-force rectangle-rule sum and
as an FFT fast path:

* the Gabor product ``F # H`` with ``V_g(f h) = V_g f # V_g h``,
* the Wigner product, its chirp-conjugated twin for the wave-packet transform,
* the diamond product with ``V_g(f * h) = V_g f <> V_g h`` (convolution).

Frequency sums such as ``w' + w''`` are reduced onto the grid (circular
convolution).  With that convention the direct sums and the fast paths agree
to roundoff.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GridTooLarge, WindowNotRealEven
from .grid import Grid, PhaseField, Signal
from .ops import Shift2D, chirp, chirp_factor, lattice_steps, mod2, reflect, shift2, star
from .transforms import _check_window, dft, idft, stft

GABOR_DIRECT_MAX = 64
WIGNER_DIRECT_MAX = 32
DIAMOND_DIRECT_MAX = 32


def _cap(grid: Grid, limit: int, what: str) -> None:
    if grid.n > limit:
        raise GridTooLarge(f"{what} direct quadrature is capped at n={limit}, got n={grid.n}")


def _circular_conv(a: np.ndarray, b: np.ndarray, axis: int) -> np.ndarray:
    """``c[i] = sum_j a[j] b[i - j]`` for centered indices, along ``axis``."""
    n = a.shape[axis]
    c = np.fft.ifft(np.fft.fft(a, axis=axis) * np.fft.fft(b, axis=axis), axis=axis)
    return np.roll(c, -(n // 2), axis=axis)


def _sum_index(n: int) -> np.ndarray:
    # grid index of w_j + w_l (or x_a + x_b), wrapped onto the grid
    j = np.arange(n)
    return (j[:, None] + j[None, :] - n // 2) % n


def a_kernel(F: PhaseField, H: PhaseField) -> Signal:
    """``A^(xi) = integral F(x, w) H(x, xi - w) dx dw`` on the frequency grid."""
    F.grid.require(H.grid)
    g = F.grid
    n = g.n
    spec = np.sum(np.fft.fft(F.values, axis=1) * np.fft.fft(H.values, axis=1), axis=0)
    c = np.roll(np.fft.ifft(spec), -(n // 2))
    return Signal(g.dual(), g.dx * g.dw * c)


def _product_kernel(B: np.ndarray, ghat: np.ndarray, grid: Grid, sign: int) -> np.ndarray:
    # out[m,k] = dw^2 sum_{j,l} B[j,l] conj(ghat(sign*(s_jl - w_k))) exp(2 pi i x_m (s_jl - w_k))
    n = grid.n
    x, w = grid.x, grid.w
    i = _sum_index(n).ravel()
    k = np.arange(n)
    gidx = (sign * (i[None, :] - k[:, None]) + n // 2) % n
    C = np.conj(ghat[gidx]) * B.ravel()[None, :]               # (k, jl)
    P = np.exp(2j * np.pi * np.outer(x, w[i]))                  # (m, jl)
    out = P @ C.T
    return grid.dw ** 2 * out * np.exp(-2j * np.pi * np.outer(x, w))


def gabor_product_direct(F: PhaseField, H: PhaseField, g: Signal) -> PhaseField:
    """Rectangle-rule evaluation of the defining triple integral.

    The ``x'`` sum is carried out first, which leaves O(n^4) work.
    """
    F.grid.require(H.grid, g.grid)
    _cap(F.grid, GABOR_DIRECT_MAX, "Gabor product")
    grid = F.grid
    ghat = dft(g.values, grid.dx)
    B = grid.dx * F.values.T @ H.values
    return PhaseField(grid, _product_kernel(B, ghat, grid, +1))


def gabor_product_fast(F: PhaseField, H: PhaseField, g: Signal) -> PhaseField:
    """``V_g A`` where ``A`` is the inverse Fourier transform of :func:`a_kernel`."""
    F.grid.require(H.grid, g.grid)
    _check_window(g)
    grid = F.grid
    A = idft(a_kernel(F, H).values, grid.dw)
    return stft(Signal(grid, A), g)


def gabor_product(F: PhaseField, H: PhaseField, g: Signal, mode: str = "fast") -> PhaseField:
    if mode == "fast":
        return gabor_product_fast(F, H, g)
    if mode == "direct":
        return gabor_product_direct(F, H, g)
    raise ValueError(f"unknown mode {mode!r}")


def wigner_product(F: PhaseField, H: PhaseField, g: Signal, mode: str = "fast") -> PhaseField:
    """Product matched to the wave-packet transform: ``W_g(f h) = W_g f . W_g h``.

    The fast mode strips the chirp ``exp(i pi x w)`` from both factors, takes
    the Gabor product with the reflected window and restores the chirp.
    """
    F.grid.require(H.grid, g.grid)
    grid = F.grid
    if mode == "fast":
        _check_window(g)
        P = gabor_product_fast(chirp(F, -1.0), chirp(H, -1.0), reflect(g))
        return chirp(P, 1.0)
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    _cap(grid, WIGNER_DIRECT_MAX, "Wigner product")
    ghat = dft(g.values, grid.dx)
    E = chirp_factor(grid, -1.0)  # exp(-i pi x' w') splits over w' and w''
    B = grid.dx * (E * F.values).T @ (E * H.values)
    out = _product_kernel(B, ghat, grid, -1)
    return PhaseField(grid, chirp_factor(grid, 1.0) * out)


def _check_real_even(g: Signal) -> None:
    v = g.values
    scale = np.max(np.abs(v))
    n = g.grid.n
    if np.max(np.abs(v.imag)) > 1e-12 * scale or \
            np.max(np.abs(v - v[(-np.arange(n)) % n])) > 1e-12 * scale:
        warnings.warn("diamond-product identity needs a real, even window",
                      WindowNotRealEven, stacklevel=3)


def diamond_product(F: PhaseField, H: PhaseField, g: Signal, mode: str = "fast") -> PhaseField:
    """Product matched to convolution: ``V_g(f * h) = V_g f <> V_g h``.

    Defined by the integral of ``conj(g(x' + x'' - x)) F(x', w') H(x'', w')
    exp(2 pi i (w' - w)(x' + x''))``.  Both modes first collect the
    ``(x', x'')`` pairs by their sum; the fast mode does so with FFTs.
    """
    F.grid.require(H.grid, g.grid)
    _check_real_even(g)
    grid = F.grid
    n = grid.n
    E = np.exp(2j * np.pi * np.outer(grid.x, grid.w))  # E[c, j] = exp(2 pi i x_c w_j)
    if mode == "fast":
        _check_window(g)
        C = _circular_conv(F.values, H.values, axis=0)
        u = grid.dx * grid.dw * np.sum(C * E, axis=1)
        return stft(Signal(grid, u), g)
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    _cap(grid, DIAMOND_DIRECT_MAX, "diamond product")
    c = _sum_index(n)                                   # c[a, b]
    S = np.einsum("aj,bj,abj->ab", F.values, H.values, E[c])
    x = grid.x
    out = np.empty((n, n), dtype=complex)
    ph = np.exp(-2j * np.pi * np.outer(x[c].ravel(), grid.w))  # (ab, k)
    for m in range(n):
        gk = np.conj(g.values[(c - m + n // 2) % n]).ravel()
        out[m] = (gk * S.ravel()) @ ph
    return PhaseField(grid, grid.dx ** 2 * grid.dw * out)


@dataclass(frozen=True)
class CovarianceShifts:
    """Displacements in the covariance law.

    Gabor: ``(M_(eta,-u) T_(v,rho) F) # (M_(-eta,-u) T_(v,sigma) H)``.
    Wigner: the second factor uses ``M_(beta,-u)`` with
    ``beta = (rho + sigma)/2 - eta``; ``v`` must then be an even multiple of
    ``dx``.
    """

    u: float = 0.0
    eta: float = 0.0
    v: float = 0.0
    rho: float = 0.0
    sigma: float = 0.0


def _max_rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(b)), np.max(np.abs(a)))
    return float(np.max(np.abs(a - b)) / scale) if scale > 0 else 0.0


def covariance_sides(F: PhaseField, H: PhaseField, g: Signal, sh: CovarianceShifts,
                     kind: str = "gabor", mode: str = "fast"):
    """Return both sides of the covariance law as arrays."""
    grid = F.grid
    for a, step in ((sh.u, grid.dx), (sh.v, grid.dx), (sh.eta, grid.dw),
                    (sh.rho, grid.dw), (sh.sigma, grid.dw)):
        lattice_steps(a, step)
    c = sh.rho + sh.sigma
    X, W = np.meshgrid(grid.x, grid.w, indexing="ij")
    if kind == "gabor":
        Fs = mod2(shift2(F, Shift2D(sh.v, sh.rho)), Shift2D(-sh.u, sh.eta))
        Hs = mod2(shift2(H, Shift2D(sh.v, sh.sigma)), Shift2D(-sh.u, -sh.eta))
        lhs = gabor_product(Fs, Hs, g, mode).values
        P = gabor_product(F, H, g, mode)
        rhs = np.exp(-2j * np.pi * sh.u * W) * shift2(P, Shift2D(sh.u, c)).values
        return lhs, rhs
    if kind == "wigner":
        beta = c / 2 - sh.eta
        lattice_steps(beta, grid.dw)
        lattice_steps(sh.v / 2, grid.dx)
        Fs = mod2(shift2(F, Shift2D(sh.v, sh.rho)), Shift2D(-sh.u, sh.eta))
        Hs = mod2(shift2(H, Shift2D(sh.v, sh.sigma)), Shift2D(-sh.u, beta))
        lhs = wigner_product(Fs, Hs, g, mode).values
        P = wigner_product(F, H, g, mode)
        up = sh.u + sh.v / 2
        phase = np.exp(1j * np.pi * (c * (X - sh.u + sh.v / 2) - W * up))
        rhs = phase * shift2(P, Shift2D(up, c)).values
        return lhs, rhs
    raise ValueError(f"unknown kind {kind!r}")


def covariance_check(F: PhaseField, H: PhaseField, g: Signal, shifts: CovarianceShifts,
                     kind: str = "gabor", mode: str = "fast") -> float:
    """Max pointwise deviation between the two sides, relative to their peak."""
    return _max_rel(*covariance_sides(F, H, g, shifts, kind, mode))


def involution_residual(F: PhaseField, H: PhaseField, g: Signal, kind: str = "gabor") -> float:
    """Relative deviation of ``(F . H)* = H* . F*``."""
    prod = gabor_product if kind == "gabor" else wigner_product
    lhs = star(prod(F, H, g)).values
    rhs = prod(star(H), star(F), g).values
    return _max_rel(lhs, rhs)
