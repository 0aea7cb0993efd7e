"""Phase-space forms of the cubic NLSE.

Three representations of ``i psi_t + psi_xx + lam |psi|^2 psi = 0``:

* ``stft``: ``F = V_g psi`` with kinetic operator ``(2 pi w - i d/dx)^2`` and
  cubic term ``F* # F # F`` (Gabor product);
* ``bopp``: ``F = W_g psi`` with ``(pi w - i d/dx)^2`` and the Wigner product;
* ``wigner_moyal``: ``F = W psi`` obeying the kinetic equation
  ``F_t + 4 pi w F_x = Q(F, F)``.

Derivatives in ``x`` are spectral along the rows of the field.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import GridTooLarge, StepDiverged, WindowNotRealUnit
from .grid import PhaseField, Signal, _upsample, l2_norm, quad_sum2
from .ops import chirp, star
from .products import _circular_conv, gabor_product_fast, wigner_product
from .transforms import dft, idft, stft, wavepacket, wigner

COLLISION_DIRECT_MAX = 48

log = logging.getLogger(__name__)


def _x_frequencies(F: PhaseField) -> np.ndarray:
    return F.grid.w[:, None]


def dx_field(F: PhaseField, order: int = 1) -> PhaseField:
    """Spectral ``d^order/dx^order`` along axis 0 (Nyquist mode dropped for odd orders)."""
    grid = F.grid
    nu = _x_frequencies(F)
    mult = (2j * np.pi * nu) ** order
    if order % 2:
        mult = mult.copy()
        mult[0] = 0.0
    return F.like(idft(mult * dft(F.values, grid.dx, axis=0), grid.dw, axis=0))


def dw_field(F: PhaseField, order: int = 1) -> PhaseField:
    """Spectral ``d/dw`` along axis 1 (frequency direction)."""
    grid = F.grid
    G = idft(F.values, grid.dw, axis=1)       # w -> conjugate variable on x grid
    mult = (-2j * np.pi * grid.x[None, :]) ** order
    if order % 2:
        mult = mult.copy()
        mult[:, 0] = 0.0
    return F.like(dft(mult * G, grid.dx, axis=1))


def _check_window(g: Signal) -> None:
    if np.max(np.abs(g.values.imag)) > 1e-12 * np.max(np.abs(g.values)) or \
            abs(l2_norm(g) - 1.0) > 1e-8:
        raise WindowNotRealUnit("window must be real with unit L2 norm")


def _kinetic(F: PhaseField, scale: float) -> PhaseField:
    # (scale * w - i d/dx)^2 F = scale^2 w^2 F - 2 i scale w F_x - F_xx
    w = F.grid.w[None, :]
    Fx = dx_field(F, 1).values
    Fxx = dx_field(F, 2).values
    return F.like((scale * w) ** 2 * F.values - 2j * scale * w * Fx - Fxx)


def stft_rhs(F: PhaseField, g: Signal, lam: float) -> PhaseField:
    """``dF/dt = -i [(2 pi w - i d/dx)^2 F - lam F* # F # F]``."""
    _check_window(g)
    cubic = gabor_product_fast(gabor_product_fast(star(F), F, g), F, g)
    return (_kinetic(F, 2 * np.pi) - lam * cubic) * (-1j)


def bopp_rhs(F: PhaseField, g: Signal, lam: float) -> PhaseField:
    """``dF/dt = -i [(pi w - i d/dx)^2 F - lam F* . F . F]`` with the Wigner product."""
    _check_window(g)
    cubic = wigner_product(wigner_product(star(F), F, g), F, g)
    return (_kinetic(F, np.pi) - lam * cubic) * (-1j)


def bopp_sides(f: Signal, g: Signal):
    """Both sides of the two Bopp intertwining relations.

    ``W_g(x f) = (x + (i/pi) d/dw) W_g f / 2`` and
    ``W_g(f') = (pi i w + d/dx) W_g f``.
    """
    grid = f.grid
    Wf = wavepacket(f, g)
    X = grid.x[:, None]
    W = grid.w[None, :]
    lhs1 = wavepacket(f.like(grid.x * f.values), g).values
    rhs1 = 0.5 * (X * Wf.values + 1j / np.pi * dw_field(Wf).values)
    fp = f.like(idft(2j * np.pi * grid.w * dft(f.values, grid.dx), grid.dw))
    lhs2 = wavepacket(fp, g).values
    rhs2 = 1j * np.pi * W * Wf.values + dx_field(Wf).values
    return (lhs1, rhs1), (lhs2, rhs2)


def stft_intertwiner_sides(f: Signal, g: Signal):
    """``V_g(x f) = -(1/(2 pi i)) d/dw V_g f`` and ``V_g(-i f') = (2 pi w - i d/dx) V_g f``."""
    grid = f.grid
    Vf = stft(f, g)
    lhs1 = stft(f.like(grid.x * f.values), g).values
    rhs1 = -dw_field(Vf).values / (2j * np.pi)
    fp = f.like(idft(2j * np.pi * grid.w * dft(f.values, grid.dx), grid.dw))
    lhs2 = stft(fp * (-1j), g).values
    rhs2 = 2 * np.pi * grid.w[None, :] * Vf.values - 1j * dx_field(Vf).values
    return (lhs1, rhs1), (lhs2, rhs2)


def _rel(a, b):
    s = max(np.max(np.abs(a)), np.max(np.abs(b)))
    return float(np.max(np.abs(a - b)) / s) if s > 0 else 0.0


def bopp_check(f: Signal, g: Signal) -> float:
    """Max relative deviation over both Bopp intertwining relations."""
    return max(_rel(*p) for p in bopp_sides(f, g))


def stft_intertwiner_check(f: Signal, g: Signal) -> float:
    return max(_rel(*p) for p in stft_intertwiner_sides(f, g))


# -- collision operator -------------------------------------------------------

def density(G: PhaseField) -> np.ndarray:
    """``rho(x) = integral G(x, w) dw``."""
    return G.grid.dw * np.sum(G.values, axis=1)


def half_scaled_spectrum(rho: np.ndarray, grid) -> np.ndarray:
    """``rho^(2 nu)`` for every ``nu`` on the frequency grid.

    Read from the spectrum of the factor-2 interpolant of ``rho``, which is
    zero beyond the band of ``rho``.
    """
    fine = _upsample(rho)
    spec = dft(fine, grid.dx / 2)          # frequencies (kappa - n) dw
    return spec[0::2]                      # kappa = 2 i  <->  2 nu_i


def collision_q(F: PhaseField, G: PhaseField, lam: float, mode: str = "fast") -> PhaseField:
    """Collision term ``4 lam integral sin(4 pi (w - w')(y - x)) F(x, w') G(y, w'') dy dw' dw''``.

    ``w - w'`` is reduced onto the frequency grid.  The fast mode uses the
    convolution form ``2 i lam [F_x * K_x - F_x * I K_x]`` with
    ``K_x(nu) = exp(4 pi i x nu) rho^(2 nu)``; the direct mode sums the sine
    kernel over the half-spacing grid.
    """
    F.grid.require(G.grid)
    grid = F.grid
    n = grid.n
    rho = density(G)
    if mode == "fast":
        K = np.exp(4j * np.pi * np.outer(grid.x, grid.w)) * half_scaled_spectrum(rho, grid)[None, :]
        D = K - K[:, (-np.arange(n)) % n]
        Q = 2j * lam * grid.dw * _circular_conv(F.values, D, axis=1)
        return F.like(Q)
    if mode != "direct":
        raise ValueError(f"unknown mode {mode!r}")
    if n > COLLISION_DIRECT_MAX:
        raise GridTooLarge(f"direct collision quadrature is capped at n={COLLISION_DIRECT_MAX}")
    y = grid.fine().x
    rho_f = _upsample(rho)
    # S[m, i] = (dx/2) sum_p sin(4 pi nu_i (y_p - x_m)) rho(y_p)
    arg = 4 * np.pi * grid.w[None, :, None] * (y[None, None, :] - grid.x[:, None, None])
    S = grid.dx / 2 * np.sum(np.sin(arg) * rho_f[None, None, :], axis=2)
    k = np.arange(n)
    nu_idx = (k[:, None] - k[None, :] + n // 2) % n          # index of w_k - w_k'
    Q = 4 * lam * grid.dw * np.einsum("mj,mkj->mk", F.values, S[:, nu_idx])
    return F.like(Q)


def collision_mean_residual(F: PhaseField, G: PhaseField, lam: float) -> float:
    """``max_x |integral Q(F,G)(x, w) dw|`` relative to ``||F|| ||G||``."""
    Q = collision_q(F, G, lam)
    r = np.max(np.abs(F.grid.dw * Q.values.sum(axis=1)))
    scale = np.linalg.norm(F.values) * np.linalg.norm(G.values) * F.grid.dx * F.grid.dw
    return float(r / scale) if scale > 0 else float(r)


def transport(F: PhaseField, t: float) -> PhaseField:
    """Exact free transport ``F(x - 4 pi w t, w)``, spectral in ``x``."""
    grid = F.grid
    nu = _x_frequencies(F)
    phase = np.exp(-2j * np.pi * nu * 4 * np.pi * grid.w[None, :] * t)
    return F.like(idft(phase * dft(F.values, grid.dx, axis=0), grid.dw, axis=0))


def wigner_moyal_step(F: PhaseField, lam: float, dt: float, mode: str = "fast") -> PhaseField:
    """Strang step: half transport, midpoint collision, half transport."""
    m0 = quad_sum2(F).real
    F = transport(F, dt / 2)
    if lam != 0:
        Fh = F + collision_q(F, F, lam, mode) * (dt / 2)
        F = F + collision_q(Fh, Fh, lam, mode) * dt
    F = transport(F, dt / 2)
    m1 = quad_sum2(F).real
    if not np.all(np.isfinite(F.values)) or abs(m1 - m0) > 0.1 * abs(m0):
        raise StepDiverged(f"mass jumped from {m0:.3e} to {m1:.3e}")
    return F


def ps_energy(F: PhaseField, lam: float) -> float:
    """``integral (w^2 - lam/(8 pi^2) rho(x)) F(x, w) dx dw``."""
    grid = F.grid
    rho = density(F)
    dens = grid.w[None, :] ** 2 - lam / (8 * np.pi ** 2) * rho[:, None]
    return float(np.real(quad_sum2(F.like(dens * F.values))))


# -- time stepping ------------------------------------------------------------

@dataclass(frozen=True)
class PsEvolConfig:
    representation: str = "stft"
    window: Signal | None = None
    lam: float = 1.0
    dt: float = 1e-3
    t_end: float = 0.1
    collision_mode: str = "fast"
    save_every: int = 1

    def __post_init__(self):
        if self.representation not in ("stft", "bopp", "wigner_moyal"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.representation != "wigner_moyal":
            if self.window is None:
                raise ValueError("stft and bopp need a window")
            _check_window(self.window)

    @property
    def steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass
class PsTrajectory:
    times: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    collision_mean_max: float = 0.0   # over every step, not only the saved ones

    def __iter__(self):
        return iter(zip(self.times, self.fields))

    def __len__(self):
        return len(self.times)


def _rk4(rhs, F: PhaseField, dt: float) -> PhaseField:
    k1 = rhs(F)
    k2 = rhs(F + k1 * (dt / 2))
    k3 = rhs(F + k2 * (dt / 2))
    k4 = rhs(F + k3 * dt)
    return F + (k1 + k2 * 2 + k3 * 2 + k4) * (dt / 6)


def _diagnostics(F: PhaseField, cfg: PsEvolConfig) -> dict:
    d = {"mass": float(np.real(quad_sum2(F))) if cfg.representation == "wigner_moyal"
         else float(np.sum(np.abs(F.values) ** 2) * F.grid.dx * F.grid.dw)}
    if cfg.representation == "wigner_moyal":
        d["ps_energy"] = ps_energy(F, cfg.lam)
        d["collision_mean_residual"] = collision_mean_residual(F, F, cfg.lam)
        # finite-grid stand-ins for the collision operator's integrability hypotheses
        grid = F.grid
        d["row_l1_max"] = float(np.max(grid.dw * np.sum(np.abs(F.values), axis=1)))
        d["density_spectrum_l1"] = float(grid.dw * np.sum(np.abs(dft(density(F), grid.dx))))
        log.debug("collision hypotheses: sup_x |F(x,.)|_1 = %.3e, |rho^|_1 = %.3e",
                  d["row_l1_max"], d["density_spectrum_l1"])
    return d


def evolve(representation: str, initial, cfg: PsEvolConfig) -> PsTrajectory:
    """Integrate one of the three phase-space forms to ``cfg.t_end``.

    For ``stft`` and ``bopp`` a :class:`Signal` initial condition is
    transformed with ``cfg.window``; ``wigner_moyal`` takes a Signal (its
    Wigner function is used) or any :class:`PhaseField`.
    """
    if representation != cfg.representation:
        cfg = PsEvolConfig(representation, cfg.window, cfg.lam, cfg.dt, cfg.t_end,
                           cfg.collision_mode, cfg.save_every)
    g = cfg.window
    if representation == "stft":
        F = stft(initial, g) if isinstance(initial, Signal) else initial
        step = lambda F: _rk4(lambda H: stft_rhs(H, g, cfg.lam), F, cfg.dt)
    elif representation == "bopp":
        F = wavepacket(initial, g) if isinstance(initial, Signal) else initial
        step = lambda F: _rk4(lambda H: bopp_rhs(H, g, cfg.lam), F, cfg.dt)
    else:
        F = wigner(initial) if isinstance(initial, Signal) else initial
        step = lambda F: wigner_moyal_step(F, cfg.lam, cfg.dt, cfg.collision_mode)
    traj = PsTrajectory([0.0], [F], [_diagnostics(F, cfg)])
    wm = representation == "wigner_moyal"
    if wm:
        traj.collision_mean_max = traj.diagnostics[0]["collision_mean_residual"]
    for k in range(1, cfg.steps + 1):
        F = step(F)
        if wm:
            traj.collision_mean_max = max(traj.collision_mean_max, collision_mean_residual(F, F, cfg.lam))
        if k % cfg.save_every == 0 or k == cfg.steps:
            traj.times.append(k * cfg.dt)
            traj.fields.append(F)
            traj.diagnostics.append(_diagnostics(F, cfg))
    return traj
