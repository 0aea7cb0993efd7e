"""Weighted mixed Lebesgue norms, modulation norms and inequality probes."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CheckFailed
from .grid import Grid, PhaseField, Signal, l2_norm
from .products import _circular_conv, gabor_product_fast
from .transforms import stft

INF = math.inf
HOLDER_SLACK = 1e-9


def _check_exp(p: float, name: str) -> None:
    if not (p == INF or p >= 1):
        raise ValueError(f"{name} must be in [1, inf], got {p!r}")


@dataclass(frozen=True)
class MixedNormSpec:
    """Exponents ``p`` (in x) and ``q`` (in w) with weight ``<x>^t <w>^s``."""

    p: float = 2.0
    q: float = 2.0
    t: float = 0.0
    s: float = 0.0

    def __post_init__(self):
        _check_exp(self.p, "p")
        _check_exp(self.q, "q")

    def weight(self, grid: Grid) -> np.ndarray:
        return ((1 + grid.x[:, None] ** 2) ** (self.t / 2)
                * (1 + grid.w[None, :] ** 2) ** (self.s / 2))


@dataclass(frozen=True)
class YoungTriple:
    p0: float
    p1: float
    p2: float

    def __post_init__(self):
        for name in ("p0", "p1", "p2"):
            _check_exp(getattr(self, name), name)


def _inv(p: float) -> float:
    return 0.0 if p == INF else 1.0 / p


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    return p / (p - 1)


def lp(a: np.ndarray, p: float, h: float, axis=None) -> np.ndarray:
    """Rectangle-rule ``L^p`` norm of ``|a|`` with cell size ``h``."""
    a = np.abs(a)
    if p == INF:
        return np.max(a, axis=axis)
    return (h * np.sum(a ** p, axis=axis)) ** (1.0 / p)


def mixed_norm(F: PhaseField, spec: MixedNormSpec) -> float:
    """Inner ``L^p`` norm over x, then outer ``L^q`` norm over w."""
    grid = F.grid
    a = np.abs(F.values) * spec.weight(grid)
    inner = lp(a, spec.p, grid.dx, axis=0)
    return float(lp(inner, spec.q, grid.dw))


def modulation_norm(f: Signal, g: Signal, spec: MixedNormSpec) -> float:
    return mixed_norm(stft(f, g), spec)


def young_functional(t: YoungTriple) -> float:
    return 1.0 + _inv(t.p0) - _inv(t.p1) - _inv(t.p2)


# -- probes ------------------------------------------------------------------

@dataclass
class ProbeReport:
    kind: str
    params: dict
    seed: int
    trials: int
    ratios: np.ndarray = field(repr=False)
    max_ratio: float = 0.0
    witness: int = 0
    reference: float | None = None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "params": self.params, "seed": self.seed,
                "trials": self.trials, "max_ratio": self.max_ratio,
                "witness_trial": self.witness, "reference_bound": self.reference}


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def random_signal(grid: Grid, rng: np.random.Generator, nonneg: bool = False) -> Signal:
    """Gaussian bump with random centre, width, chirp and polynomial factor.

    Parameters are kept inside the middle of the period and the band so the
    samples decay at both ends.
    """
    L = grid.length
    band = 1.0 / (2 * grid.dx)
    x = grid.x
    c = rng.uniform(-L / 8, L / 8)
    width = rng.uniform(0.6, 1.6) * min(L / 12, 1.0 / band * 6)
    env = np.exp(-np.pi * ((x - c) / width) ** 2)
    if nonneg:
        v = env * (1 + rng.uniform(0, 1) * ((x - c) / width) ** 2)
        return Signal(grid, v / (grid.dx * v.sum()))
    poly = rng.normal(size=3) + 1j * rng.normal(size=3)
    xi = rng.uniform(-band / 6, band / 6)
    v = env * np.polyval(poly, (x - c) / width) * np.exp(2j * np.pi * xi * x)
    return Signal(grid, v)


def random_field_pair(grid: Grid, rng: np.random.Generator) -> tuple[PhaseField, PhaseField]:
    """Two smooth localized fields around a common random centre.

    Each is a separable Gaussian atom with its own widths plus a weaker,
    randomly phased and displaced copy, so neither is an STFT in general.
    """
    L = grid.length
    band = 1.0 / (2 * grid.dx)
    X, W = np.meshgrid(grid.x, grid.w, indexing="ij")
    cx, cw = rng.uniform(-L / 8, L / 8), rng.uniform(-band / 4, band / 4)

    def one():
        sx, sw = rng.uniform(0.75, 1.25) * L / 16, rng.uniform(0.75, 1.25) * band / 8
        ox, ow = rng.normal(size=2) * (sx, sw)
        a = 0.3 * np.exp(2j * np.pi * rng.uniform())
        v = np.exp(-np.pi * (((X - cx) / sx) ** 2 + ((W - cw) / sw) ** 2))
        v = v + a * np.exp(-np.pi * (((X - cx - ox) / sx) ** 2 + ((W - cw - ow) / sw) ** 2))
        return PhaseField(grid, v)

    return one(), one()


def _gauss_window(grid: Grid) -> Signal:
    g = np.exp(-np.pi * grid.x ** 2)
    return Signal(grid, g / np.sqrt(grid.dx * np.sum(g ** 2)))


PROBE_KINDS = ("holder", "young", "lieb", "extension", "conjecture")


def trial_inputs(kind: str, grid: Grid, seed: int, trial: int):
    """The random inputs of one probe trial, regenerated from ``(seed, trial)``."""
    rng = _trial_rng(seed, trial)
    if kind == "holder":
        return random_signal(grid, rng), random_signal(grid, rng)
    if kind == "young":
        return random_signal(grid, rng, nonneg=True), random_signal(grid, rng, nonneg=True)
    if kind == "lieb":
        return (random_signal(grid, rng),)
    if kind == "extension":
        g = _gauss_window(grid)
        return stft(random_signal(grid, rng), g), stft(random_signal(grid, rng), g)
    if kind == "conjecture":
        return random_field_pair(grid, rng)
    raise ValueError(f"unknown probe kind {kind!r}")


def inequality_probe(kind: str, trials: int = 100, seed: int = 0, grid: Grid | None = None,
                     **params) -> ProbeReport:
    """Sample random inputs and record the ratio ``lhs / rhs`` of an inequality.

    kinds
        ``holder``: ``||f h||_1 / (||f||_p ||h||_p')`` (bound 1).
        ``young``: ``||f * h||_r / (||f||_p ||h||_q)`` with
        ``1/p + 1/q = 1 + 1/r``; nonnegative unit-mass inputs (bound 1).
        ``lieb``: ``||V_g f||_p / (||f||_2 ||g||_2)`` (``(2/p)^(1/p)`` for p >= 2).
        ``extension``: ``||F # H||_{L^{r,q0}} / (||F||_{L^{p,q1}} ||H||_{L^{p',q2}})``
        for STFT-range fields, ``1/q0 = 1/q1 + 1/q2 - 1``.
        ``conjecture``: the same ratio for generic smooth fields.
    """
    if kind not in PROBE_KINDS:
        raise ValueError(f"unknown probe kind {kind!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = grid or Grid(64, 0.125)
    g = _gauss_window(grid)
    dx = grid.dx
    reference = None
    if kind == "holder":
        p = float(params.get("p", 2.0))
        pc = conjugate_exponent(p)
        params = {"p": p}
        reference = 1.0

        def ratio(f, h):
            return lp(f.values * h.values, 1, dx) / (lp(f.values, p, dx) * lp(h.values, pc, dx))
    elif kind == "young":
        p = float(params.get("p", 1.0))
        q = float(params.get("q", 1.0))
        s = _inv(p) + _inv(q) - 1.0
        if s < 0:
            raise ValueError("Young exponents need 1/p + 1/q >= 1")
        r = INF if s == 0 else 1.0 / s
        params = {"p": p, "q": q, "r": r}
        reference = 1.0

        def ratio(f, h):
            conv = dx * _circular_conv(f.values, h.values, axis=0)
            return lp(conv, r, dx) / (lp(f.values, p, dx) * lp(h.values, q, dx))
    elif kind == "lieb":
        p = float(params.get("p", 2.0))
        params = {"p": p}
        reference = (2.0 / p) ** (1.0 / p) if p >= 2 else None
        spec = MixedNormSpec(p, p)

        def ratio(f):
            return mixed_norm(stft(f, g), spec) / (l2_norm(f) * l2_norm(g))
    else:
        p = float(params.get("p", 2.0))
        q1 = float(params.get("q1", 1.0))
        q2 = float(params.get("q2", 1.0))
        r = float(params.get("r", 2.0))
        inv_q0 = _inv(q1) + _inv(q2) - 1.0
        q0 = INF if inv_q0 <= 0 else 1.0 / inv_q0
        pc = conjugate_exponent(p)
        params = {"p": p, "q1": q1, "q2": q2, "r": r, "q0": q0,
                  "r_admissible": bool(r >= max(q0, conjugate_exponent(q0)))}
        s0, s1, s2 = MixedNormSpec(r, q0), MixedNormSpec(p, q1), MixedNormSpec(pc, q2)

        def ratio(F, H):
            P = gabor_product_fast(F, H, g)
            return mixed_norm(P, s0) / (mixed_norm(F, s1) * mixed_norm(H, s2))
    ratios = np.array([ratio(*trial_inputs(kind, grid, seed, i)) for i in range(trials)])
    w = int(np.argmax(ratios))
    if kind == "holder" and ratios[w] > 1 + HOLDER_SLACK:
        raise CheckFailed(f"Hoelder ratio {ratios[w]:.12g} exceeds 1", anchor="Thm:Holder")
    return ProbeReport(kind, params, seed, trials, ratios, float(ratios[w]), w, reference)
