"""Command-line entry point: ``gaborwigner <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import io
from .certify import certify, gaussian_window
from .errors import CheckFailed, GaborWignerError, ResolutionWarning
from .grid import Grid, PhaseField, Signal, edge_ratio, l2_norm, l2_norm2
from .nlse import EDGE_TOL, NlseConfig, energy, mass, split_step, variance
from .norms import PROBE_KINDS, inequality_probe, trial_inputs
from .ops import chirp, reflect
from .phasespace import PsEvolConfig, evolve
from .products import diamond_product, gabor_product, wigner_product
from .transforms import ambiguity, cross_wigner, stft, stft_invert, wavepacket, wigner

INITIAL = {
    "gaussian": lambda x: np.exp(-x ** 2).astype(complex),
    "soliton": lambda x: np.sqrt(2) / np.cosh(x),
    "two-bump": lambda x: np.exp(-(x - 3) ** 2) + np.exp(-(x + 3) ** 2),
}


def _dump(obj, path: Path | None) -> None:
    text = json.dumps(obj, indent=2, default=float)
    if path is None:
        print(text)
    else:
        path.write_text(text + "\n")


def _check_edge(s: Signal, what: str) -> None:
    if edge_ratio(s) > EDGE_TOL:
        warnings.warn(f"{what} does not decay to {EDGE_TOL:g} of its peak at the domain edge",
                      ResolutionWarning, stacklevel=2)


def window_from_spec(spec: str, grid: Grid) -> Signal:
    """``gaussian`` or ``gaussian:WIDTH`` (unit norm), otherwise a signal CSV path."""
    if spec == "gaussian" or spec.startswith("gaussian:"):
        width = float(spec.split(":", 1)[1]) if ":" in spec else 1.0
        return gaussian_window(grid, width)
    g = io.load_signal(spec)
    grid.require(g.grid)
    return g


def _initial(args, grid: Grid) -> Signal:
    if args.input:
        return io.load_signal(args.input)
    return Signal(grid, INITIAL[args.initial](grid.x))


# -- subcommands ----------------------------------------------------------------

def cmd_transform(args) -> int:
    f = io.load_signal(args.input)
    _check_edge(f, "input signal")
    g = window_from_spec(args.window, f.grid)
    kind = args.kind
    if kind == "stft":
        F = stft(f, g)
    elif kind == "wavepacket":
        F = wavepacket(f, g)
    elif kind == "cross-wigner":
        F = cross_wigner(f, g)
    elif kind == "ambiguity":
        F = ambiguity(f, g)
    else:
        F = wigner(f)
    io.save_field(F, args.output)
    return 0


def _preimage(F: PhaseField, g: Signal, kind: str) -> Signal:
    # least-squares signal whose transform is closest to F
    if kind == "wigner":
        rg = reflect(g)
        return stft_invert(chirp(F, -1.0), rg, rg)
    return stft_invert(F, g, g)


def cmd_product(args) -> int:
    F = io.load_field(args.left)
    H = io.load_field(args.right)
    F.grid.require(H.grid)
    g = window_from_spec(args.window, F.grid)
    f, h = _preimage(F, g, args.kind), _preimage(H, g, args.kind)
    if args.kind == "gabor":
        P = gabor_product(F, H, g, args.mode)
        ref = stft(f * h, g)
    elif args.kind == "wigner":
        P = wigner_product(F, H, g, args.mode)
        ref = wavepacket(f * h, g)
    else:
        P = diamond_product(F, H, g, args.mode)
        n = f.grid.n
        c = np.fft.ifft(np.fft.fft(f.values) * np.fft.fft(h.values))
        ref = stft(f.like(f.grid.dx * np.roll(c, -(n // 2))), g)
    scale = l2_norm(g) ** 2
    ref = ref * scale
    denom = l2_norm2(ref)
    residual = l2_norm2(P - ref) / denom if denom > 0 else l2_norm2(P)
    io.save_field(P, args.output)
    _dump({"kind": args.kind, "mode": args.mode, "identity_residual": residual,
           "norms": {"left": l2_norm2(F), "right": l2_norm2(H), "product": l2_norm2(P)}},
          args.report)
    return 0


def cmd_probe(args) -> int:
    params = {k: v for k, v in (("p", args.p), ("q", args.q), ("q1", args.q1),
                                ("q2", args.q2), ("r", args.r)) if v is not None}
    grid = Grid(args.n, args.dx)
    rep = inequality_probe(args.kind, args.trials, args.seed, grid, **params)
    files = []
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for i, obj in enumerate(trial_inputs(args.kind, grid, args.seed, rep.witness)):
            path = out / f"witness_{i}.csv"
            (io.save_signal if isinstance(obj, Signal) else io.save_field)(obj, path)
            files.append(str(path))
    d = rep.as_dict()
    d["witness_files"] = files
    _dump(d, args.report)
    return 0


def cmd_nlse(args) -> int:
    grid = Grid(args.n, args.dx)
    psi0 = _initial(args, grid)
    cfg = NlseConfig(lam=args.lam, sigma=args.sigma, dt=args.dt, t_end=args.t_end,
                     save_every=args.save_every)
    traj = split_step(psi0, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    diag = {"times": [], "mass": [], "energy": [], "variance": [], "outputs": []}
    for k, (t, psi) in enumerate(traj):
        path = out / f"psi_{k:05d}.csv"
        io.save_signal(psi, path)
        diag["times"].append(t)
        diag["mass"].append(mass(psi))
        diag["energy"].append(energy(psi, cfg.lam, cfg.sigma))
        diag["variance"].append(variance(psi))
        diag["outputs"].append(str(path))
    _dump(diag, out / "diagnostics.json")
    return 0


def cmd_phasespace(args) -> int:
    rep = args.repr.replace("-", "_")
    n = args.n or (64 if rep == "wigner_moyal" else 256)
    dx = args.dx or (0.35 if rep == "wigner_moyal" else 0.2)
    grid = Grid(n, dx)
    psi0 = _initial(args, grid)
    g = None if rep == "wigner_moyal" else window_from_spec(args.window, psi0.grid)
    cfg = PsEvolConfig(rep, g, args.lam, args.dt, args.t_end, args.collision_mode,
                       args.save_every)
    traj = evolve(rep, psi0, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = {"representation": rep, "times": traj.times,
              "mass": [d["mass"] for d in traj.diagnostics], "outputs": []}
    if rep == "wigner_moyal":
        report["ps_energy"] = [d["ps_energy"] for d in traj.diagnostics]
        report["lemma2_residual"] = traj.collision_mean_max
    for k, F in enumerate(traj.fields):
        path = out / f"field_{k:05d}.csv"
        io.save_field(F, path)
        report["outputs"].append(str(path))
    if args.compare_split_step:
        ref = split_step(psi0, NlseConfig(lam=args.lam, dt=args.dt, t_end=args.t_end,
                                          save_every=args.save_every))
        tf = {"stft": lambda s: stft(s, g), "bopp": lambda s: wavepacket(s, g),
              "wigner_moyal": wigner}[rep]
        dev = 0.0
        for (_, psi), F in zip(ref, traj.fields):
            R = tf(psi)
            dev = max(dev, l2_norm2(F - R) / l2_norm2(R))
        report["oracle_deviation"] = dev
    _dump(report, out / "report.json")
    return 0


def cmd_certify(args) -> int:
    window = io.load_signal(args.window) if args.window else None
    try:
        m = certify(args.seed, args.profile, window, strict=True)
        code = 0
    except CheckFailed as exc:
        m = exc.manifest
        print(f"FAILED {exc.anchor}: {exc}", file=sys.stderr)
        code = 1
    if args.output:
        m.outputs.append(str(args.output))
    for name, r in m.residuals.items():
        ok = "PASS" if name not in m.failures() else "FAIL"
        print(f"{ok} {name:40s} {r:.3e} <= {m.tolerances[name]:.1e}", file=sys.stderr)
    _dump(m.to_dict(), Path(args.output) if args.output else None)
    return code


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaborwigner",
                                description="Phase-space products and NLSE evolution")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("transform", help="signal CSV -> phase-space field CSV")
    s.add_argument("--input", required=True)
    s.add_argument("--window", default="gaussian")
    s.add_argument("--kind", default="stft",
                   choices=["stft", "wavepacket", "wigner", "cross-wigner", "ambiguity"])
    s.add_argument("--output", required=True)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("product", help="product of two field CSVs")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s.add_argument("--window", default="gaussian")
    s.add_argument("--kind", default="gabor", choices=["gabor", "wigner", "diamond"])
    s.add_argument("--mode", default="fast", choices=["fast", "direct"])
    s.add_argument("--output", required=True)
    s.add_argument("--report", type=Path)
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("probe", help="empirical inequality ratios")
    s.add_argument("--kind", required=True, choices=PROBE_KINDS)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=64)
    s.add_argument("--dx", type=float, default=0.125)
    for name in ("p", "q", "q1", "q2", "r"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--out-dir")
    s.add_argument("--report", type=Path)
    s.set_defaults(func=cmd_probe)

    def evolution_args(s, n, dx):
        s.add_argument("--lambda", dest="lam", type=float, default=1.0)
        s.add_argument("--dt", type=float, default=1e-3)
        s.add_argument("--t-end", type=float, default=1.0)
        s.add_argument("--save-every", type=int, default=100)
        s.add_argument("--n", type=int, default=n)
        s.add_argument("--dx", type=float, default=dx)
        src = s.add_mutually_exclusive_group()
        src.add_argument("--initial", default="soliton", choices=sorted(INITIAL))
        src.add_argument("--input", help="initial condition as a signal CSV")
        s.add_argument("--out-dir", required=True)

    s = sub.add_parser("nlse", help="split-step reference solver")
    evolution_args(s, 256, 0.25)
    s.add_argument("--sigma", type=float, default=1.0)
    s.set_defaults(func=cmd_nlse)

    s = sub.add_parser("phasespace", help="evolve a phase-space form of the NLSE")
    evolution_args(s, None, None)
    s.add_argument("--repr", default="stft", choices=["stft", "bopp", "wigner-moyal"])
    s.add_argument("--window", default="gaussian:2")
    s.add_argument("--collision-mode", default="fast", choices=["fast", "direct"])
    s.add_argument("--compare-split-step", action="store_true")
    s.set_defaults(func=cmd_phasespace, t_end=0.1)

    s = sub.add_parser("certify", help="run the identity suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--profile", default="quick", choices=["quick", "full"])
    s.add_argument("--window", help="signal CSV replacing the default window")
    s.add_argument("--output", help="write the manifest here instead of stdout")
    s.set_defaults(func=cmd_certify)
    return p


def _format_warning(message, category, filename, lineno, line=None):
    return f"warning: {message}\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.formatwarning = _format_warning
    try:
        return args.func(args)
    except GaborWignerError as exc:
        tag = f" [{exc.anchor}]" if exc.anchor else ""
        print(f"error{tag}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
