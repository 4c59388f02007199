"""Command-line entry points: sampling, ensembles, verification, cocycle
evaluation, and extended sampling.

Configuration precedence is defaults < --config JSON < explicit flags.
All outputs are deterministic functions of the resolved configuration:
ensembles use one substream per sample index, so thread counts change
scheduling but never bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .brownian import CovarianceSpec
from .diagnostics import CHECK_NAMES, reports_to_json, run_check
from .extension import EXTENSION_CENTRAL_STREAM, LatticeSpec, haar_sample
from .fields import AlgebraField
from .lie import build_basis
from .rng import substream
from .sde import SdeConfig, sample_ensemble, sample_field
from .storage import EnsembleManifest, write_ensemble
from .torus import build_spectrum

__all__ = ["run_cli", "main"]

_DEFAULTS = {
    "dim": 1,
    "group_n": 2,
    "sobolev_k": 2,
    "modes": 16,
    "grid": 64,
    "steps": 256,
    "t_end": 1.0,
    "samples": 1,
    "seed": 0,
    "stream_id": 0,
    "workers": 1,
    "lattice": None,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--dim", type=int, help="torus dimension d")
    sub.add_argument("--group-n", type=int, dest="group_n", help="SU(n) rank parameter")
    sub.add_argument("--sobolev-k", type=int, dest="sobolev_k", help="Sobolev order k")
    sub.add_argument("--modes", type=int, help="per-axis frequency cutoff M_max")
    sub.add_argument("--grid", type=int, help="grid points per axis P")
    sub.add_argument("--steps", type=int, help="number of time steps")
    sub.add_argument("--t-end", type=float, dest="t_end", help="terminal time in (0, 1]")
    sub.add_argument("--samples", type=int, help="number of samples")
    sub.add_argument("--seed", type=int, help="root seed")
    sub.add_argument("--out", type=str, help="output path stem")
    sub.add_argument("--config", type=str, help="JSON config file; flags override")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatcurrents",
        description="Heat-kernel measures on current groups over the torus",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_sample = subs.add_parser("sample", help="draw one terminal field")
    _add_common(p_sample)
    p_sample.add_argument(
        "--stream-id", type=int, dest="stream_id", help="RNG substream id (default 0)"
    )

    p_ens = subs.add_parser("ensemble", help="draw an ensemble of terminal fields")
    _add_common(p_ens)
    p_ens.add_argument(
        "--workers", type=int, help="worker threads (content is worker-independent)"
    )

    p_verify = subs.add_parser("verify", help="run diagnostics, emit JSON report")
    _add_common(p_verify)
    p_verify.add_argument(
        "--check",
        action="append",
        choices=sorted(CHECK_NAMES),
        help="named check (repeatable; default: all)",
    )

    p_coc = subs.add_parser("cocycle", help="evaluate the cocycle on stored fields")
    _add_common(p_coc)
    p_coc.add_argument("--eta", type=str, required=True, help=".npy coefficient field")
    p_coc.add_argument("--eta1", type=str, required=True, help=".npy coefficient field")

    p_ext = subs.add_parser("extend", help="sample the lifted measure (field, fiber)")
    _add_common(p_ext)
    p_ext.add_argument(
        "--stream-id", type=int, dest="stream_id", help="RNG substream id (default 0)"
    )
    return parser


def _resolve(args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        raw = json.loads(Path(args.config).read_text())
        unknown = set(raw) - set(_DEFAULTS) - {"out"}
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(raw)
    for key in list(_DEFAULTS) + ["out"]:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return cfg


def _make_sde_config(cfg: dict) -> SdeConfig:
    basis = build_spectrum(cfg["dim"], cfg["grid"], cfg["modes"])
    lie = build_basis(cfg["group_n"])
    spec = CovarianceSpec(k=cfg["sobolev_k"], basis=basis, lie=lie)
    return SdeConfig(
        spec=spec, n_steps=cfg["steps"], t_end=cfg["t_end"], seed=cfg["seed"]
    )


def _manifest(cfg: dict, n_samples: int) -> EnsembleManifest:
    return EnsembleManifest(
        d=cfg["dim"],
        n=cfg["group_n"],
        k=cfg["sobolev_k"],
        m_max=cfg["modes"],
        p=cfg["grid"],
        n_steps=cfg["steps"],
        t_end=cfg["t_end"],
        n_samples=n_samples,
        seed=cfg["seed"],
        lattice=cfg.get("lattice"),
    )


def _require_out(cfg: dict) -> str:
    out = cfg.get("out")
    if not out:
        raise ValueError("--out is required for this subcommand")
    return out


def _lattice_from_config(cfg: dict, rank: int) -> LatticeSpec:
    raw = cfg.get("lattice")
    if raw is None:
        return LatticeSpec.identity(rank)
    gen = np.asarray(raw, dtype=float)
    if gen.shape != (rank, rank):
        raise ValueError(
            f"lattice generators must be {rank}x{rank} for this configuration, "
            f"got shape {gen.shape}"
        )
    return LatticeSpec(generators=gen)


def _cmd_sample(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = _require_out(cfg)
    sde_cfg = _make_sde_config(cfg)
    state = sample_field(sde_cfg, stream=substream(cfg["seed"], cfg["stream_id"]))
    manifest = _manifest(cfg, 1)
    write_ensemble(out, manifest, state.mats[np.newaxis])
    print(f"wrote {out}.json and {out}.f64le")
    return 0


def _cmd_ensemble(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = _require_out(cfg)
    sde_cfg = _make_sde_config(cfg)
    handle = sample_ensemble(sde_cfg, cfg["samples"], n_workers=cfg["workers"])
    manifest = _manifest(cfg, cfg["samples"])
    write_ensemble(out, manifest, handle.mats)
    print(f"wrote {out}.json and {out}.f64le")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    names = args.check or sorted(CHECK_NAMES)
    samples = getattr(args, "samples", None)
    reports = []
    for name in names:
        reports.extend(run_check(name, seed=cfg["seed"], n_samples=samples))
    payload = reports_to_json(reports)
    sys.stdout.write(payload.decode("utf-8"))
    if cfg.get("out"):
        Path(cfg["out"]).write_bytes(payload)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_cocycle(args: argparse.Namespace) -> int:
    from .extension import cocycle

    cfg = _resolve(args)
    lie = build_basis(cfg["group_n"])
    eta_c = np.load(args.eta)
    eta1_c = np.load(args.eta1)
    if eta_c.shape != eta1_c.shape:
        raise ValueError(
            f"field shapes differ: {eta_c.shape} vs {eta1_c.shape}"
        )
    if eta_c.shape[-1] != lie.dim:
        raise ValueError(
            f"fields have {eta_c.shape[-1]} algebra coefficients, su({lie.n}) "
            f"needs {lie.dim}"
        )
    dim = eta_c.ndim - 1
    basis = build_spectrum(dim, eta_c.shape[0], cfg["modes"])
    vec = cocycle(
        basis.grid,
        AlgebraField(coeffs=eta_c, lie=lie),
        AlgebraField(coeffs=eta1_c, lie=lie),
    )
    print(json.dumps({"coords": vec.coords.tolist()}, sort_keys=True))
    return 0


def _cmd_extend(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    out = _require_out(cfg)
    sde_cfg = _make_sde_config(cfg)
    rank = cfg["dim"] * (cfg["group_n"] ** 2 - 1)
    lattice = _lattice_from_config(cfg, rank)
    n_samples = cfg["samples"]
    base = cfg["stream_id"]

    grid_shape = sde_cfg.spec.basis.grid.shape
    n = cfg["group_n"]
    mats = np.empty((n_samples,) + grid_shape + (n, n), dtype=complex)
    central = np.empty((n_samples, rank))
    for i in range(n_samples):
        mats[i] = sample_field(sde_cfg, stream=substream(cfg["seed"], base + i)).mats
        central[i] = haar_sample(
            lattice, substream(cfg["seed"], EXTENSION_CENTRAL_STREAM + base + i)
        ).coords
    cfg["lattice"] = lattice.generators.tolist()
    manifest = _manifest(cfg, n_samples)
    write_ensemble(out, manifest, mats)
    central_doc = {"central": central.tolist()}
    Path(out + ".central.json").write_text(
        json.dumps(central_doc, indent=2, sort_keys=True) + "\n"
    )
    print(f"wrote {out}.json, {out}.f64le and {out}.central.json")
    return 0


_COMMANDS = {
    "sample": _cmd_sample,
    "ensemble": _cmd_ensemble,
    "verify": _cmd_verify,
    "cocycle": _cmd_cocycle,
    "extend": _cmd_extend,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
