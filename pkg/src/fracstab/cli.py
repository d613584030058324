"""Command-line front end: r0, simulate, verify-lemma, report.

Exit codes: 0 all certificates pass, 1 a certificate fails,
2 configuration/domain error, 3 solver divergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .caputo import FractionalOrder, SampledSignal, UniformGrid
from .config import ExperimentConfig, load_config
from .csvio import write_csv
from .errors import (
    ConfigError,
    ContractError,
    DivergenceError,
    DomainError,
    NoEndemicEquilibriumError,
)
from .lyapunov import (
    GFunction,
    caputo_of_functional,
    decrescence_certificate,
    default_tolerance,
    identity_g,
    lemma_certificate,
)
from .models import sica, teiv
from .solver import solve_fde_abm
from .svgplot import plot_panels

EXIT_PASS = 0
EXIT_CERT_FAIL = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3


def _g_registry() -> dict:
    return {
        "identity": identity_g,
        "sqrt": lambda: GFunction(math.sqrt, "sqrt"),
        "log1p": lambda: GFunction(math.log1p, "log1p"),
    }


def _model_of(cfg: ExperimentConfig):
    if cfg.model == "sica":
        return sica.sica_model(cfg.params)
    return teiv.teiv_model(cfg.params)


def _grid_of(cfg: ExperimentConfig) -> UniformGrid:
    return UniformGrid(t0=0.0, h=cfg.t_end / cfg.steps, n_steps=cfg.steps)


def _build_functional(cfg: ExperimentConfig, kind: str):
    if kind == "v0":
        return sica.sica_v0(cfg.params)
    if kind == "v1":
        return sica.sica_v1(cfg.params)
    eqs = teiv.teiv_equilibria(cfg.params)
    return teiv.teiv_lyapunov(cfg.params, eqs[-1])


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2)
    print(text)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")


def cmd_r0(cfg: ExperimentConfig, out_path: str | None) -> int:
    if cfg.model == "sica":
        p = cfg.params
        doc = {
            "model": "sica",
            "r0": sica.sica_r0(p),
            "endemic_threshold": sica.endemic_threshold(p),
            "disease_free": list(sica.sica_disease_free(p)),
        }
        try:
            doc["endemic"] = list(sica.sica_endemic(p))
        except NoEndemicEquilibriumError:
            doc["endemic"] = None
    else:
        p = cfg.params
        eqs = teiv.teiv_equilibria(p)
        doc = {
            "model": "teiv",
            "r0": teiv.teiv_r0(p),
            "infection_free": list(eqs[0]),
            "chronic": list(eqs[1]) if len(eqs) > 1 else None,
        }
    _emit(doc, out_path)
    return EXIT_PASS


def cmd_simulate(cfg: ExperimentConfig, out_dir: str) -> int:
    os.makedirs(out_dir, exist_ok=True)
    model = _model_of(cfg)
    grid = _grid_of(cfg)
    times = grid.times()
    written = []
    try:
        functionals = {kind: _build_functional(cfg, kind) for kind in cfg.functionals}
        trajectories = {}
        for order in cfg.orders:
            traj = solve_fde_abm(model, order, np.asarray(cfg.initial_state), grid)
            trajectories[order.alpha] = traj
            header = ["t"] + list(model.state_labels)
            columns = [times] + [traj.component(i) for i in range(model.dimension)]
            for kind, fn in functionals.items():
                vals = fn.values_along(traj.states)
                header += [f"V_{kind}", f"dcaputo_V_{kind}"]
                columns += [vals, caputo_of_functional(fn, traj).values]
            path = os.path.join(out_dir, f"trajectory_order_{order.alpha:g}.csv")
            write_csv(path, header, columns)
            written.append(path)

        panels = [
            (label, [trajectories[o.alpha].component(i) for o in cfg.orders])
            for i, label in enumerate(model.state_labels)
        ]
        svg_path = os.path.join(out_dir, "states.svg")
        plot_panels(svg_path, times, panels, [f"order={o.alpha:g}" for o in cfg.orders])
        written.append(svg_path)
    except DivergenceError as exc:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        print(json.dumps({"error": "divergence", "node": exc.node}))
        return EXIT_DIVERGENCE
    print(json.dumps({"written": written}, indent=2))
    return EXIT_PASS


def cmd_verify_lemma(cfg, coordinate, g_label, xbar, order_value, out_path) -> int:
    registry = _g_registry()
    if g_label not in registry:
        raise ConfigError(f"unknown g label {g_label!r}; choose from {sorted(registry)}")
    g = registry[g_label]()
    if xbar <= 0:
        raise ConfigError("xbar must be strictly positive")
    order = FractionalOrder(order_value) if order_value is not None else cfg.orders[0]

    model = _model_of(cfg)
    if coordinate not in model.state_labels:
        raise ConfigError(
            f"unknown coordinate {coordinate!r}; choose from {model.state_labels}"
        )
    idx = model.state_labels.index(coordinate)
    grid = _grid_of(cfg)
    try:
        traj = solve_fde_abm(model, order, np.asarray(cfg.initial_state), grid)
    except DivergenceError as exc:
        print(json.dumps({"error": "divergence", "node": exc.node}))
        return EXIT_DIVERGENCE

    samples = traj.component(idx)
    nonpos = np.flatnonzero(samples <= 0)
    if nonpos.size:
        raise ConfigError(f"coordinate {coordinate} is non-positive at node {int(nonpos[0])}")
    cert = lemma_certificate(SampledSignal(grid, samples), g, xbar, order)
    _emit(cert.to_json_dict(), out_path)
    return EXIT_PASS if cert.passed else EXIT_CERT_FAIL


def _relative_distance(state: np.ndarray, target: np.ndarray) -> float:
    scale = max(float(np.abs(target).max()), 1.0)
    return float(np.abs(state - target).max()) / scale


def cmd_report(cfg: ExperimentConfig, out_path: str | None) -> int:
    model = _model_of(cfg)
    grid = _grid_of(cfg)
    p = cfg.params

    if cfg.model == "sica":
        r0 = sica.sica_r0(p)
        endemic_regime = sica.endemic_threshold(p) > 1.0
        target = sica.sica_endemic(p) if endemic_regime else sica.sica_disease_free(p)
        functional = sica.sica_v1(p) if endemic_regime else sica.sica_v0(p)
        consistent = sica.r0_spectral_consistent(p)
    else:
        r0 = teiv.teiv_r0(p)
        endemic_regime = r0 > 1.0
        eqs = teiv.teiv_equilibria(p)
        target = eqs[-1] if endemic_regime else eqs[0]
        functional = teiv.teiv_lyapunov(p, target)
        consistent = teiv.r0_spectral_consistent(p)
    regime = "endemic" if endemic_regime else "disease-free"

    per_order = []
    all_certified = True
    for order in cfg.orders:
        try:
            traj = solve_fde_abm(model, order, np.asarray(cfg.initial_state), grid)
        except DivergenceError as exc:
            print(json.dumps({"error": "divergence", "node": exc.node, "order": order.alpha}))
            return EXIT_DIVERGENCE
        dV = caputo_of_functional(functional, traj)
        scale = float(np.abs(functional.values_along(traj.states)).max())
        cert = decrescence_certificate(dV, default_tolerance(grid, order, max(scale, 1.0)))
        final_dist = _relative_distance(traj.states[-1], target)
        dists = np.abs(traj.states - target).max(axis=1) / max(float(np.abs(target).max()), 1.0)
        inside = np.flatnonzero(dists <= 0.05)
        entry_time = float(grid.times()[inside[0]]) if inside.size else None

        if not consistent:
            verdict = f"{regime}, r0/spectral inconsistency"
        elif cert.passed:
            verdict = f"{regime}, certified"
        else:
            verdict = f"{regime}, uncertified"
        all_certified = all_certified and consistent and cert.passed
        per_order.append({
            "order": order.alpha,
            "verdict": verdict,
            "decrescence": cert.to_json_dict(),
            "final_relative_distance": final_dist,
            "ball_entry_time_5pct": entry_time,
        })

    doc = {
        "model": cfg.model,
        "r0": r0,
        "regime": regime,
        "r0_spectral_consistent": consistent,
        "target_equilibrium": list(target),
        "per_order": per_order,
    }
    _emit(doc, out_path)
    return EXIT_PASS if all_certified else EXIT_CERT_FAIL


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracstab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    for name in ("r0", "simulate", "verify-lemma", "report"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        if name == "simulate":
            sp.add_argument("--out", required=True, help="output directory")
        else:
            sp.add_argument("--out", default=None, help="optional JSON output path")
        if name == "verify-lemma":
            sp.add_argument("--coordinate", required=True, help="state label, e.g. S")
            sp.add_argument("--g", default="identity", help="shape function label")
            sp.add_argument("--xbar", type=float, required=True)
            sp.add_argument("--order", type=float, default=None)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "r0":
            return cmd_r0(cfg, args.out)
        if args.command == "simulate":
            return cmd_simulate(cfg, args.out)
        if args.command == "verify-lemma":
            return cmd_verify_lemma(cfg, args.coordinate, args.g, args.xbar, args.order, args.out)
        return cmd_report(cfg, args.out)
    except (ConfigError, ContractError, DomainError, NoEndemicEquilibriumError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
