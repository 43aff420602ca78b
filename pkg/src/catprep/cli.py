"""Command-line front end.

Subcommands: scan | prepare | tomo, each driven by a single JSON config
document plus an output directory. Physical quantities carry explicit unit
suffixes in key names (theta_rad, q_center_snu, delta_snu, squeezing_db) to
prevent convention drift. All floats are serialized with 17 significant
digits and no timestamps are written, so reruns are byte-identical.

Exit codes: 0 success, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .fock import fidelity, mean_photon_number, purity
from .homodyne import Conditioning, condition, condition_tail
from .rsp import (
    DEFAULT_TARGETS,
    TABLE1,
    TargetSpec,
    bloch_embed,
    fidelity_vs_delta,
    fidelity_vs_eta,
    fidelity_vs_q,
    heralded_rate,
    target_state,
)
from .states import ResourceParams, hybrid_entangled
from .tomography import (
    TomoConfig,
    default_phase_set,
    fidelity_to_truth,
    mle_reconstruct,
    sample_homodyne,
    write_records,
)
from .wigner import (
    grid_metadata,
    negativity_min,
    wigner_grid,
    wigner_point,
    write_grid_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    """Invalid or inconsistent configuration document."""


def _fmt_json(value, indent: int = 0) -> str:
    pad = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = sorted(value.items())
        inner = ",\n".join(
            f'{pad}  {json.dumps(k)}: {_fmt_json(v, indent + 1)}' for k, v in items
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if len(value) == 0:
            return "[]"
        inner = ",\n".join(f"{pad}  {_fmt_json(v, indent + 1)}" for v in value)
        return "[\n" + inner + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(value)!r}")


def write_json(obj, path) -> None:
    with open(path, "w") as fh:
        fh.write(_fmt_json(obj))
        fh.write("\n")


def write_scan_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["param", "target", "fidelity"])
        for row in rows:
            writer.writerow(
                [f"{row['param']:.17g}", row["target"], f"{row['fidelity']:.17g}"]
            )


def _rho_pairs(mat: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in mat.ravel()]


def load_config(path) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def _parse_grid(node, name: str) -> np.ndarray:
    if isinstance(node, list):
        grid = np.asarray(node, dtype=float)
    elif isinstance(node, dict):
        try:
            grid = np.linspace(float(node["start"]), float(node["stop"]), int(node["num"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: need start/stop/num or a list") from exc
    else:
        raise ConfigError(f"{name}: need start/stop/num or a list")
    if grid.size == 0:
        raise ConfigError(f"{name}: grid is empty")
    if np.any(np.diff(grid) < 0):
        raise ConfigError(f"{name}: grid must be sorted ascending")
    return grid


def _parse_resource(cfg: dict) -> ResourceParams:
    node = cfg.get("resource", {})
    try:
        return ResourceParams(
            model=node.get("model", "experimental"),
            alpha=float(node.get("alpha", 0.7)),
            squeezing_db=float(node.get("squeezing_db", 3.0)),
            weight_dv=float(node.get("weight_dv", 0.5)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"resource: {exc}") from exc


def _parse_target(node, default_alpha: float) -> TargetSpec:
    if not isinstance(node, dict) or "kind" not in node:
        raise ConfigError("target: need an object with a 'kind' key")
    try:
        return TargetSpec(
            kind=node["kind"],
            alpha=float(node.get("alpha", default_alpha)),
            c_plus=complex(*node["c_plus"]) if "c_plus" in node else 0j,
            c_minus=complex(*node["c_minus"]) if "c_minus" in node else 0j,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"target: {exc}") from exc


def _parse_dim(cfg: dict) -> int:
    dim = cfg.get("dim", 30)
    if not isinstance(dim, int) or dim < 4:
        raise ConfigError("dim must be an integer >= 4")
    return dim


def cmd_scan(cfg: dict, out_dir) -> int:
    dim = _parse_dim(cfg)
    params = _parse_resource(cfg)
    theta = float(cfg.get("theta_rad", 0.0))
    q_grid = _parse_grid(cfg.get("q_grid_snu", {"start": -3.0, "stop": 3.0, "num": 121}), "q_grid_snu")
    if "targets" in cfg:
        if not cfg["targets"]:
            raise ConfigError("targets: empty target list")
        targets = [_parse_target(t, params.alpha) for t in cfg["targets"]]
    else:
        targets = list(DEFAULT_TARGETS)
    eta_grid = _parse_grid(cfg.get("eta_grid", {"start": 0.5, "stop": 1.0, "num": 26}), "eta_grid")
    eta_scan = cfg.get(
        "eta_scan",
        [
            {"q_center_snu": 0.0, "target": {"kind": "cat_minus"}},
            {"q_center_snu": 1.14, "target": {"kind": "coherent_plus"}},
        ],
    )
    if not eta_scan:
        raise ConfigError("eta_scan: empty")
    eta_points = [
        (float(node.get("q_center_snu", 0.0)), _parse_target(node.get("target", {}), params.alpha))
        for node in eta_scan
    ]
    delta_grid = _parse_grid(
        cfg.get("delta_grid_snu", {"start": 0.0, "stop": 0.5, "num": 26}), "delta_grid_snu"
    )
    delta_scan = cfg.get("delta_scan", {"q_center_snu": 0.0, "target": {"kind": "cat_minus"}})
    delta_q = float(delta_scan.get("q_center_snu", 0.0))
    delta_target = _parse_target(delta_scan.get("target", {}), params.alpha)

    resource = hybrid_entangled(params, dim_b=dim)

    rows_c = fidelity_vs_q(resource, theta, q_grid, targets)
    write_scan_csv(rows_c, out_dir / "fig1c.csv")
    print(f"wrote fig1c.csv ({len(rows_c)} rows)")

    rows_d = []
    for q_center, target in eta_points:
        rows_d.extend(fidelity_vs_eta(resource, q_center, theta, eta_grid, target))
    write_scan_csv(rows_d, out_dir / "fig1d.csv")
    print(f"wrote fig1d.csv ({len(rows_d)} rows)")

    rows_e = fidelity_vs_delta(resource, delta_q, theta, delta_grid, delta_target)
    write_scan_csv(rows_e, out_dir / "fig1e.csv")
    print(f"wrote fig1e.csv ({len(rows_e)} rows)")
    return EXIT_OK


def _parse_conditioning(cfg: dict) -> tuple[Conditioning, bool]:
    node = cfg.get("conditioning", {})
    row_index = cfg.get("table1_row")
    if row_index is not None:
        try:
            row = TABLE1[int(row_index) - 1]
        except (IndexError, ValueError, TypeError) as exc:
            raise ConfigError(f"table1_row must be 1..{len(TABLE1)}") from exc
        tail = row.tail
        cond = Conditioning(
            theta_rad=row.theta_rad,
            q_center=row.q_center,
            delta=float(node.get("delta_snu", 0.2)),
            eta_a=float(node.get("eta_a", 1.0)),
        )
        return cond, tail
    try:
        cond = Conditioning(
            theta_rad=float(node.get("theta_rad", 0.0)),
            q_center=float(node.get("q_center_snu", 0.0)),
            delta=float(node.get("delta_snu", 0.2)),
            eta_a=float(node.get("eta_a", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"conditioning: {exc}") from exc
    return cond, bool(node.get("tail", False))


def cmd_prepare(cfg: dict, out_dir) -> int:
    dim = _parse_dim(cfg)
    params = _parse_resource(cfg)
    cond, tail = _parse_conditioning(cfg)
    bloch_alpha = float(cfg.get("bloch_alpha", params.alpha))
    wnode = cfg.get("wigner", {})
    w_min = float(wnode.get("min_snu", -6.0))
    w_max = float(wnode.get("max_snu", 6.0))
    w_step = float(wnode.get("step_snu", 0.05))
    if not (w_min < w_max and w_step > 0):
        raise ConfigError("wigner: need min_snu < max_snu and step_snu > 0")
    if "targets" in cfg:
        if not cfg["targets"]:
            raise ConfigError("targets: empty target list")
        targets = [_parse_target(t, params.alpha) for t in cfg["targets"]]
    else:
        targets = list(DEFAULT_TARGETS)
    row_index = cfg.get("table1_row")

    resource = hybrid_entangled(params, dim_b=dim)
    if tail:
        prep = condition_tail(resource, cond.theta_rad, cond.q_center, eta_a=cond.eta_a)
    else:
        prep = condition(resource, cond)
    rate = heralded_rate(prep.success_prob)

    fid_rows = []
    for spec in targets:
        entry = {
            "target": spec.kind,
            "alpha": spec.alpha,
            "fidelity_simulated": fidelity(prep.rho, target_state(spec, dim)),
            "fidelity_published": None,
        }
        if row_index is not None and TABLE1[int(row_index) - 1].target.kind == spec.kind:
            entry["fidelity_published"] = TABLE1[int(row_index) - 1].published_fidelity
        fid_rows.append(entry)

    state_doc = {
        "dim": dim,
        "rho": _rho_pairs(prep.rho.mat),
        "success_prob": prep.success_prob,
        "success_is_density": prep.success_is_density,
        "heralded_rate_hz": rate,
        "conditioning": {
            "theta_rad": cond.theta_rad,
            "q_center_snu": cond.q_center,
            "delta_snu": cond.delta,
            "eta_a": cond.eta_a,
            "tail": tail,
        },
        "purity": purity(prep.rho),
        "mean_photon_number": mean_photon_number(prep.rho),
        "fidelities": fid_rows,
    }
    write_json(state_doc, out_dir / "state.json")

    coords = bloch_embed(prep.rho, bloch_alpha)
    write_json(
        {
            "phi_polar_rad": coords.phi_polar,
            "varphi_azimuth_rad": coords.varphi_azimuth,
            "d": coords.d,
            "max_fidelity": coords.max_fidelity,
            "subspace_weight": coords.subspace_weight,
            "alpha": bloch_alpha,
        },
        out_dir / "bloch.json",
    )

    n_pts = int(round((w_max - w_min) / w_step)) + 1
    axis = np.linspace(w_min, w_max, n_pts)
    grid = wigner_grid(prep.rho, axis, axis)
    write_grid_csv(grid, out_dir / "wigner.csv")
    meta = grid_metadata(grid, dim, f"conditioned q={cond.q_center:g} theta={cond.theta_rad:g}")
    meta["w_origin"] = wigner_point(prep.rho, 0.0, 0.0)
    meta["negativity_min"] = negativity_min(grid)
    write_json(meta, out_dir / "wigner.json")

    print(f"success_prob = {prep.success_prob:.6g}"
          + (" (density)" if prep.success_is_density else ""))
    print(f"heralded_rate_hz = {rate:.6g}")
    for entry in fid_rows:
        line = f"F[{entry['target']}] = {entry['fidelity_simulated']:.4f} (simulated)"
        if entry["fidelity_published"] is not None:
            line += f" vs {entry['fidelity_published']:.2f} (published)"
        print(line)
    return EXIT_OK


def cmd_tomo(cfg: dict, out_dir, seed_override=None) -> int:
    dim = _parse_dim(cfg)
    params = _parse_resource(cfg)
    if "truth" not in cfg:
        raise ConfigError("tomo: need a 'truth' target")
    truth_spec = _parse_target(cfg["truth"], params.alpha)
    n_samples = cfg.get("n_samples", 50_000)
    if not isinstance(n_samples, int) or n_samples < 1:
        raise ConfigError("n_samples must be a positive integer")
    eta = float(cfg.get("eta", 1.0))
    if not 0 < eta <= 1:
        raise ConfigError("eta must lie in (0, 1]")
    seed = int(cfg.get("seed", 0)) if seed_override is None else int(seed_override)
    tnode = cfg.get("tomo", {})
    try:
        tomo_cfg = TomoConfig(
            dim_recon=int(tnode.get("dim_recon", 12)),
            eta_correction=float(tnode.get("eta_correction", eta)),
            bin_width=float(tnode.get("bin_width_snu", 0.1)),
            phase_set=default_phase_set(int(tnode.get("n_phases", 12))),
            max_iters=int(tnode.get("max_iters", 2000)),
            tol=float(tnode.get("tol", 1e-10)),
            q_max=float(tnode.get("q_max_snu", 10.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"tomo: {exc}") from exc

    truth = target_state(truth_spec, dim)
    records = sample_homodyne(truth, tomo_cfg.phase_set, n_samples, eta=eta, seed=seed)
    write_records(records, out_dir / "records.csv")

    result = mle_reconstruct(records, tomo_cfg)
    write_json(
        {
            "dim": tomo_cfg.dim_recon,
            "rho": _rho_pairs(result.state.mat),
            "iterations": result.iterations,
            "log_likelihood": result.log_likelihood,
            "converged": result.converged,
        },
        out_dir / "recon.json",
    )

    fid = fidelity_to_truth(result.state, truth)
    w_origin = wigner_point(result.state, 0.0, 0.0)
    report = {
        "truth": {"kind": truth_spec.kind, "alpha": truth_spec.alpha},
        "n_samples": n_samples,
        "eta": eta,
        "eta_correction": tomo_cfg.eta_correction,
        "seed": seed,
        "fidelity_recon_truth": fid,
        "w_origin_recon": w_origin,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    write_json(report, out_dir / "report.json")
    print(f"F(recon, truth) = {fid:.4f}, W(0,0) = {w_origin:.4f}, "
          f"{result.iterations} iterations{'' if result.converged else ' (not converged)'}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="catprep",
        description="Conditional preparation of cat-state qubits: scans, "
        "state preparation, and homodyne tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("scan", "fidelity scans over q, efficiency, and window width"),
        ("prepare", "condition a single state; Bloch and Wigner outputs"),
        ("tomo", "synthetic homodyne records and MLE reconstruction"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config document")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
    args = parser.parse_args(argv)

    out_dir = Path(args.out)
    try:
        cfg = load_config(args.config)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "scan":
            return cmd_scan(cfg, out_dir)
        if args.command == "prepare":
            return cmd_prepare(cfg, out_dir)
        return cmd_tomo(cfg, out_dir, seed_override=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, AssertionError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
