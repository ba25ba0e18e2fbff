"""Batch command-line front door.

Subcommands: solve-radial, matrix-element, crystal, pulse dump, simulate,
optimize, sweep-decay, reproduce. Every run writes machine-readable CSV/JSON
next to a short human-readable summary on stdout; numeric inputs are in
2*pi x MHz and microseconds throughout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .angular import angular_matrix_element
from .atomic import (ElectronicState, GridConfig, radial_matrix_element,
                     radial_matrix_element_si, solve_radial)
from .config import OptimizerConfig, PulseConfig, RunConfig
from .constants import hartree_to_ev, hartree_to_inv_cm
from .crystal import (critical_anisotropy, distance_scaling_fit,
                      equilibrium_positions, solve_crystal, TrapParams)
from .dynamics import entangling_phase_series, evolve, extract_phases, full_source
from .errors import RydionError
from .metrics import GateOutcome, decay_fidelity_estimate
from .model import BASIS, GateParams
from .optimize import (REGIMES, TABLE_OPTIMA, decay_sweep, evaluate_gate,
                       optimize_protocol)
from .species import available_species, get_species

TRAJECTORY_SCHEMA_VERSION = 1
# file-safe population column labels: m = |->, p = |+>
_POP_LABELS = [lab.replace("-", "m").replace("+", "p") for lab in BASIS.labels]

TABLE1_REFERENCE = {
    ("A", "conservative"): 0.9681, ("B", "conservative"): 0.9998,
    ("C", "conservative"): 0.8436, ("A", "optimistic"): 0.9772,
    ("B", "optimistic"): 0.9999, ("C", "optimistic"): 0.7495,
}


def _parse_state(spec: str) -> ElectronicState:
    """'46S1/2:-1/2' or '46S1/2:-0.5' -> ElectronicState."""
    try:
        term, mj_text = spec.split(":")
        if "/" in mj_text:
            num, den = mj_text.split("/")
            mj = float(num) / float(den)
        else:
            mj = float(mj_text)
        return ElectronicState.from_label(term, mj)
    except (ValueError, IndexError) as exc:
        raise RydionError(f"cli: cannot parse state {spec!r}; expected e.g. "
                          "'46S1/2:-1/2'") from exc


def _write_json(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _psi0():
    return BASIS.superposition(*[(lab, 0.5) for lab in ("00", "01", "10", "11")])


def write_trajectory_csv(path: Path, traj, phase_floor: float = 1e-6) -> None:
    """Fixed, versioned column order: t, 16 populations, 4 unwrapped phases,
    the entangling phase series, and the norm."""
    pops = traj.populations()
    phases = extract_phases(traj, phase_floor=phase_floor)
    phi_star = entangling_phase_series(traj, phase_floor)
    cols = [traj.times] + [pops[:, i] for i in range(16)]
    cols += [phases[lab] for lab in ("00", "01", "10", "11")]
    cols += [phi_star, traj.norms()]
    names = (["t_us"] + [f"p_{lab}" for lab in _POP_LABELS]
             + [f"phi_{lab}" for lab in ("00", "01", "10", "11")]
             + ["phi_star", "norm"])
    path.parent.mkdir(parents=True, exist_ok=True)
    header = (f"rydion trajectory schema v{TRAJECTORY_SCHEMA_VERSION}; "
              "populations over the two-ion product basis (m=|->, p=|+>), "
              "phases unwrapped and frozen below the population floor\n"
              + ",".join(names))
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=header)


def _simulation_pieces(cfg: RunConfig):
    regime = cfg.resolve_regime()
    params = GateParams.from_mhz(regime.interaction_mhz, regime.rabi_mw_mhz,
                                 regime.tau_us, cfg.gamma_r_inv_us)
    shape = regime.pulse(cfg.protocol, cfg.pulse_params())
    return regime, params, shape


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_solve_radial(args) -> int:
    species = get_species(args.species)
    state = _parse_state(args.state)
    grid = GridConfig(points=args.grid_points) if args.grid_points else GridConfig()
    wf = solve_radial(state, species, grid)
    print(f"{species.name} {state.label}:")
    print(f"  E = {wf.energy:.10f} Hartree = {hartree_to_inv_cm(wf.energy):.2f} cm^-1 "
          f"= {hartree_to_ev(wf.energy):.6f} eV")
    print(f"  nodes = {wf.node_count}, norm = {wf.norm():.9f}")
    if args.out:
        wf.to_csv(args.out)
        print(f"  wavefunction written to {args.out}")
    return 0


def _cmd_matrix_element(args) -> int:
    species = get_species(args.species)
    bra, ket = _parse_state(args.bra), _parse_state(args.ket)
    value_au = radial_matrix_element(bra, ket, args.k, species)
    value_si = radial_matrix_element_si(bra, ket, args.k, species)
    print(f"<{bra.label}| r^{args.k} |{ket.label}> ({species.name}):")
    print(f"  radial = {value_au:.6e} a0^{args.k} = {value_si:.6e} m^{args.k}")
    if args.mk is not None:
        ang = angular_matrix_element(bra, args.k, args.mk, ket)
        print(f"  angular <Y_{args.k}^{args.mk}> = {ang:.12f}")
        print(f"  product = {value_si * ang:.6e} m^{args.k}")
    return 0


def _cmd_crystal(args) -> int:
    species = get_species(args.species)
    trap = TrapParams(omega=2 * np.pi * args.omega_mhz * 1e6,
                      gamma=args.gamma, N=args.n, mass=species.mass_kg)
    sol = solve_crystal(trap)
    payload = {
        "N": trap.N,
        "omega_2pi_mhz": args.omega_mhz,
        "gamma": trap.gamma,
        "species": species.name,
        "positions_dimensionless": sol.positions.tolist(),
        "positions_um": (sol.positions_m * 1e6).tolist(),
        "length_scale_um": sol.length_scale * 1e6,
        "oscillator_length_nm": sol.oscillator_length * 1e9,
        "modes": {
            "gp_squared": sol.modes.gp_squared.tolist(),
            "axial_squared": sol.modes.axial_squared.tolist(),
            "radial_squared": sol.modes.radial_squared.tolist(),
            "vectors": sol.modes.vectors.tolist(),
            "has_imaginary_radial": sol.modes.has_imaginary_radial,
        },
        "critical_anisotropy": critical_anisotropy(trap.N) if trap.N >= 2 else None,
        "chain_stable": sol.chain_stable,
    }
    text = json.dumps(payload, indent=2)
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(text + "\n")
        print(f"crystal report written to {args.json}")
    else:
        print(text)
    if not sol.chain_stable:
        print("warning: gamma below the critical anisotropy, linear chain "
              "assumption invalid", file=sys.stderr)
    return 0


def _cmd_pulse_dump(args) -> int:
    cfg = _config_from_args(args)
    regime, params, shape = _simulation_pieces(cfg)
    ts = np.linspace(0.0, regime.tau_us, args.points)
    rows = [ts]
    if shape.per_ion:
        for ion in (1, 2):
            om, dl = shape.values(ts, ion=ion)
            rows += [om / (2 * np.pi), np.asarray(dl) / (2 * np.pi)]
        names = "t_us,omega_l_ion1_mhz,delta_l_ion1_mhz,omega_l_ion2_mhz,delta_l_ion2_mhz"
    else:
        om, dl = shape.values(ts)
        rows += [om / (2 * np.pi), np.asarray(dl) / (2 * np.pi)]
        names = "t_us,omega_l_mhz,delta_l_mhz"
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(out, np.column_stack(rows), delimiter=",",
               header=f"rydion pulse dump v{TRAJECTORY_SCHEMA_VERSION}\n{names}")
    print(f"pulse samples written to {out}")
    return 0


def _cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    regime, params, shape = _simulation_pieces(cfg)
    t0 = time.perf_counter()
    traj = evolve(full_source(params, shape), _psi0(), params.tau,
                  tol=cfg.integrator_tol, samples=cfg.samples)
    outcome = GateOutcome.from_trajectory(traj)
    estimate = None
    if cfg.gamma_r_inv_us > 0:
        traj0 = evolve(full_source(params.with_decay(0.0), shape), _psi0(),
                       params.tau, tol=cfg.integrator_tol, samples=cfg.samples)
        estimate = decay_fidelity_estimate(traj0, cfg.gamma_r_inv_us)
    prefix = Path(cfg.output_prefix)
    write_trajectory_csv(prefix.with_suffix(".trajectory.csv"), traj)
    summary = {
        "config": cfg.to_dict(),
        "results": outcome.summary(),
        "fidelity_estimate_decay": estimate,
        "meta": {"version": __version__, "integrator_steps": traj.n_steps,
                 "wall_time_s": time.perf_counter() - t0},
    }
    _write_json(prefix.with_suffix(".summary.json"), summary)
    print(f"F_sqr = {outcome.fidelity_sqr:.6f}  F_plain = {outcome.fidelity_plain:.6f}  "
          f"p_err = {outcome.population_error:.3e}  phi_err = {outcome.phase_error:.3e}")
    print(f"trajectory -> {prefix.with_suffix('.trajectory.csv')}")
    print(f"summary    -> {prefix.with_suffix('.summary.json')}")
    return 0


def _append_ndjson(path: Path, record: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("a") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def _cmd_optimize(args) -> int:
    cfg = _config_from_args(args)
    regime = cfg.resolve_regime()
    opt = cfg.optimizer
    t0 = time.perf_counter()
    best = optimize_protocol(cfg.protocol, regime, opt.objective,
                             warm_start=opt.warm_start, seeds=opt.seeds,
                             de_config=opt.de_config(opt.seeds[0]),
                             gamma_r=cfg.gamma_r_inv_us)
    record = {"config": cfg.to_dict(), "result": best.to_dict(),
              "version": __version__}
    log_path = Path(cfg.output_prefix).with_suffix(".optlog.ndjson")
    _append_ndjson(log_path, record)
    _write_json(Path(cfg.output_prefix).with_suffix(".summary.json"), record)
    print(f"best fidelity = {best.fidelity:.6f} at params {np.round(best.x, 4).tolist()} "
          f"(seed {best.seed}, {best.generations} generations, "
          f"{time.perf_counter() - t0:.1f}s)")
    print(f"log -> {log_path}")
    return 0


def _cmd_sweep_decay(args) -> int:
    cfg = _config_from_args(args)
    if not cfg.tau_grid_us:
        raise RydionError("cli: sweep-decay requires --tau-grid")
    if cfg.gamma_r_inv_us <= 0:
        raise RydionError("cli: sweep-decay requires --gamma-r > 0")
    regime = cfg.resolve_regime()
    points = decay_sweep(cfg.protocol, regime, cfg.tau_grid_us,
                         cfg.gamma_r_inv_us, cfg.optimizer.objective,
                         seeds=cfg.optimizer.seeds,
                         de_config=cfg.optimizer.de_config(cfg.optimizer.seeds[0]))
    log_path = Path(cfg.output_prefix).with_suffix(".sweep.ndjson")
    for point in points:
        _append_ndjson(log_path, {"config": cfg.to_dict(),
                                  "result": point.to_dict()})
        print(f"tau = {point.tau_us:.3f} us: F = {point.fidelity:.6f} "
              f"(estimate {point.fidelity_estimate_decay:.6f})")
    print(f"log -> {log_path}")
    return 0


# ---------------------------------------------------------------------------
# reproduce targets


def _reproduce_table1(args, out_dir: Path) -> int:
    protocols = [args.protocol] if args.protocol else ["A", "B", "C"]
    regimes = [args.regime] if args.regime else ["conservative", "optimistic"]
    rows = []
    for regime in regimes:
        for protocol in protocols:
            params = TABLE_OPTIMA.get((protocol, regime), ())
            res = evaluate_gate(protocol, REGIMES[regime], params,
                                objective_kind="sqr")
            ref = TABLE1_REFERENCE[(protocol, regime)]
            rows.append({"protocol": protocol, "regime": regime,
                         "params_mhz": list(params), "fidelity": res.fidelity,
                         "population_error": res.population_error,
                         "phase_error": res.phase_error,
                         "reference_fidelity": ref})
            print(f"{protocol}/{regime:12s}: F = {res.fidelity * 100:7.4f} %  "
                  f"(reference {ref * 100:.2f} %)  "
                  f"p_err = {res.population_error:.2e}  "
                  f"phi_err = {res.phase_error:.2e}")
    _write_json(out_dir / "table1.json", {"rows": rows})
    print(f"-> {out_dir / 'table1.json'}")
    return 0


def _reproduce_fig_protocol(protocol: str, out_dir: Path) -> int:
    for regime_name in ("conservative", "optimistic"):
        params = TABLE_OPTIMA[(protocol, regime_name)]
        regime = REGIMES[regime_name]
        gate = regime.gate_params()
        shape = regime.pulse(protocol, params)
        traj = evolve(full_source(gate, shape), _psi0(), gate.tau, tol=1e-9)
        write_trajectory_csv(out_dir / f"gate_{protocol}_{regime_name}.csv", traj)
        print(f"{protocol}/{regime_name}: trajectory -> "
              f"{out_dir / f'gate_{protocol}_{regime_name}.csv'}")
    return 0


def _reproduce_fig_adiabatic(out_dir: Path) -> int:
    from .dynamics import CallableSource
    from .model import reduce_h10, reduce_h11

    regime = REGIMES["conservative"]
    gate = regime.gate_params()
    shape = regime.pulse("B", TABLE_OPTIMA[("B", "conservative")])
    traj = evolve(full_source(gate, shape), _psi0(), gate.tau, tol=1e-9)
    write_trajectory_csv(out_dir / "adiabatic_full.csv", traj)

    def ratios(t):
        om, dl = shape.values(t)
        eps_p = (dl + gate.rabi_mw / 2) / dl
        eps_m = (dl - gate.rabi_mw / 2) / dl
        return eps_p, eps_m, om / dl, gate.interaction / dl, dl

    def h11(t):
        eps_p, eps_m, delta, eta, dl = ratios(t)
        return dl * reduce_h11(eps_p, eps_m, delta, eta)

    def h10(t):
        eps_p, eps_m, delta, _, dl = ratios(t)
        return dl * reduce_h10(eps_p, eps_m, delta)

    t11 = evolve(CallableSource(h11, 3, labels=("--", "S-", "11")),
                 np.array([0.0, 0.0, 1.0], dtype=complex), gate.tau, tol=1e-9)
    t10 = evolve(CallableSource(h10, 2, labels=("-0", "10")),
                 np.array([0.0, 1.0], dtype=complex), gate.tau, tol=1e-9)
    eps = np.array([ratios(t)[:4] for t in traj.times])
    # reduced runs start from pure sector states; scale by |c_ab(0)|^2 = 1/4
    # so the columns overlay the full-model populations directly
    cols = np.column_stack([
        t11.times,
        0.25 * t11.population("--"), 0.25 * t11.population("S-"),
        0.25 * t11.population("11"),
        0.25 * t10.population("-0"), 0.25 * t10.population("10"),
        eps[:, 2] / eps[:, 0], eps[:, 3] / eps[:, 0],
    ])
    header = ("reduced-model populations (scaled to the four-state "
              "superposition start) plus adiabaticity ratios\n"
              "t_us,p_mm_red,p_Sm_red,p_11_red,p_m0_red,p_10_red,"
              "delta_over_eps_plus,eta_over_eps_plus")
    np.savetxt(out_dir / "adiabatic_reduced.csv", cols, delimiter=",",
               header=header)
    print(f"-> {out_dir / 'adiabatic_full.csv'}, {out_dir / 'adiabatic_reduced.csv'}")
    return 0


def _reproduce_fig_decay(args, out_dir: Path) -> int:
    gamma_r = 1.0 / 7.8
    rows = []
    for regime_name in ("conservative", "optimistic"):
        params = TABLE_OPTIMA[("B", regime_name)]
        res = evaluate_gate("B", REGIMES[regime_name], params, "sqr",
                            gamma_r=gamma_r, with_estimate=True)
        rows.append({"regime": regime_name, "tau_us": res.tau_us,
                     "mode": "re-evaluation", "fidelity": res.fidelity,
                     "estimate": res.fidelity_estimate_decay})
        print(f"B/{regime_name} with decay: F = {res.fidelity * 100:.4f} % "
              f"(estimate {res.fidelity_estimate_decay * 100:.4f} %)")
    if not args.fast:
        taus = args.tau_grid or (0.2, 0.3)
        points = decay_sweep("B", "optimistic", taus, gamma_r)
        for point in points:
            rows.append({"regime": "optimistic", "tau_us": point.tau_us,
                         "mode": "re-optimized", "fidelity": point.fidelity,
                         "estimate": point.fidelity_estimate_decay,
                         "params_mhz": [float(v) for v in point.x]})
            print(f"re-optimized tau = {point.tau_us}: F = {point.fidelity * 100:.4f} %")
    _write_json(out_dir / "fidelity_decay.json", {"gamma_r_inv_us": gamma_r,
                                                  "rows": rows})
    print(f"-> {out_dir / 'fidelity_decay.json'}")
    return 0


def _reproduce_fig_distances(out_dir: Path) -> int:
    ns = list(range(2, 121))
    gaps = []
    for n in ns:
        z = equilibrium_positions(n)
        d = np.diff(z)
        gaps.append((n, float(d.min()), float(d.mean()), float(d.max())))
    fits = distance_scaling_fit(ns)
    np.savetxt(out_dir / "equilibrium_distances.csv", np.array(gaps),
               delimiter=",", header="N,gap_min,gap_mean,gap_max")
    _write_json(out_dir / "distance_scaling_fits.json",
                {name: {"a": a, "b": b, "c": c}
                 for name, (a, b, c) in fits.items()})
    print(f"fits: {fits}")
    print(f"-> {out_dir / 'equilibrium_distances.csv'}")
    return 0


def _cmd_reproduce(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.target == "table1":
        return _reproduce_table1(args, out_dir)
    if args.target == "figA":
        return _reproduce_fig_protocol("A", out_dir)
    if args.target == "figB":
        return _reproduce_fig_protocol("B", out_dir)
    if args.target == "fig-adiabatic":
        return _reproduce_fig_adiabatic(out_dir)
    if args.target == "fig-decay":
        return _reproduce_fig_decay(args, out_dir)
    if args.target == "fig-distances":
        return _reproduce_fig_distances(out_dir)
    raise RydionError(f"cli: unknown reproduce target {args.target!r}")


# ---------------------------------------------------------------------------
# argument plumbing


def _config_from_args(args) -> RunConfig:
    if getattr(args, "config", None):
        cfg = RunConfig.from_file(args.config)
    else:
        cfg = RunConfig()
    # flags win over file values
    overrides = {
        "protocol": getattr(args, "protocol", None),
        "regime": getattr(args, "regime", None),
        "gamma_r_inv_us": getattr(args, "gamma_r", None),
        "integrator_tol": getattr(args, "tol", None),
        "samples": getattr(args, "samples", None),
        "output_prefix": getattr(args, "out_prefix", None),
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    pulse_flags = {
        "omega0_mhz": getattr(args, "omega0", None),
        "delta0_mhz": getattr(args, "delta0", None),
        "delta_mod_mhz": getattr(args, "delta_mod", None),
    }
    if any(v is not None for v in pulse_flags.values()):
        merged = cfg.pulse.__dict__ | {k: v for k, v in pulse_flags.items()
                                       if v is not None}
        cfg.pulse = PulseConfig(**merged)
    if getattr(args, "tau_grid", None):
        cfg.tau_grid_us = tuple(args.tau_grid)
    opt_flags = {
        "objective": getattr(args, "objective", None),
        "seeds": tuple(args.seeds) if getattr(args, "seeds", None) else None,
        "max_generations": getattr(args, "max_generations", None),
        "warm_start": (tuple(args.warm_start)
                       if getattr(args, "warm_start", None) else None),
    }
    if any(v is not None for v in opt_flags.values()):
        merged = cfg.optimizer.__dict__ | {k: v for k, v in opt_flags.items()
                                           if v is not None}
        cfg.optimizer = OptimizerConfig(**merged)
    # defaults for protocol C and for Table-1 pulses
    if cfg.protocol != "C" and cfg.pulse.omega0_mhz is None and cfg.regime:
        table = TABLE_OPTIMA.get((cfg.protocol, cfg.regime))
        if table and not getattr(args, "require_pulse", False):
            cfg.pulse = PulseConfig(*table) if len(table) == 3 else \
                PulseConfig(table[0], table[1])
    cfg.__post_init__()
    return cfg


def _csv_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _csv_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rydion",
        description="Trapped Rydberg ion CZ-gate simulation and pulse optimization")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-radial", help="solve the radial problem for one state")
    p.add_argument("--species", default="Sr+", choices=available_species())
    p.add_argument("--state", required=True, help="e.g. 46S1/2:-1/2")
    p.add_argument("--grid-points", type=int, default=None)
    p.add_argument("--out", default=None, help="write (r, Phi) CSV here")
    p.set_defaults(func=_cmd_solve_radial)

    p = sub.add_parser("matrix-element", help="radial (and angular) matrix elements")
    p.add_argument("--species", default="Sr+", choices=available_species())
    p.add_argument("--bra", required=True)
    p.add_argument("--ket", required=True)
    p.add_argument("--k", type=int, default=1, choices=(1, 2))
    p.add_argument("--mk", type=int, default=None)
    p.set_defaults(func=_cmd_matrix_element)

    p = sub.add_parser("crystal", help="chain equilibrium and phonon modes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--omega-mhz", type=float, default=1.0,
                   help="axial frequency in 2*pi x MHz")
    p.add_argument("--gamma", type=float, default=20.0)
    p.add_argument("--species", default="Sr+", choices=available_species())
    p.add_argument("--json", default=None, help="write the report here")
    p.set_defaults(func=_cmd_crystal)

    p = sub.add_parser("pulse", help="pulse-shape utilities")
    pulse_sub = p.add_subparsers(dest="pulse_command", required=True)
    d = pulse_sub.add_parser("dump", help="sample (t, Omega_L, Delta_L) to CSV")
    _add_run_flags(d)
    d.add_argument("--points", type=int, default=501)
    d.add_argument("--out", default="pulse.csv")
    d.set_defaults(func=_cmd_pulse_dump)

    p = sub.add_parser("simulate", help="evolve one gate and write trajectory data")
    _add_run_flags(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("optimize", help="differential-evolution pulse search")
    _add_run_flags(p)
    p.add_argument("--objective", choices=("sqr", "strict"), default=None)
    p.add_argument("--seeds", type=_csv_ints, default=None)
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--warm-start", type=_csv_floats, default=None)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("sweep-decay", help="re-optimize across gate times with decay")
    _add_run_flags(p)
    p.add_argument("--objective", choices=("sqr", "strict"), default=None)
    p.add_argument("--seeds", type=_csv_ints, default=None)
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--tau-grid", type=_csv_floats, default=None)
    p.set_defaults(func=_cmd_sweep_decay)

    p = sub.add_parser("reproduce", help="regenerate published tables/figures data")
    p.add_argument("target", choices=("table1", "figA", "figB", "fig-adiabatic",
                                      "fig-decay", "fig-distances"))
    p.add_argument("--regime", choices=tuple(REGIMES), default=None)
    p.add_argument("--protocol", choices=("A", "B", "C"), default=None)
    p.add_argument("--fast", action="store_true",
                   help="fig-decay: skip the re-optimization sweep")
    p.add_argument("--tau-grid", type=_csv_floats, default=None)
    p.add_argument("--out-dir", default="reproduce_out")
    p.set_defaults(func=_cmd_reproduce)

    return parser


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default=None, help="JSON run configuration file")
    p.add_argument("--protocol", choices=("A", "B", "C"), default=None)
    p.add_argument("--regime", choices=tuple(REGIMES), default=None)
    p.add_argument("--omega0", type=float, default=None, help="2*pi x MHz")
    p.add_argument("--delta0", type=float, default=None, help="2*pi x MHz")
    p.add_argument("--delta-mod", type=float, default=None, help="2*pi x MHz")
    p.add_argument("--gamma-r", type=float, default=None, help="1/us")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--out-prefix", default=None)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RydionError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"error[1]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
