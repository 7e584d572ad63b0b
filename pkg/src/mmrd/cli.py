"""Command-line interface: run scenarios, compare pairs, eigenpairs, bounds.

Exit codes:
    0  completed
    1  configuration error (bad scenario, bad arguments)
    2  blow-up detected (an expected terminal state, not an error)
    3  ordering violation in a comparison run
    4  assumption-check failure in a comparison run
    5  solver failure
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .compare import check_assumptions, run_pair
from .errors import ConfigurationError
from .mesh import build_mesh
from .scenarios import (
    PRESET_NAMES,
    Scenario,
    build_problem,
    make_preset,
    parse_scenario,
    scenario_to_dict,
)
from .spectral import (
    check_nr_initial,
    kaplan_threshold,
    kaplan_y,
    kaplan_z,
    principal_eigenpair,
    riccati_blowup_time,
)
from .stepper import Trajectory, detect_blowup, local_existence_horizon, run

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_ORDER_VIOLATION = 3
EXIT_ASSUMPTIONS = 4
EXIT_SOLVER = 5


def _load_scenario(args) -> Scenario:
    if (args.scenario is None) == (args.preset is None):
        raise ConfigurationError("exactly one of --scenario and --preset is required")
    if args.scenario is not None:
        return parse_scenario(Path(args.scenario).read_text(encoding="utf-8"))
    params = json.loads(args.params) if args.params else {}
    if not isinstance(params, dict):
        raise ConfigurationError("--params must be a JSON object")
    return make_preset(args.preset, **params)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _stamp(scenario: Scenario) -> str:
    return f"# mmrd {__version__} scenario={scenario.name or 'unnamed'}"


def write_csv(traj: Trajectory, path: Path, m: int, stamp: str, nuclear: bool) -> None:
    """Trajectory CSV: one row per accepted step, y/z columns filled for the
    two-component coupled system, trailing comment line with the status."""
    sup_cols = ",".join(f"supnorm_k{k + 1}" for k in range(m))
    ys = traj.extras.get("y")
    zs = traj.extras.get("z")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(stamp + "\n")
        fh.write(f"t,dt,{sup_cols},y,z,status\n")
        n = len(traj.times)
        for i in range(n):
            sups = ",".join(f"{traj.sup_norms[i, k]:.12g}" for k in range(m))
            y = f"{ys[i]:.12g}" if nuclear and ys is not None else ""
            z = f"{zs[i]:.12g}" if nuclear and zs is not None else ""
            status = traj.status if i == n - 1 else ""
            fh.write(f"{traj.times[i]:.12g},{traj.dts[i]:.12g},{sups},{y},{z},{status}\n")
        verdict = detect_blowup(traj)
        if verdict.kind == "blowup":
            fh.write(f"# status={traj.status} T_b={verdict.t_blowup:.12g}\n")
        else:
            fh.write(f"# status={traj.status}\n")


def _nuclear_observer(scenario: Scenario, problem):
    """Per-step Kaplan moments y(t), z(t) for the coupled system."""
    if scenario.reaction.kind != "nuclear":
        return None
    ep = principal_eigenpair(problem.mesh, "analytic")
    a, b = scenario.reaction.a, scenario.reaction.b

    def observer(t, state):
        out = {"y": kaplan_y(state[1], ep)}
        if a > 0:
            out["z"] = kaplan_z(state[0], state[1], a, b, ep)
        return out

    return observer


def _status_exit(status: str) -> int:
    return {"completed": EXIT_OK, "blowup": EXIT_BLOWUP, "solver_failure": EXIT_SOLVER}[status]


def cmd_run(args) -> int:
    scenario = _load_scenario(args)
    out = _outdir(args)
    problem, tc = build_problem(scenario)
    nuclear = scenario.reaction.kind == "nuclear"
    traj = run(problem, tc, observer=_nuclear_observer(scenario, problem))
    write_csv(traj, out / "trajectory.csv", problem.m, _stamp(scenario), nuclear)
    verdict = detect_blowup(traj)
    summary = {
        "version": __version__,
        "scenario": scenario_to_dict(scenario),
        "status": traj.status,
        "t_final": float(traj.times[-1]),
        "steps": int(len(traj.times) - 1),
        "final_sup_norms": [float(v) for v in traj.sup_norms[-1]],
        "t_blowup": verdict.t_blowup,
        "t_blowup_ci": verdict.ci_width,
        "note": traj.note,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2), encoding="utf-8")
    print(f"status: {traj.status}")
    if verdict.kind == "blowup":
        print(f"T_b estimate: {verdict.t_blowup:.6g} (ci width {verdict.ci_width:.2g})")
    print(f"wrote {out / 'trajectory.csv'}")
    return _status_exit(traj.status)


def cmd_compare(args) -> int:
    scenario = _load_scenario(args)
    if scenario.pair is None:
        raise ConfigurationError("compare needs a scenario with a 'pair' block")
    out = _outdir(args)
    p_sub, tc = build_problem(scenario)
    p_super, _ = build_problem(scenario.pair.scenario)
    a3 = scenario.pair.override_a3 or args.override_a3
    a4 = scenario.pair.override_a4 or args.override_a4
    report_path = out / "compare_report.txt"

    assumptions = check_assumptions(p_sub, p_super, a3_apriori=a3, a4_apriori=a4)
    if not assumptions.passed:
        lines = [_stamp(scenario)] + assumptions.summary_lines()
        report_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        print("\n".join(assumptions.summary_lines()))
        return EXIT_ASSUMPTIONS

    nuclear = scenario.reaction.kind == "nuclear"
    rep = run_pair(p_sub, p_super, tc, assumptions=assumptions,
                   observer=_nuclear_observer(scenario, p_sub))
    write_csv(rep.traj_sub, out / "sub_trajectory.csv", p_sub.m, _stamp(scenario), nuclear)
    write_csv(rep.traj_super, out / "super_trajectory.csv", p_super.m, _stamp(scenario), nuclear)
    lines = [_stamp(scenario)] + rep.summary_lines()
    report_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print("\n".join(rep.summary_lines()))

    if "solver_failure" in (rep.traj_sub.status, rep.traj_super.status):
        return EXIT_SOLVER
    if not rep.ordering_ok or not rep.gronwall_ok:
        return EXIT_ORDER_VIOLATION
    if "blowup" in (rep.traj_sub.status, rep.traj_super.status):
        return EXIT_BLOWUP
    return EXIT_OK


def cmd_eigen(args) -> int:
    scenario = _load_scenario(args)
    out = _outdir(args)
    mesh = build_mesh(scenario.dim, scenario.lengths, scenario.counts)
    ep = principal_eigenpair(mesh, args.method)
    print(f"lambda1 = {ep.lambda1:.12g} ({args.method})")
    path = out / "eigenfunction.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_stamp(scenario) + "\n")
        if mesh.dim == 1:
            fh.write("x,phi1\n")
            for x, v in zip(mesh.axes[0], ep.phi1):
                fh.write(f"{x:.12g},{v:.12g}\n")
        else:
            fh.write("x,y,phi1\n")
            X, Y = mesh.coords
            for x, y, v in zip(X.ravel(), Y.ravel(), ep.phi1.ravel()):
                fh.write(f"{x:.12g},{y:.12g},{v:.12g}\n")
    print(f"wrote {path}")
    return EXIT_OK


def cmd_bound(args) -> int:
    scenario = _load_scenario(args)
    problem, _ = build_problem(scenario)
    F = scenario.reaction
    u0_sup = float(sum(np.max(np.abs(problem.initial[k])) for k in range(problem.m)))
    t0 = local_existence_horizon(u0_sup, F)
    print(f"sup norm of the initial data (summed over components): {u0_sup:.6g}")
    print(f"T0 (guaranteed existence horizon): {t0:.6g}")
    ep = principal_eigenpair(problem.mesh, "analytic")
    if F.kind == "power":
        moment = kaplan_y(problem.initial[0], ep)
        threshold = kaplan_threshold(F.p, ep.lambda1)
        status = "supercritical (blow-up guaranteed)" if moment > threshold else "subcritical"
        print(f"Kaplan moment of u0: {moment:.6g}")
        print(f"Kaplan threshold lambda1^(1/(p-2)): {threshold:.6g} -> {status}")
    elif F.kind == "nuclear":
        if F.a > 0:
            v = check_nr_initial(problem.initial[0], problem.initial[1], F.a, F.b, ep)
            print(f"coupled-system initial check: z0 = {v.z0:.6g} (needs >= 0), "
                  f"y0 = {v.y0:.6g} (needs > {v.y0_threshold:.6g})")
            print(f"conditions {'satisfied' if v.satisfied else f'violated ({v.failed})'}")
            tstar = riccati_blowup_time(v.y0, F.b + ep.lambda1)
            if math.isinf(tstar):
                print("Riccati bound T*: +inf (no blow-up forced at this data)")
            else:
                print(f"Riccati bound T*: {tstar:.6g}")
        else:
            print("a = 0: every local solution continues globally; no blow-up data exist")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mmrd",
        description="Reaction-diffusion runs with monotone-graph boundary laws: "
        "simulation, comparison checks and blow-up bounds.",
    )
    parser.add_argument("--version", action="version", version=f"mmrd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_overrides=False, with_method=False):
        p.add_argument("--scenario", help="path to a scenario JSON file")
        p.add_argument("--preset", help=f"preset name ({', '.join(PRESET_NAMES)})")
        p.add_argument("--params", help="JSON object with preset parameter overrides")
        p.add_argument("--out", default="mmrd_out", help="output directory")
        if with_overrides:
            p.add_argument("--override-a3", action="store_true",
                           help="assume the boundary-law ordering a priori")
            p.add_argument("--override-a4", action="store_true",
                           help="assume the reaction ordering a priori")
        if with_method:
            p.add_argument("--method", choices=("analytic", "discrete"), default="analytic")

    common(sub.add_parser("run", help="run one scenario, write trajectory CSV"))
    common(sub.add_parser("compare", help="check assumptions and co-evolve a pair"),
           with_overrides=True)
    common(sub.add_parser("eigen", help="principal Dirichlet eigenpair of the domain"),
           with_method=True)
    common(sub.add_parser("bound", help="existence horizon, Kaplan and Riccati bounds"))

    args = parser.parse_args(argv)
    handler = {
        "run": cmd_run,
        "compare": cmd_compare,
        "eigen": cmd_eigen,
        "bound": cmd_bound,
    }[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
