"""Machine-check the comparison hypotheses for a problem pair and co-evolve it.

``check_assumptions`` composes the structural checks for a (sub, super)
problem pair: ordered initial data, dominating interior and boundary graphs
(via ``graphs.dominates``), ordered reactions and the quasimonotone
structure condition.  ``run_pair`` then advances both problems on a shared
time grid and records the ordering defect

    d(t) = max_k sup (u1^k - u2^k)^+

together with a Gronwall monitor: with W(t) the summed squared L2 norms of
the positive parts, the continuous theory forces W(t) <= W(s) exp(2 m L (t-s)),
so the rescaled margin W(t) exp(-2 m L (t-s)) - W(s) must stay below a
tolerance that absorbs discretization noise.

Tolerances are pinned here: with ``smax`` the largest sup norm over the
common interval, ``h2`` the summed squared spacings and ``dtmax`` the
largest accepted step,

    tol_order    = 1e-6 + 10 (h2 + dtmax) (1 + smax)
    tol_gronwall = tol_order ** 2

(the defect budget must scale with consistency error and solution size; the
squared norm in the monitor scales with the squared defect).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, SolverFailure
from .graphs import DominationVerdict, dominates
from .mesh import positive_part_l2, sup_norm
from .reactions import OrderVerdict, ScResult, check_order_F, check_sc, lipschitz_bound
from .stepper import (
    ProblemSpec,
    TimeControl,
    Trajectory,
    _AdaptiveRun,
    detect_blowup,
    propose_dt,
    run,
    step,
)

__all__ = [
    "AssumptionReport",
    "ComparisonReport",
    "BlowupOrderResult",
    "check_assumptions",
    "run_pair",
    "ordering_defect",
    "blowup_order_experiment",
]


@dataclass(frozen=True)
class AssumptionReport:
    """Structured verdicts for the four comparison hypotheses.

    a1: initial ordering with the largest violation; a2/a3: per-component
    domination verdicts for interior/boundary graphs; a4: reaction ordering
    plus the structure condition of one of the reactions (whose Lipschitz
    bound l_m feeds the Gronwall monitor).  A-priori override flags skip the
    corresponding check and are recorded.
    """

    a1_ok: bool
    a1_violation: float
    a2: tuple[DominationVerdict, ...]
    a3: tuple[DominationVerdict, ...]
    a4_order: OrderVerdict | None
    a4_sc: ScResult | None
    a4_sc_side: str | None  # "sub" | "super"
    box_radius: float
    a3_overridden: bool = False
    a4_overridden: bool = False

    @property
    def passed(self) -> bool:
        if not self.a1_ok:
            return False
        if not all(v.holds for v in self.a2):
            return False
        if not self.a3_overridden and not all(v.holds for v in self.a3):
            return False
        if not self.a4_overridden:
            if self.a4_order is None or not self.a4_order.holds:
                return False
            if self.a4_sc is None or not self.a4_sc.ok:
                return False
        return True

    def summary_lines(self) -> list[str]:
        lines = [f"A1 initial ordering: {'ok' if self.a1_ok else 'FAIL'} "
                 f"(max violation {self.a1_violation:.3e})"]
        for name, verdicts, skipped in (("A2", self.a2, False), ("A3", self.a3, self.a3_overridden)):
            for k, v in enumerate(verdicts):
                tag = f"mode ({v.mode})" if v.holds else v.status
                if skipped:
                    tag += " [overridden a priori]"
                lines.append(f"{name} component {k + 1}: {tag}")
        if self.a4_overridden:
            lines.append("A4: overridden a priori")
        else:
            order = self.a4_order.status if self.a4_order else "not checked"
            lines.append(f"A4 reaction ordering: {order}")
            if self.a4_sc is not None and self.a4_sc.ok:
                lines.append(
                    f"A4 structure condition ({self.a4_sc_side}): ok, L_M = {self.a4_sc.l_m:.6g} "
                    f"on box {self.box_radius:.3g}"
                )
            else:
                lines.append("A4 structure condition: FAIL")
        lines.append(f"assumptions {'PASS' if self.passed else 'FAIL'}")
        return lines


def check_assumptions(
    P1: ProblemSpec,
    P2: ProblemSpec,
    box_radius: float | None = None,
    a3_apriori: bool = False,
    a4_apriori: bool = False,
) -> AssumptionReport:
    """Verify that (P1 sub, P2 super) satisfies the comparison hypotheses.

    The problems must share mesh, component count and diffusion
    coefficients.  ``box_radius`` bounds the state box for the reaction
    checks; by default one plus the largest initial sup norm.
    """
    if P1.mesh != P2.mesh:
        raise ConfigurationError("comparison requires a common mesh")
    if P1.m != P2.m:
        raise ConfigurationError(f"component counts differ: {P1.m} vs {P2.m}")
    if P1.diffusion != P2.diffusion:
        raise ConfigurationError("comparison requires common diffusion coefficients")

    if box_radius is None:
        box_radius = 1.0 + max(
            max(sup_norm(P.initial[k]) for k in range(P.m)) for P in (P1, P2)
        )

    diff = P1.initial - P2.initial
    a1_violation = float(np.max(diff))
    a1_ok = a1_violation <= 1e-12

    a2 = tuple(
        dominates(P1.interior[k], P2.interior[k], modes=("i", "ii")) for k in range(P1.m)
    )
    a3 = tuple(
        dominates(P1.boundary[k], P2.boundary[k], modes=("i", "iii", "ii"))
        for k in range(P1.m)
    )

    a4_order = a4_sc = a4_side = None
    if not a4_apriori:
        a4_order = check_order_F(P1.reaction, P2.reaction, box_radius)
        a4_sc = check_sc(P1.reaction, box_radius)
        a4_side = "sub"
        if not a4_sc.ok:
            alt = check_sc(P2.reaction, box_radius)
            if alt.ok:
                a4_sc, a4_side = alt, "super"

    return AssumptionReport(
        a1_ok, max(a1_violation, 0.0), a2, a3, a4_order, a4_sc, a4_side,
        box_radius, a3_apriori, a4_apriori,
    )


@dataclass
class ComparisonReport:
    assumptions: AssumptionReport
    times: np.ndarray
    dts: np.ndarray
    defect: np.ndarray
    gronwall_margin: np.ndarray
    gronwall_start: float | None  # s with W(s) > 0, None if W stayed 0
    traj_sub: Trajectory
    traj_super: Trajectory
    tol_order: float
    tol_gronwall: float

    @property
    def max_defect(self) -> float:
        return float(self.defect.max()) if self.defect.size else 0.0

    @property
    def ordering_ok(self) -> bool:
        return self.max_defect <= self.tol_order

    @property
    def gronwall_ok(self) -> bool:
        return self.gronwall_margin.size == 0 or bool(
            np.all(self.gronwall_margin <= self.tol_gronwall)
        )

    def summary_lines(self) -> list[str]:
        lines = list(self.assumptions.summary_lines())
        lines.append(f"common interval: [0, {self.times[-1]:.6g}] in {len(self.times) - 1} steps")
        lines.append(
            f"ordering defect: max {self.max_defect:.3e} vs tol_order {self.tol_order:.3e} "
            f"-> {'ok' if self.ordering_ok else 'VIOLATION'}"
        )
        if self.gronwall_start is None:
            lines.append("gronwall monitor: inactive (positive part never appeared)")
        else:
            lines.append(
                f"gronwall margin: max {float(self.gronwall_margin.max(initial=-math.inf)):.3e} "
                f"from t = {self.gronwall_start:.3g} vs tol {self.tol_gronwall:.3e} "
                f"-> {'ok' if self.gronwall_ok else 'VIOLATION'}"
            )
        for name, traj in (("sub", self.traj_sub), ("super", self.traj_super)):
            v = detect_blowup(traj)
            if v.kind == "blowup":
                lines.append(f"{name} run: blow-up, T_b ~ {v.t_blowup:.6g} (ci {v.ci_width:.2g})")
            else:
                lines.append(f"{name} run: {traj.status}")
        return lines


def ordering_defect(S1: np.ndarray, S2: np.ndarray) -> float:
    """max_k sup (u1^k - u2^k)^+ over the nodes."""
    S1 = np.asarray(S1)
    S2 = np.asarray(S2)
    if S1.shape != S2.shape:
        raise ConfigurationError(f"state shapes differ: {S1.shape} vs {S2.shape}")
    return float(np.maximum(S1 - S2, 0.0).max())


def _positive_part_energy(mesh, S1: np.ndarray, S2: np.ndarray) -> float:
    return float(sum(positive_part_l2(mesh, S1[k] - S2[k]) ** 2 for k in range(S1.shape[0])))


def run_pair(
    P1: ProblemSpec,
    P2: ProblemSpec,
    tc: TimeControl,
    assumptions: AssumptionReport | None = None,
    a3_apriori: bool = False,
    a4_apriori: bool = False,
    observer=None,
) -> ComparisonReport:
    """Co-evolve (P1 sub, P2 super) on a shared adaptive time grid.

    Requires the assumption report to pass (or the failing hypotheses to be
    overridden a priori).  Both problems advance with the pairwise minimum
    of their adaptive step proposals so every sample is taken at identical
    times; stops at t_end or as soon as either run blows up.  ``observer``
    (as in ``stepper.run``) is applied to both runs.
    """
    if assumptions is None:
        assumptions = check_assumptions(P1, P2, a3_apriori=a3_apriori, a4_apriori=a4_apriori)
    if not assumptions.passed:
        raise ConfigurationError(
            "assumption check failed; pass a-priori overrides to run regardless"
        )

    m = P1.m
    mesh = P1.mesh
    r1 = _AdaptiveRun(P1, tc, observer)
    r2 = _AdaptiveRun(P2, tc, observer)
    defects = [ordering_defect(r1.state, r2.state)]
    energies = [_positive_part_energy(mesh, r1.state, r2.state)]
    dt_prev = tc.dt_init

    while tc.t_end - r1.t > tc.dt_min:
        dt = min(
            propose_dt(P1, r1.state, tc, dt_prev),
            propose_dt(P2, r2.state, tc, dt_prev),
            tc.t_end - r1.t,
        )
        failed = None
        while True:
            if dt < tc.dt_min:
                for r in (r1, r2):
                    r.classify_collapse()
                failed = "collapse"
                break
            try:
                new1 = step(P1, r1.state, dt)
                new2 = step(P2, r2.state, dt)
                break
            except SolverFailure:
                dt *= 0.5
        if failed:
            break
        if not (np.all(np.isfinite(new1)) and np.all(np.isfinite(new2))):
            r1.status = r2.status = "solver_failure"
            r1.note = r2.note = "non-finite state encountered"
            break
        r1.state, r2.state = new1, new2
        r1.t = r2.t = r1.t + dt
        dt_prev = dt
        r1.record(dt)
        r2.record(dt)
        defects.append(ordering_defect(r1.state, r2.state))
        energies.append(_positive_part_energy(mesh, r1.state, r2.state))
        blew1 = r1.overall_sup() >= tc.blowup_threshold
        blew2 = r2.overall_sup() >= tc.blowup_threshold
        if blew1 or blew2:
            if blew1:
                r1.status = "blowup"
                r1.note = "sup norm reached the blow-up threshold"
            if blew2:
                r2.status = "blowup"
                r2.note = "sup norm reached the blow-up threshold"
            break

    traj1, traj2 = r1.finish(), r2.finish()
    times = traj1.times
    dts = traj1.dts
    energies = np.asarray(energies)
    defects = np.asarray(defects)

    # Gronwall monitor from the earliest sample with positive energy
    lm = assumptions.a4_sc.l_m if (assumptions.a4_sc and assumptions.a4_sc.ok) else None
    margins = np.full(len(times), -math.inf)
    start = None
    pos = np.nonzero(energies > 0.0)[0]
    if pos.size and lm is None:
        # a-priori override without a usable L_M: bound partials on the box
        # actually visited by the two runs
        smax_box = float(max(traj1.sup_norms.max(initial=0.0), traj2.sup_norms.max(initial=0.0)))
        lm = max(
            lipschitz_bound(P1.reaction, smax_box), lipschitz_bound(P2.reaction, smax_box)
        )
    if pos.size:
        i0 = int(pos[0])
        start = float(times[i0])
        w_s = energies[i0]
        margins[i0:] = energies[i0:] * np.exp(
            -2.0 * m * lm * (times[i0:] - start)
        ) - w_s

    smax = float(max(traj1.sup_norms.max(initial=0.0), traj2.sup_norms.max(initial=0.0)))
    h2 = float(sum(h**2 for h in mesh.spacing))
    dtmax = float(dts.max(initial=0.0))
    tol_order = 1e-6 + 10.0 * (h2 + dtmax) * (1.0 + smax)
    return ComparisonReport(
        assumptions, times, dts, defects, margins, start, traj1, traj2,
        tol_order, tol_order**2,
    )


@dataclass(frozen=True)
class BlowupOrderResult:
    verdicts: tuple
    t_blowups: tuple[float, ...]
    slack: float
    passed: bool
    failures: tuple[str, ...]


def blowup_order_experiment(specs, tc: TimeControl) -> BlowupOrderResult:
    """Run an ordered list of problems and assert nondecreasing blow-up times.

    Every run must terminate with a blow-up; successive estimates must be
    ordered within one shared dt of slack (the largest step accepted by any
    of the runs).
    """
    trajs = [run(P, tc) for P in specs]
    verdicts = tuple(detect_blowup(t) for t in trajs)
    failures = []
    slack = max(float(t.dts.max(initial=0.0)) for t in trajs)
    for i, (t, v) in enumerate(zip(trajs, verdicts)):
        if v.kind != "blowup":
            failures.append(f"run {i} ended with status {t.status!r} instead of blow-up")
    tbs = tuple(v.t_blowup if v.t_blowup is not None else math.nan for v in verdicts)
    if not failures:
        for i in range(len(tbs) - 1):
            if not tbs[i] <= tbs[i + 1] + slack:
                failures.append(
                    f"T_b order violated: T_b[{i}]={tbs[i]:.6g} > T_b[{i + 1}]={tbs[i + 1]:.6g} "
                    f"+ slack {slack:.3g}"
                )
    return BlowupOrderResult(verdicts, tbs, slack, not failures, tuple(failures))
