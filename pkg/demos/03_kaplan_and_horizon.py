"""The Kaplan moment test and the guaranteed existence horizon.

Testing the Dirichlet problem u_t - u_xx = |u|^(p-2) u against the
principal eigenfunction phi1 (normalized to unit integral) reduces blow-up
to a scalar inequality: if the moment  y0 = integral(u0 * phi1)  exceeds
lambda1^(1/(p-2)), the solution cannot be global.  The condition is only
sufficient: below the threshold nothing is claimed.

Independently, the reaction's growth envelope ell(r) gives a horizon
T0 = 1/(2*ell(||u0|| + 1)) up to which the sup norm provably stays below
||u0|| + 1, whatever the boundary law does.
"""

import numpy as np

from mmrd import (
    ProblemSpec,
    TimeControl,
    build_mesh,
    detect_blowup,
    dirichlet_graph,
    integrate,
    kaplan_threshold,
    kaplan_y,
    local_existence_horizon,
    power_reaction,
    principal_eigenpair,
    run,
    zero_graph,
)

p = 3.0
mesh = build_mesh(1, [1.0], [51])
ep = principal_eigenpair(mesh)
threshold = kaplan_threshold(p, ep.lambda1)
phi_sq = integrate(mesh, ep.phi1**2)
print(f"lambda1 = {ep.lambda1:.6f}, Kaplan threshold lambda1^(1/(p-2)) = {threshold:.6f}")

print("\n== sweeping the initial moment across the threshold ==")
tc = TimeControl(t_end=5.0, blowup_threshold=1e3)
for factor in (0.5, 0.9, 1.1, 1.5):
    c = factor * threshold / phi_sq
    u0 = c * ep.phi1
    P = ProblemSpec(mesh, (1.0,), power_reaction(p), (zero_graph(),),
                    (dirichlet_graph(),), np.asarray([u0]))
    traj = run(P, tc)
    moment = kaplan_y(P.initial[0], ep)
    verdict = detect_blowup(traj)
    outcome = (f"blow-up at T_b ~ {verdict.t_blowup:.4f}" if verdict.kind == "blowup"
               else f"no blow-up before t = {tc.t_end:g}")
    guaranteed = "blow-up guaranteed" if moment > threshold else "no claim"
    print(f"  y0 = {moment:7.4f} ({factor:0.1f} x threshold, {guaranteed:>18}): {outcome}")

print("\n== existence horizon for u0 = 1 ==")
F = power_reaction(p)
t0 = local_existence_horizon(1.0, F)
print(f"ell(2) = {2.0 + 2.0 ** (p - 1.0):g}  ->  T0 = 1/(2*ell(2)) = {t0:.6f}")
P = ProblemSpec(mesh, (1.0,), F, (zero_graph(),), (dirichlet_graph(),),
                np.asarray([np.ones(mesh.shape)]))
traj = run(P, TimeControl(t_end=t0))
print(f"sup norm at T0: {traj.sup_norms[-1, 0]:.6f} "
      f"(largest along the way {float(traj.sup_norms.max()):.6f}, bound 2)")
