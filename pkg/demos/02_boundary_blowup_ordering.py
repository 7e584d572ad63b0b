"""Blow-up under three boundary laws, and the machine-checked comparison.

The scalar problem u_t - u_xx = |u|^(p-2) u on [0, 1] with supercritical
initial data u0 = 12*phi1 blows up in finite time under homogeneous
Dirichlet, power-law radiation, and homogeneous Neumann boundary laws.
Dirichlet loses the most mass through the boundary, so it blows up last;
Neumann keeps everything, so it blows up first:

    T_b(Neumann) <= T_b(power law) <= T_b(Dirichlet).

The second half runs the (Dirichlet, power-law) pair through the
comparison harness: the assumption check certifies the boundary ordering
(domains {0} vs [0, inf), mode iii) and the co-evolution confirms that the
Dirichlet solution never overtakes the power-law one.
"""

import numpy as np

from mmrd import (
    ProblemSpec,
    TimeControl,
    blowup_order_experiment,
    build_mesh,
    detect_blowup,
    dirichlet_graph,
    extended_neumann_graph,
    extended_power_graph,
    power_reaction,
    principal_eigenpair,
    run_pair,
    zero_graph,
)

mesh = build_mesh(1, [1.0], [101])
ep = principal_eigenpair(mesh)
u0 = np.asarray([12.0 * ep.phi1])

laws = {
    "neumann": extended_neumann_graph(),
    "power(1, 2.5)": extended_power_graph(1.0, 2.5),
    "dirichlet": dirichlet_graph(),
}
problems = {
    name: ProblemSpec(mesh, (1.0,), power_reaction(3.0), (zero_graph(),), (law,), u0)
    for name, law in laws.items()
}
tc = TimeControl(t_end=1.0, blowup_threshold=1e3)

print("== blow-up times under the three boundary laws ==")
result = blowup_order_experiment(list(problems.values()), tc)
for name, tb in zip(problems, result.t_blowups):
    print(f"  T_b({name:>13}) ~ {tb:.6f}")
print(f"ordering holds within one shared dt ({result.slack:.2e}): {result.passed}")

print("\n== comparison run: Dirichlet (sub) vs power law (super) ==")
rep = run_pair(problems["dirichlet"], problems["power(1, 2.5)"], tc)
for line in rep.summary_lines():
    print("  " + line)
print(f"\nlargest ordering defect over {len(rep.times) - 1} shared steps: "
      f"{rep.max_defect:.3e} (tolerance {rep.tol_order:.3e})")
v = detect_blowup(rep.traj_super)
print(f"the power-law solution blew up first, at T_b ~ {v.t_blowup:.6f}")
