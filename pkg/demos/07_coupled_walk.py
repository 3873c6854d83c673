"""
A walker that glues particles
=============================

A tagged walker X absorbs every free particle it meets. Arrows that
point at X's position are set aside; in the modified system they are
ignored, so free particles there can only be more numerous.
"""
import numpy as np

from coalesce_lab import crw, verify
from coalesce_lab.graph import GraphSpec, build

g = build(GraphSpec("torus", d=2, n=5, seed=0))
tr = crw.run_coupled(g, T=2.0, snapshots=[0.5, 1.0, 2.0], seed=7)
for k, s in enumerate(tr.snapshot_times):
    x = tr.X_at(s)
    print("t = %.1f  X at %2d  glued %2d  free at X in modified system %d"
          % (s, x, tr.N[k, x], tr.N_gamma[k, x]))
print("X jumped", tr.jump_count, "times;", len(tr.U_gamma), "arrows set aside")

rep = verify.check_coupled(g, 2.0, replicas=2_000, seed=1)
print("domination violations", rep.violations_domination)
print("E[N_T(X_T)] = %.2f  bound %.1f" % (rep.n_at_x.mean, rep.bound))
print("E|U| = %.2f  (4T = 8)" % rep.u_gamma.mean)
print("jump counts: mean %.2f, Poisson fit p = %.3f"
      % (np.mean(rep.jump_counts), verify.poisson_gof(rep.jump_counts, 8.0)))
