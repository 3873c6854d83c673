"""
Second moment and survival
==========================

A second-moment bound linear in t, combined with a mean of one, keeps
the survival probability of an opinion from decaying faster than 1/t.
"""
from coalesce_lab import verify
from coalesce_lab.graph import GraphSpec, OffspringDistribution, build

torus = GraphSpec("torus", d=2, n=10)
for row in verify.check_second_moment(torus, [1.0, 2.0, 4.0], replicas=20_000, seed=1):
    print("torus t = %g: E|zeta|^2 = %.2f, bound %.0f" % (row.t, row.estimate.mean, row.bound))

gw = GraphSpec("augmented_gw", offspring=OffspringDistribution.from_pmf({0: 0.5, 2: 0.5}))
for row in verify.check_second_moment(gw, [1.0, 4.0], replicas=20_000, seed=2):
    print("tree  t = %g: E|zeta|^2 = %.2f, bound %.2f (E deg %.3f)"
          % (row.t, row.estimate.mean, row.bound, row.mean_degree))

# on a fixed graph, P(|zeta| > 0) >= 1 / E|zeta|^2
c5 = build(GraphSpec("cycle", n=5))
for row in verify.check_quenched_survival(c5, [1.0, 3.0], replicas=20_000, seed=3):
    print("C5 t = %g: P(survive) = %.4f >= %.4f" % (row.t, row.survival.mean, row.reciprocal))
