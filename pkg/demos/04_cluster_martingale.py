"""
Opinion cluster of the root
===========================

The cluster engine tracks only the vertices holding the root's opinion,
so it runs on infinite trees. Its size is a +-1 walk and has mean one
at every time.
"""
from coalesce_lab import verify, voter
from coalesce_lab.graph import GraphSpec, OffspringDistribution, build

tree = build(GraphSpec("augmented_gw", offspring=OffspringDistribution.poisson(1.5), seed=8))
traj = voter.run_cluster(tree, T=10.0, seed=1)
print("one trajectory: %d jumps, final size %d, graph grown to %d vertices"
      % (len(traj.sizes) - 1, traj.final_size, tree.num_vertices))

spec = GraphSpec("augmented_gw", offspring=OffspringDistribution.from_pmf({0: 0.5, 2: 0.5}))
for row in verify.check_martingale(spec, [1.0, 5.0, 10.0], replicas=20_000, seed=3):
    e = row.estimate
    print("t = %4.1f  mean %.4f  99%% CI [%.4f, %.4f]  %s"
          % (row.t, e.mean, e.ci_low, e.ci_high, "ok" if row.passed else "off"))
