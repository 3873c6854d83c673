"""
How long does an opinion live?
==============================

On the critical tree the integral of the survival curve keeps growing.
On the canopy tree with heavy parallel edges the root's opinion is
swallowed quickly and the curve is shown only for contrast.
"""
from coalesce_lab import verify
from coalesce_lab.graph import GraphSpec, OffspringDistribution, build

grid = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0]
gw = GraphSpec("augmented_gw", offspring=OffspringDistribution.from_pmf({0: 0.5, 2: 0.5}))
canopy = GraphSpec("parallel_canopy")
for name, spec in (("critical tree", gw), ("canopy", canopy)):
    rep = verify.estimate_opinion_lifetime(spec, grid, replicas=4_000, seed=1, size_cap=10_000)
    print(name)
    for T, s, i in zip(rep.T_grid, rep.survival, rep.integral):
        print("  T = %4g  P(alive) = %.4f  integral = %.3f" % (T, s.mean, i.mean))

k2 = build(GraphSpec("complete", n=2))
rep = verify.estimate_opinion_lifetime(k2, [10.0, 40.0], replicas=10_000, seed=2)
print("K2 slope on [10, 40]: %.3f (expected 0.5)" % rep.slope(10.0, 40.0).mean)
