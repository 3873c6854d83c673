"""
Arrows and coalescing random walk
=================================

One Poisson arrow field drives everything. Each walker follows the
arrows leaving its site; walkers that meet merge for good.
"""
import numpy as np

from coalesce_lab import arrows, crw
from coalesce_lab.graph import GraphSpec, build

g = build(GraphSpec("torus", d=2, n=8, seed=0))
a = arrows.sample(g, T=4.0, seed=11)
print(len(a), "arrows on", g.num_vertices, "vertices over [0, 4]")

trace = crw.run_crw(g, a, snapshots=[0.0, 0.5, 1.0, 2.0, 4.0])
for snap in trace.snapshots:
    print("t = %.1f  occupied sites %3d" % (snap.time, len(snap.occupied)))
print("walkers merged into the root's walker:", trace.class_size(0))

# first time after t that the root is occupied again
for t in (0.0, 1.0, 2.0):
    print("sigma_%g =" % t, crw.sigma(trace, t))

# the occupied count only decreases; check over many fields
drops = []
for i in range(200):
    tr = crw.run_crw(g, arrows.sample(g, 4.0, seed=[5, i]), snapshots=[1.0, 4.0])
    drops.append(len(tr.snapshots[0].occupied) - len(tr.snapshots[1].occupied))
print("mean loss of occupied sites between t=1 and t=4: %.1f" % np.mean(drops))
