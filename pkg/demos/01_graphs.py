"""
Rooted graphs, finite and lazily grown
======================================

Finite families come fully built and rooted at a uniform vertex. The
two infinite families are grown on demand: a vertex is materialized
only when a process first steps on it.
"""
import numpy as np

from coalesce_lab.graph import GraphSpec, OffspringDistribution, build

# a 2-d torus: every vertex has degree 4, the root is vertex 0
torus = build(GraphSpec("torus", d=2, n=5, seed=1))
print("torus 5x5:", torus.num_vertices, "vertices, root label", torus.labels[0])

# an Erdos-Renyi graph is cut down to the component of its root
er = build(GraphSpec("erdos_renyi", n=200, p=0.02, seed=2))
print("ER(200, 0.02) root component:", er.num_vertices, "vertices")

# augmented Galton-Watson tree: the root gets one extra child
off = OffspringDistribution.from_pmf({0: 0.5, 2: 0.5})
tree = build(GraphSpec("augmented_gw", offspring=off, seed=2))
print("augmented GW: root degree", tree.degree(0), "frontier", sorted(tree.frontier))
for _ in range(3):
    for v in sorted(tree.frontier):
        tree.extend(v)
print("after three sweeps:", tree.num_vertices, "vertices")

# the mean root degree is 1 + mean offspring
degs = [build(GraphSpec("augmented_gw", offspring=off, seed=s)).degree(0) for s in range(20_000)]
print("mean root degree %.3f (expected 2)" % np.mean(degs))

# canopy tree with parallel edges: the edge from height n to n+1 has 4**n copies
canopy = build(GraphSpec("parallel_canopy"))
parent = next(iter(canopy.adj[0]))
canopy.extend(parent)
print("canopy: leaf degree", canopy.degree(0), "parent degree", canopy.degree(parent))
