"""
Two views of a cluster
======================

The cluster that contains the root is larger on average than the
cluster of the root's own opinion: its size law is the size-biased one.
"""
import numpy as np

from coalesce_lab import verify
from coalesce_lab.graph import GraphSpec, build

g = build(GraphSpec("cycle", n=10))
t = 2.0
own = verify.sample_cluster_sizes(g, [t], 20_000, seed=1).column(0)
containing = verify.sample_root_cluster_sizes(g, t, 20_000, seed=2)
rep = verify.test_size_bias(own, containing, n_max=10)

print(" n   P(contains root)   n q(n)")
for n in range(1, 11):
    print("%2d   %.4f             %.4f" % (n, rep.p_hat_at_root[n], rep.n_times_q_hat[n]))
print("TV %.4f against bootstrap threshold %.4f: %s"
      % (rep.tv, rep.threshold, "consistent" if rep.passed else "rejected"))
print("mean sizes: %.3f vs %.3f" % (np.mean(own), np.mean(containing)))
