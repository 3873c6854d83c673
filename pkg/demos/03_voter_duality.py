"""
Voter model, forward and backward
=================================

Read forward in time, an arrow (v, w) makes v copy w. Read backward
from the horizon, the same arrows are walker paths, and the opinion
clusters at time T are exactly the coalescence classes.
"""
from coalesce_lab import arrows, crw, voter
from coalesce_lab.graph import GraphSpec, build

g = build(GraphSpec("cycle", n=6, seed=0))
a = arrows.sample(g, T=1.5, seed=4)
for s, v, w in a.event_list():
    print("t = %.3f  %d copies %d" % (s, v, w))

dual = voter.dual_voter(g, a, a.T)
print("dual voter at T:", dual.clusters())

trace = crw.run_crw(g, a)
by_site = {trace.final_position(v): set() for v in range(g.num_vertices)}
for v in range(g.num_vertices):
    by_site[trace.final_position(v)].add(v)
print("walker classes:  ", dict(sorted(by_site.items())))
assert {k: frozenset(v) for k, v in by_site.items()} == dual.clusters()

# the forward voter uses the arrows in the other time direction; its
# configuration differs path by path but has the same law
print("forward voter at T:", voter.forward_voter(g, a, a.T).clusters())
