"""
Exact identities on finite graphs
=================================

With a uniform root, mass sent equals mass received for any transport
function, and the uniform law is stationary for the edge-driven walk.
Both are checked by exact sums.
"""
from coalesce_lab import verify
from coalesce_lab.graph import GraphSpec, build, from_edges

graphs = {
    "P3": build(GraphSpec("path", n=3)),
    "torus 4x4": build(GraphSpec("torus", d=2, n=4)),
    "canopy, 3 levels": build(GraphSpec("parallel_canopy", levels=3)),
    "multigraph": from_edges(3, [(0, 1, 3), (1, 2, 1)]),
}
for name, g in graphs.items():
    print(name)
    for f in verify.MTP_CATALOG:
        lhs, rhs, ok = verify.check_mtp_exact(g, f)
        print("  %-26s %8.4f %8.4f %s" % (f.name, lhs, rhs, ok))
    print("  uniform law stationary:", verify.check_stationarity_exact(g))
