"""
Waiting for the root to be occupied
===================================

sigma_t is the first time at or after t that some walker sits on the
root. Its tail is estimated with censoring at the horizon.
"""
from coalesce_lab import verify
from coalesce_lab.graph import GraphSpec

spec = GraphSpec("torus", d=2, n=8)
rep = verify.estimate_sigma_tail(spec, t=1.0, u_grid=[0, 0.5, 1, 2, 4], T=5.0,
                                 replicas=5_000, seed=2)
for u, p, lo, hi in zip(rep.u, rep.tail, rep.ci_low, rep.ci_high):
    print("P(sigma_1 > 1 + %.1f) = %.4f  [%.4f, %.4f]" % (u, p, lo, hi))
print("censored fraction %.4f, nonincreasing: %s" % (rep.censored_fraction, rep.nonincreasing))
