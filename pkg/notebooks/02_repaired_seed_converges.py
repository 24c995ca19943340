# %% [markdown]
# # The fourteen-knot seed
#
# Each decreasing piece of h falls by 3/4, so copies shrink geometrically and
# the levels converge uniformly.  We tabulate the contraction, enclose the
# limit at a point, and certify the density bound along a path of nested
# decreasing pieces.

# %%
from fractions import Fraction as F

from pldensity.ornstein import bprime_check, convergence_report, enclose_h_infinity

rep = convergence_report(6)
print("C =", rep.C)
for l in rep.levels:
    print(f"n={l.n}  segments={l.segments:8d}  max_drop={l.max_drop}  sup_diff={float(l.sup_diff):.3e}")

# %%
for N in (0, 4, 8, 16):
    enc = enclose_h_infinity(F(1, 2), N)
    print(N, float(enc.lo), float(enc.hi))

# %%
for path in ("first", "central", "last", "031"):
    cert = bprime_check(path, 4, 12)
    print(path, cert.ok, [f"{float(l.lower_bound):.4f}" for l in cert.levels])
