# %% [markdown]
# # Nested search for an approximate maximum
#
# Starting from the whole interval, each stage keeps a component of the
# high-density region of a superlevel set, raising the level while the
# tolerance shrinks.  For piecewise-linear input the enclosure ends up around
# a genuine local maximum.

# %%
from pldensity import ORNSTEIN_G, FIXED_H, Interval, IntervalSet, approx_max_search, g_epsilon
from pldensity import monotonicity_witness, superlevel

g = ORNSTEIN_G.base
H = superlevel(g, 1, Interval(0, 1))
print("H_1 =", H)
print("G_1/2 components:", g_epsilon(H, Interval(0, 1), "1/2").components)

# %%
cert = approx_max_search(g, 0, 1, 16)
for s in cert.stages[:6]:
    print(s.k, s.a, s.b, s.y)
print("enclosure", cert.enclosure, "width", cert.width)

# %%
w = monotonicity_witness(FIXED_H.base, 0, 1)
print("witness at", w.x0, "value", w.value, "right slope", w.right_slope)
