# %% [markdown]
# # Inserting the seven-piece seed into itself
#
# Every decreasing piece of g is replaced by an affine copy of g.  Along the
# nested middle pieces each copy falls 5/3 times further than its parent,
# so the values at their left ends grow without bound.

# %%
from fractions import Fraction as F

from pldensity import ORNSTEIN_G
from pldensity.ornstein import LazyConstruction, divergence_report, lazy_eval, materialize

g1 = materialize(LazyConstruction(ORNSTEIN_G, 1))
print("level 1 has", g1.n_segments, "pieces")

# %%
rep = divergence_report(10, half_levels=10)
for row in rep.table().rows:
    n, lo, hi, drop, left, formula, *_ = row
    print(f"n={n:2d}  I=[{lo}, {hi}]  drop={drop}  left={float(left):10.4f}")
print("ratios exactly 5/3:", rep.ratios_exact)

# %% [markdown]
# The midpoint 1/2 is fixed both by the map onto the middle piece and by the
# value map v -> -1/3 + (5/3) v, so the sequence at 1/2 never moves.

# %%
print({lazy_eval(ORNSTEIN_G, n, F(1, 2)) for n in range(40)})
