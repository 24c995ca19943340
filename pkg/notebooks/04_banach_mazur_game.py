# %% [markdown]
# # The game
#
# Player one perturbs the current center; player two answers by laying a
# sheared copy of the repaired seed on a fine partition, then shrinking the
# radius below the margins that keep difference quotients positive.

# %%
from pldensity.game import certified_alpha, simulate, verify_limit_scales

t = simulate(5, 42)
for k, p in enumerate(t.plays):
    extra = f" m={p.params.m:.3e} alpha={p.params.alpha}" if p.params else ""
    print(f"{k} {p.role} radius={float(p.ball.radius):.3e}{extra}")
print("all checks pass:", t.ok)

# %%
rep = verify_limit_scales(t, 8)
print("scales", rep.scales, "certified", rep.ok)
print("alpha", certified_alpha())

# %%
shifted = simulate(5, 42, adversary="monotone-shift")
print("against the tilting adversary:", shifted.ok)
