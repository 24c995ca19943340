"""The two seed functions of the insertion construction.

Both are stored on the unit interval with ``f(0) = 1`` and ``f(1) = 0``.
``ornstein_g`` has knots at ``i/7``; ``fixed_h`` has knots at ``i/13`` and is
the 14-value table on ``[0, 13]`` squeezed horizontally onto ``[0, 1]``.
Densities are invariant under that squeeze, so nothing is lost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F
from typing import Tuple

from .plfunc import PLFunction

ORNSTEIN_G_VALUES = (F(1), F(4, 3), F(1, 3), F(4, 3), F(-1, 3), F(2, 3), F(-1, 3), F(0))
FIXED_H_VALUES = tuple(F(v, 4) for v in (4, 6, 3, 5, 2, 4, 1, 3, 0, 2, -1, 1, -2, 0))


@dataclass(frozen=True)
class SeedFunction:
    name: str
    base: PLFunction

    def __post_init__(self):
        f = self.base
        if f.xs[0] != 0 or f.xs[-1] != 1:
            raise ValueError("seed must live on [0, 1]")
        if f.ys[0] != 1 or f.ys[-1] != 0:
            raise ValueError("seed must satisfy f(0)=1, f(1)=0")
        if f.flat_segments():
            raise ValueError("seed must have no flat pieces")

    @property
    def xs(self) -> Tuple[F, ...]:
        return self.base.xs

    @property
    def ys(self) -> Tuple[F, ...]:
        return self.base.ys

    @property
    def n_segments(self) -> int:
        return self.base.n_segments

    @property
    def increasing(self) -> Tuple[bool, ...]:
        return tuple(b > a for a, b in zip(self.ys, self.ys[1:]))

    @property
    def n_increasing(self) -> int:
        return sum(self.increasing)

    @property
    def n_decreasing(self) -> int:
        return self.n_segments - self.n_increasing

    @property
    def decreasing_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, up in enumerate(self.increasing) if not up)

    def __call__(self, x):
        return self.base(x)


ORNSTEIN_G = SeedFunction(
    "ornstein_g", PLFunction([(F(i, 7), v) for i, v in enumerate(ORNSTEIN_G_VALUES)])
)
FIXED_H = SeedFunction(
    "fixed_h", PLFunction([(F(i, 13), v) for i, v in enumerate(FIXED_H_VALUES)])
)

SEEDS = {"ornstein-g": ORNSTEIN_G, "ornstein_g": ORNSTEIN_G, "g": ORNSTEIN_G,
         "fixed-h": FIXED_H, "fixed_h": FIXED_H, "h": FIXED_H}


def unnormalized_h() -> PLFunction:
    """The table function on ``[0, 13]`` with integer knots."""
    return PLFunction(list(enumerate(FIXED_H_VALUES)))


def get_seed(name: str) -> SeedFunction:
    try:
        return SEEDS[name]
    except KeyError:
        raise KeyError(f"unknown seed {name!r}; choose ornstein-g or fixed-h") from None
