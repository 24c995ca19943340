"""Exact density calculus for piecewise-linear functions.

The package builds, from exact rationals up, the objects needed to study
approximate maxima and nowhere-monotone constructions: interval sets,
PL functions and their level sets, the high-density components ``G_ε``,
the nested approximate-maximum search, self-affine insertion constructions
and a Banach–Mazur game simulator.
"""

from .density import (
    AffinePair,
    affine_transform,
    density,
    density_sequence,
    diffquot_set,
    dq,
    eval_at,
    inf_on,
    level_set,
    measure,
    preimage_measure,
    sup_on,
    superlevel,
)
from .errors import (
    CertificateError,
    DomainError,
    FormatError,
    ParameterError,
    PLDensityError,
    PreconditionError,
    ResourceError,
)
from .intervals import Interval, IntervalSet
from .omalley import (
    ComponentList,
    LemmaStepResult,
    MaxSearchCertificate,
    StrictIncrease,
    Witness,
    approx_max_search,
    g_epsilon,
    g_epsilon_measure_bound_check,
    max_straddling_density,
    monotonicity_witness,
    omalley_step,
)
from .plfunc import PLFunction, sup_distance
from .rational import Rat, as_rat, format_rat, parse_rat
from .seeds import FIXED_H, ORNSTEIN_G, SeedFunction, get_seed

__version__ = "0.1.0"
