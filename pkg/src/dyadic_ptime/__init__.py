"""Polynomial-time computability over dyadic rationals and over the reals:
exact dyadics, Cauchy oracles, moduli of continuity, the separation
witnesses and a cost lab that measures them."""

from .dyadic import (
    Dyadic,
    DomainError,
    MalformedLiteral,
    NotLowestForm,
    dyadic,
    dyadic_from_string,
    floor,
    length,
    round_to_precision,
    tau_star_decode,
    tau_star_encode,
    to_string,
)
from .oracle import canonical_oracle, instrument, jittered_oracle
from .modulus import (
    EmptyStrip,
    Modulus,
    ModulusReport,
    check_modulus_bounded,
    check_modulus_open,
    min_modulus_pwl,
)
from .witnesses import (
    combined_eval,
    epsilon,
    exp_digit_demo,
    precision_gated_eval,
    precision_gated_machine,
    sawtooth_eval,
    slow_decay_eval,
)
from .polytime import RealFunctionSpec, bundled_specs, evaluate
from .costlab import CostReport, classify, growth_scan, measure_dyadic, measure_real

__version__ = "0.1.0"
