"""
frobkit: exact Frobenius invariants of quotients of polynomial rings over
prime fields.
"""

from .config import ENGINE_VERSION as __version__
from .errors import FrobkitError
from .groebner import GroebnerBasis, IdealHandle, buchberger, colength, krull_dimension, normal_form
from .ideals import (
    QuotientIdeal,
    RingPresentation,
    bracket_power,
    ideal_colon,
    ideal_colon_ideal,
    ideal_intersect,
    ideal_product,
    ideal_sum,
    socle_dimension,
    socle_generator,
)
from .invariants import (
    SOP,
    ChainLink,
    fedder_hypersurface_oracle,
    find_sop,
    fsig_function_chain,
    fsig_function_gorenstein,
    fsig_ideals_gorenstein,
    hk_function,
    hk_of_fsig_ideal_sequence,
    is_f_pure,
    relative_hk,
    relative_hk_ratio,
    sequence_limit,
    splitting_prime_probe,
    tc_membership,
)
from .pairs import PairSpec, ideal_ceil_power, pair_fsig_estimate, pair_fsig_function, parameter_power_chain
from .polynomial import MonomialOrder, Polynomial, PolyRing
from .ringfile import RingFile, parse_ring_file, parse_ring_text
from .tables import Estimate, InvariantTable, hk_estimate
