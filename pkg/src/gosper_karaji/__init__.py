"""Gosper's summation algorithm and Gosper-Karaji identities, in exact arithmetic."""

from .errors import (
    DomainError,
    GosperKarajiError,
    InvalidPrefixSum,
    NoPrefixSum,
    NotHypergeometric,
    NotPolynomial,
    ParseError,
    ResourceLimit,
    ZeroDenominator,
)
from .expr import eval_term, to_latex, to_text
from .gosper import (
    Antidifference,
    GosperForm,
    definite_sum,
    degree_bound,
    gosper_form,
    gosper_record,
    gosper_sum,
    solve_key_equation,
)
from .hyper import HypergeometricRatio, term_ratio
from .lsum import (
    PrefixPair,
    PresentedIdentity,
    RawIdentity,
    build_prefix_pair,
    expand_polynomial_case,
    generate_identity,
    named_sequence_eval,
    present_identity,
    r_multiplier,
)
from .parser import parse_term
from .poly import Polynomial, dispersion_candidates, poly_gcd, resultant
from .ratfun import RationalFunction
from .verify import (
    ArraySpec,
    OracleVerdict,
    check_identity,
    check_range,
    oracle_lsum2d,
    oracle_lsum3d,
    oracle_special_1d,
    oracle_special_2d,
)
from .errata import ErrataEntry, errata_report

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
