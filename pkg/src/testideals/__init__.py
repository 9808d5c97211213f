"""Exact computation of generalized test ideals over prime fields."""

from .algebra import MonomialOrder, Polynomial, RingContext, format_polynomial, parse_polynomial
from .errors import (
    AlgebraError,
    ContainmentViolation,
    DegreeBoundTooSmall,
    DegreeExplosion,
    GenericityFailure,
    HeightMismatch,
    NonPrimeChar,
    NonPrincipalLink,
    NoTestElementFound,
    NotStabilized,
    ParseError,
    ZeroDivisorGamma,
)
from .frobenius import FrobeniusLevel, bracket_power, frobenius_root, root_of_product
from .groebner import (
    FormalCombination,
    Ideal,
    height,
    ideal_colon,
    ideal_contains,
    ideal_intersection,
    krull_dimension,
    limits,
    normal_form,
    reduced_groebner_basis,
)
from .jobs import JobSpec, emit_result, parse_job, run_job
from .linkage import (
    LinkageProblem,
    fedder_ci_check,
    generic_regular_sequence,
    link_generator,
    verify_claim2,
)
from .restriction import RestrictionReport, quotient_divisorial_test_ideal, restriction_report
from .tau import (
    TestElement,
    find_test_element,
    is_purely_f_regular,
    is_strongly_f_regular_quotient,
    monomial_test_ideal_oracle,
    test_ideal,
    test_ideal_along,
)

__version__ = "0.1.0"
