"""Exact reduction theory of binary quadratic forms over Z[lambda_p] for
Hecke groups: lambda-continued fractions, form/number dictionary, reduced
cycles, equivalence, and the transfer map on simple numbers."""

from .cf import DEFAULT_MAX_STEPS, AdmissibilityReport, ExpansionTrace, PeriodicCF, \
    cf_from_json, cf_to_json, convergents, cyclic_equal, evaluate_finite, \
    evaluate_periodic, expand, is_admissible, is_parabolic_period, leading_ones, \
    parse_cf, render_cf, reverse_period
from .errors import ConsistencyError, DomainError, EllipticElementError, HeckeError, \
    IdentityElementError, IncompatibleRadicandError, NonClosingOrbitError, \
    NonHyperbolicError, NonPeriodicError, ParseError, RootChoiceError, \
    SquareRadicandError, UsageError
from .forms import QForm, ReducedCycle, ReductionTrace, SimpleOrbit, act, alpha_of, \
    discriminant, equivalent, form_from_json, form_of, form_to_json, is_hyperbolic_form, \
    is_indefinite, is_reduced_form, is_reduced_number, is_simple_form, is_simple_number, \
    negate, parse_form, phi_apply, phi_orbit, reduce, reduced_cycle, render_form, \
    simple_set, simple_to_reduced, stabilizer_generators
from .group import GroupElem, RawMat, c_seq, classify, fixed_points, gen_S, gen_T, \
    gen_U, identity, mat_inv, mat_mul, matrix_from_json, matrix_to_json, parse_word, \
    proj_equal, render_matrix, u_power, u_zero, word_to_matrix
from .ring import FieldContext, RingElem, build_field, elem_from_json, elem_to_json, \
    parse_elem, render_elem, sqrt_in_field
from .surd import Surd, floor_div_lambda, hecke_conjugate, infinity, invert_surd, \
    make_surd, mobius_apply, parse_surd, render_surd, surd_compare, surd_equal_key, \
    surd_from_json, surd_mul, surd_scale, surd_sign, surd_sub, surd_to_json

__version__ = "0.1.0"
