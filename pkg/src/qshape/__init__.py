"""Exact invariants and lattice shapes of pure quartic fields Q(m^(1/4))."""

from .arith import Factorization, factor
from .census import (
    CountReport,
    FieldRecord,
    Rect,
    Region,
    count_C_tau,
    enumerate_fields,
    non_carefree_fraction,
    theorem_ratio_report,
)
from .densities import (
    DensityTable,
    M_star,
    alpha,
    brute_force_A,
    carefree_density,
    is_carefree,
    is_l_carefree,
    mu_hat_box,
    n_tau,
    psi,
    psi_star,
    psi_tau,
)
from .errors import QShapeError
from .fields import (
    FieldClass,
    NormalForm,
    PureQuarticField,
    Type,
    classify,
    counting_normal_form,
    disc_bound_to_N,
    discriminant,
    funakura_normal_form,
    index_square_check,
    pure_quartic_field,
    raw_abc,
)
from .gram import (
    ShapeDescriptor,
    change_of_basis,
    gram,
    gram_numeric,
    gram_perp,
    gram_typeII,
    project_perp,
    shape,
    shape_params,
    torus_factorization_check,
)
from .lattice import (
    area_S,
    boundary_length_bound,
    count_R_exact,
    count_S_exact,
    lipschitz_check,
    predicted_count_R,
)
from .quadratic import QuadraticReal, parse_quadratic, quad_eval
from .reduction import IwasawaCoords, in_F3, iwasawa, minkowski_reduce, shapes_equivalent

__version__ = "0.1.0"
