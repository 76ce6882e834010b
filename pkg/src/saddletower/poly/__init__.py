from .fp import fp_residual, fp_scale, fp_solve, nodes_from_polys, polys_from_nodes
from .hypergeom import (
    four_end_config,
    hypergeom_rigidity_recurrence,
    hypergeometric_coefficient,
    hypergeometric_ode_residual,
    hypergeometric_poly,
    n1_config,
    n1_embedding_flags,
    pochhammer,
)
from .lame import (
    HeunSolution,
    LameData,
    heun_polynomials,
    heun_solutions,
    lame_data_for_layer,
    lame_operator_residual,
    one_n_one_config,
    outer_gap,
    symmetric_block,
)
from .polynomial import (
    ComplexPolynomial,
    backward_error_ok,
    poly_derive,
    poly_eval,
    poly_from_roots,
    poly_mul,
    poly_roots,
)
