"""O(3)-equivariant tensor algebra.

Irreducible representations, real Wigner D matrices, Clebsch-Gordan
coefficients, spherical harmonics, parameterized equivariant tensor
products, reduction of index-symmetrized tensors onto irreps, sphere-grid
transforms, and an equivariance test harness.
"""

from .irreps import (
    Irrep,
    Irreps,
    IrrepsParseError,
    MulIrrep,
    parse_irreps,
    selection_rule,
    sh_irreps,
)
from .rotations import (
    EulerAngles,
    Generators,
    O3Element,
    compose,
    complex_to_real,
    d_o3,
    generator_about,
    generators,
    identity_o3,
    inversion_o3,
    irreps_matrix,
    matrix_to_angles,
    rand_angles,
    rand_o3,
    rot_matrix,
    wigner_d,
)
from .cg import invariant_subspace_dim, wigner_3j
from .spherical import sh_blocks, sh_orthogonality_check, spherical_harmonics
from .tensor_product import (
    Instruction,
    LinearSpec,
    TensorProductError,
    TensorProductSpec,
    ZeroPathWarning,
    build_spec,
    evaluate,
    full_tensor_product,
    fully_connected,
    linear,
    tensor_square,
)
from .reduction import (
    FormulaError,
    IndexFormula,
    ReducedBasis,
    chained_decomposition,
    parse_formula,
    permutation_basis,
    permutation_matrix,
    reduce_tensor,
)
from .s2grid import S2Grid, from_grid, make_grid, to_grid
from .harness import (
    EquivarianceError,
    EquivarianceReport,
    EquivariantPolynomial,
    assert_equivariant,
    check_equivariance,
    component_norm_check,
    polynomial_forward,
    radius_graph,
    rescale_activation,
    scatter_sum,
)

__version__ = "0.1.0"
