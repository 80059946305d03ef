"""oak: exact symbolic toolkit for the symplectic oscillator Lie algebra.

Core layers: scalars (exact rational functions), the Lie algebra and its
bracket, PBW normal ordering in the enveloping algebra, the rank-n Weyl
algebra with its Laurent-type weight modules, the oscillator and tensor
realizations with mechanical homomorphism checks, localization twists, and
exact character tables with factorization and support classifiers.
"""

from .scalars import ParseError, Scalar, ScalarContext
from .liealg import (
    BasisElement,
    LieElement,
    Weight,
    Z,
    basis,
    bracket,
    bracket_basis,
    decomposition_parts,
    dim_g,
    h_,
    root_system,
    weight_of,
    x_,
)
from .uea import (
    UEAElement,
    VermaVector,
    act_on_verma,
    multiply,
    normal_order,
    reduce_central,
)
from .weyl import (
    FullLaurent,
    LaurentVector,
    QuotientModule,
    ShaleWeil,
    WeylElement,
    apply,
    apply_inverse_lowering,
    straighten_all,
    straighten_highest,
    support,
    weyl_commutator,
    weyl_multiply,
)
from .morphisms import (
    TensorElement,
    TwistSpec,
    f_basis,
    f_map,
    phi_basis,
    phi_lie,
    phi_map,
    theta_generator,
    verify_lie_hom,
    verify_theta_conjugation,
)
from .characters import (
    CharTable,
    FlagSets,
    char_module,
    classify_flags,
    compare_characters,
    convolve,
    delta_char,
    finite_simple_sp_char,
    generalized_verma_char,
    kostant_partition,
    verify_generalized_factorization,
    verify_verma_factorization,
    verma_char,
)

__version__ = "0.1.0"
