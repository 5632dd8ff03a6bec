"""Construction and numerical certification of 3x3 PPT entangled edge states."""

__version__ = "0.1.0"

from ._backend import HAVE_NUMBA, backend_name
from .blocks import BlockMatrix, conjugate_partner, hadamard, matricize, partial_transpose, pure_state, vectorize
from .certify import (
    CertificationReport,
    EdgeReport,
    EdgeVerdict,
    PptReport,
    SearchConfig,
    candidate_check,
    classify,
    dual_face_membership,
    edge_search,
    gram_rank_prediction,
    is_ppt,
    rank_profile,
)
from .families import (
    Family,
    FamilySpec,
    dual_subspaces,
    general_state,
    gram_route_state,
    named_family,
    rho_matrix,
    witnesses_85,
)
from .maps import DecomposableMap, apply_map, pairing, phi_family, positivity_margin
from .numlin import (
    MatrixSubspace,
    TolerancePolicy,
    hermitian_eig,
    join_subspaces,
    numerical_rank,
    residual_to_subspace,
    smallest_singular_value,
    spectral_split,
)
