from . import assembly, complex
from .assembly import GlobalOperatorMatrix, GlobalSpace, assemble_global_space, operator_matrix
from .complex import (
    MeshComplex,
    build_box_mesh,
    build_tet_mesh,
    permute_mesh,
    scale_mesh,
    single_tet_mesh,
    two_tet_mesh,
)
