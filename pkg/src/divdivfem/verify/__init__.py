from . import checks, report, surjectivity
from .checks import (
    check_exactness_global,
    check_identity_suite,
    check_kernel_characterization,
    check_polynomial_derham,
    check_polynomial_divdiv,
)
from .report import VerificationReport
from .surjectivity import check_divdiv_surjectivity_constructive
