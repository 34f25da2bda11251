from . import fields, frames, green, operators, surface
from .fields import TensorField
from .frames import EdgeFrame, FaceFrame
from .green import verify_green_identities
from .operators import (
    algebraic_ops,
    curl,
    curl_col,
    dev,
    dev_grad,
    div,
    div_col,
    div_div,
    first_order_ops,
    grad,
    mspn,
    skw,
    sym,
    sym_curl,
    trace,
)
from .surface import surface_ops
