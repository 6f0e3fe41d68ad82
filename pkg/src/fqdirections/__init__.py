"""Direction sets, Redei polynomials and additive checks over F_p and F_{p^2}."""

from .field import FieldCtx, FieldError, field_new, generated_subfield
from .geometry import product_directions, pointset_directions, grid
from .poly import Poly
from .redei import check_claim31, check_fst_bounds, profile
from .verdict import Status, Verdict

__all__ = [
    "FieldCtx",
    "FieldError",
    "Poly",
    "Status",
    "Verdict",
    "check_claim31",
    "check_fst_bounds",
    "field_new",
    "generated_subfield",
    "grid",
    "pointset_directions",
    "product_directions",
    "profile",
]
