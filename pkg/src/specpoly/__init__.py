"""Special polynomials z(beta_1, ..., beta_s, t0) over finite fields."""
from .analysis import (
    DirichletSpec,
    ZeroReport,
    degree_invariance_check,
    dirichlet_specialize,
    sheats_degree,
    trivial_zero_report,
)
from .digits import DigitPerm, carry_free, digits_base_q, length_l, perm_apply
from .field import FieldCtx, FqElem, field_arith, field_create, field_embed
from .polyring import (
    BudgetExceeded,
    Const,
    MonicUPoly,
    MultiPoly,
    Var,
    degree_in_t0,
    monic_enumerate,
    multiplicity_at_t0,
    poly_arith,
    substitute,
)
from .special import (
    SpecialPoly,
    TheoremViolation,
    frobenius_twist_check,
    phi_degree,
    witness_specialization,
    z_direct,
    z_general,
    z_recursive_ones,
)

__all__ = [
    "BudgetExceeded",
    "Const",
    "DigitPerm",
    "DirichletSpec",
    "FieldCtx",
    "FqElem",
    "MonicUPoly",
    "MultiPoly",
    "SpecialPoly",
    "TheoremViolation",
    "Var",
    "ZeroReport",
    "carry_free",
    "degree_in_t0",
    "degree_invariance_check",
    "digits_base_q",
    "dirichlet_specialize",
    "field_arith",
    "field_create",
    "field_embed",
    "frobenius_twist_check",
    "length_l",
    "monic_enumerate",
    "multiplicity_at_t0",
    "perm_apply",
    "phi_degree",
    "poly_arith",
    "sheats_degree",
    "substitute",
    "trivial_zero_report",
    "witness_specialization",
    "z_direct",
    "z_general",
    "z_recursive_ones",
]
