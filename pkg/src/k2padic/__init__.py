"""Exact computation of reduced K_2, HC_1 and Oliver's logarithm for group rings of finite abelian p-groups."""

from .exactlin import (
    IntMatrix,
    InvariantFactorGroup,
    PresentedAbGroup,
    cokernel,
    smith_normal_form,
    subgroup_order,
)
from .grpring import GroupRingElem, delta_inv, e_G, exp_elem, frobenius_phi, gamma_G, in_pm_G, log_unit
from .homology import h2_tilde, hc1_closed, hc1_presentation, kaehler_mod_dI
from .ktmaps import DecomposedUnit, K2Symbol, epsilon2, gamma2, gamma2_ext, omega2, wh2_order
from .padic import PadicScaled, teichmueller
from .pgroups import GroupElement, PGroupShape, direct_sum, enumerate_group, quotient_by_cyclic

__version__ = "0.1.0"

__all__ = [
    "IntMatrix",
    "InvariantFactorGroup",
    "PresentedAbGroup",
    "cokernel",
    "smith_normal_form",
    "subgroup_order",
    "GroupRingElem",
    "delta_inv",
    "e_G",
    "exp_elem",
    "frobenius_phi",
    "gamma_G",
    "in_pm_G",
    "log_unit",
    "h2_tilde",
    "hc1_closed",
    "hc1_presentation",
    "kaehler_mod_dI",
    "DecomposedUnit",
    "K2Symbol",
    "epsilon2",
    "gamma2",
    "gamma2_ext",
    "omega2",
    "wh2_order",
    "PadicScaled",
    "teichmueller",
    "GroupElement",
    "PGroupShape",
    "direct_sum",
    "enumerate_group",
    "quotient_by_cyclic",
]
