"""Curvature algebra on R^4: Weyl duality, conformal Osserman tests and quaternionic decompositions."""

from .curvature import kulkarni, r0, random_act, ricci, scalar, validate, weyl
from .duality import DualityReport, classify, lambda2, sd_blocks
from .osserman import adapted_basis, conf_jacobi_op, jacobi_op, osserman_exact, osserman_sampled
from .quaternion import QuaternionDecomposition, QuaternionStructure, r_phi, recover, standard_structure, synthesize

__all__ = [
    "DualityReport",
    "QuaternionDecomposition",
    "QuaternionStructure",
    "adapted_basis",
    "classify",
    "conf_jacobi_op",
    "jacobi_op",
    "kulkarni",
    "lambda2",
    "osserman_exact",
    "osserman_sampled",
    "r0",
    "r_phi",
    "random_act",
    "recover",
    "ricci",
    "scalar",
    "sd_blocks",
    "standard_structure",
    "synthesize",
    "validate",
    "weyl",
]
