"""Projectively self-dual polygons and curves in the real and complex projective plane."""

from .construct import (
    ChainParams,
    ModuliReport,
    RotationalParams,
    chain_selfdual,
    inscribed_tangent_map,
    moduli_dimension,
    poncelet_polygon,
    regular_polygon,
    rotational_selfdual,
    spherical_chain,
)
from .polygon import (
    CrossRatioCoords,
    Polygon,
    SelfDualityCertificate,
    cross_ratio_coords,
    dual_polygon,
    sides,
    test_self_dual,
)

__all__ = [
    "ChainParams",
    "CrossRatioCoords",
    "ModuliReport",
    "Polygon",
    "RotationalParams",
    "SelfDualityCertificate",
    "chain_selfdual",
    "cross_ratio_coords",
    "dual_polygon",
    "inscribed_tangent_map",
    "moduli_dimension",
    "poncelet_polygon",
    "regular_polygon",
    "rotational_selfdual",
    "sides",
    "spherical_chain",
    "test_self_dual",
]
