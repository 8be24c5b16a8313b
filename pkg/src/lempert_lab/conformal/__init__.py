from .maps import (
    AffineDiscMap,
    ConformalMap,
    ExplicitDiscMap,
    MobiusMap,
    NumericalRiemannMap,
    build_riemann_map,
    cauchy_riemann_residual,
    disc_automorphism,
    example4_domain,
    map_forward,
    map_inverse,
    the_unit_disc,
)

__all__ = [
    "AffineDiscMap",
    "ConformalMap",
    "ExplicitDiscMap",
    "MobiusMap",
    "NumericalRiemannMap",
    "build_riemann_map",
    "cauchy_riemann_residual",
    "disc_automorphism",
    "example4_domain",
    "map_forward",
    "map_inverse",
    "the_unit_disc",
]
