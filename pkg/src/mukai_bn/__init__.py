"""Weak Brill-Noether arithmetic for Mukai vectors on Picard-rank-one K3 surfaces."""

from .lattice import (
    DomainError,
    K3Context,
    MukaiVector,
    STRUCTURE_SHEAF,
    dual,
    euler_char,
    is_isotropic,
    is_positive,
    is_primitive,
    is_spherical,
    line_bundle,
    pairing,
    reflect,
    square,
    twist,
)
from .walls import (
    Wall,
    compare_walls,
    height_at_s_zero_sq,
    is_at_or_above_ox1,
    ox1_wall_height_sq,
    wall_between,
)
from .destabilizers import (
    Destabilizer,
    SearchBox,
    brute_force_Dv,
    find_Dv,
    find_DvBN,
    largest_tss_wall,
    lemma_box,
)
from .classify import (
    CrossCheckError,
    FamilyMatch,
    ResolutionNode,
    UnknownPatternError,
    Verdict,
    enumerate_counterexamples,
    family_matches,
    family_rows,
    generic_cohomology,
    match_family,
    minimal_a,
    resolve,
    weak_bn,
)
from .criteria import (
    GGVerdict,
    TwistedH1,
    globally_generated,
    has_mu_stable,
    only_non_locally_free,
    twisted_h1,
    ulrich_vector,
)

__all__ = [name for name in dir() if not name.startswith("_")]
