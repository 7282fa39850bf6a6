"""Exact commuting probabilities over small finite rings."""

from .rings import (
    Basis,
    CapExceeded,
    FiniteRing,
    IllDefinedBilinearity,
    NotAbelianGroup,
    NotAssociative,
    NotDistributive,
    RingElement,
    RingError,
    RingMismatch,
    VALIDATION_CAP,
    ZeroNotAbsorbing,
    build_from_structure_constants,
    build_from_tables,
    direct_product,
)
from .subrings import (
    AdditiveSubgroup,
    NotAnIdeal,
    NotASubgroup,
    NotClosed,
    QuotientGroup,
    Subring,
    abelian_iso_type,
    additive_closure,
    center,
    centralizer,
    closure,
    commutator_image,
    commutator_subgroup,
    enumerate_subrings,
    invariant_factors_from_orders,
    is_ideal,
    quotient_group,
    quotient_ring,
    relative_center,
    subring_from_members,
    t_set,
    whole_ring,
    zero_subring,
)
from .probability import (
    PrDistribution,
    ProbValue,
    pr,
    pr_distribution,
    pr_r,
    pr_r_formula,
    pr_r_naive,
    pr_r_product,
)
from .bounds import (
    BoundReport,
    CheckRecord,
    NotContained,
    NotNested,
    check_all,
    check_centralizer_quotient,
    check_factor_inequality,
    check_nested,
    characterize_quotients,
    smallest_prime,
    x_set,
)
from .isoclinism import (
    GroupIso,
    GroupView,
    IllDefinedAMap,
    InvalidWitness,
    IsoclinismWitness,
    SquareDoesNotCommute,
    check_invariance,
    check_pairwise_isoclinism,
    enumerate_group_isomorphisms,
    find_z_isoclinism,
    quotient_view,
    subgroup_view,
    verify_witness,
)
from .catalog import (
    CatalogEntry,
    GENERATION_CAP,
    ParseError,
    UnknownBuiltin,
    abelian_moduli_chains,
    are_isomorphic,
    builtin,
    default_catalog,
    generate_rings,
    parse_ring_file,
    parse_ring_spec,
    serialize_ring,
)
from .verify import VerifyConfig, verify_catalog, verify_ring

__version__ = "0.1.0"
