"""Exact computations with approximate subgroups of finite groups.

Core objects: Group (Cayley-table finite group), Subset (immutable element
set), exact commuting probabilities, approximate-subgroup certificates, and
constructive witness pipelines for the structure theorems, plus a registry of
checkable inequalities and a randomized verification suite.
"""

from .approx import (
    ApproxCertificate,
    certify,
    conjugate_growth_check,
    growth_constants,
    ruzsa_cover,
)
from .corpus import (
    alternating,
    cyclic,
    default_corpus,
    dihedral,
    named,
    quaternion,
    symmetric,
)
from .errors import (
    ApproxCommuteError,
    BadParams,
    ClassCountCapExceeded,
    EmptySet,
    ExactCapExceeded,
    GroupMismatch,
    HypothesisViolated,
    NoIdentity,
    NoInverse,
    NormalEnumerationCapExceeded,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
    NotSubgroup,
    NotSymmetric,
    OrderCapExceeded,
    PowerCapExceeded,
    ProbabilityBelowEpsilon,
    SpecParseError,
)
from .family import ExampleInstance, ExampleParams, build_example, predicted_quantities
from .group import (
    Group,
    QuotientMap,
    build_from_permutations,
    build_from_table,
    center,
    centralizer_in,
    commutator_subgroup,
    conjugacy_class_under,
    conjugacy_classes,
    current_order_cap,
    direct_product,
    is_normal,
    is_subgroup,
    normal_subgroups,
    quotient,
    subgroup_closure,
)
from .probability import centralizer_profile, commuting_probability
from .rng import SplitMix64, derive_seed
from .statements import CheckResult, REGISTRY, check, statement_ids
from .subset import (
    Subset,
    invert,
    is_symmetric,
    power,
    product,
    symmetrize,
    translate,
    with_identity,
)
from .suite import SuiteConfig, SuiteReport, random_symmetric_subset, run_suite
from .witness import (
    CoreExtraction,
    WitnessReport,
    bounded_conjugate_cover,
    extract_core,
    witness_thm1,
    witness_thm2,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxCertificate",
    "ApproxCommuteError",
    "BadParams",
    "CheckResult",
    "ClassCountCapExceeded",
    "CoreExtraction",
    "EmptySet",
    "ExactCapExceeded",
    "ExampleInstance",
    "ExampleParams",
    "Group",
    "GroupMismatch",
    "HypothesisViolated",
    "NoIdentity",
    "NoInverse",
    "NormalEnumerationCapExceeded",
    "NotAssociative",
    "NotLatinSquare",
    "NotNormal",
    "NotSubgroup",
    "NotSymmetric",
    "OrderCapExceeded",
    "PowerCapExceeded",
    "ProbabilityBelowEpsilon",
    "QuotientMap",
    "REGISTRY",
    "SpecParseError",
    "SplitMix64",
    "Subset",
    "SuiteConfig",
    "SuiteReport",
    "WitnessReport",
    "alternating",
    "bounded_conjugate_cover",
    "build_example",
    "build_from_permutations",
    "build_from_table",
    "center",
    "centralizer_in",
    "centralizer_profile",
    "certify",
    "check",
    "commutator_subgroup",
    "commuting_probability",
    "conjugacy_class_under",
    "conjugacy_classes",
    "conjugate_growth_check",
    "current_order_cap",
    "cyclic",
    "default_corpus",
    "derive_seed",
    "dihedral",
    "direct_product",
    "extract_core",
    "growth_constants",
    "invert",
    "is_normal",
    "is_subgroup",
    "is_symmetric",
    "named",
    "normal_subgroups",
    "power",
    "predicted_quantities",
    "product",
    "quaternion",
    "quotient",
    "random_symmetric_subset",
    "ruzsa_cover",
    "run_suite",
    "statement_ids",
    "subgroup_closure",
    "symmetric",
    "symmetrize",
    "translate",
    "witness_thm1",
    "witness_thm2",
    "with_identity",
]
