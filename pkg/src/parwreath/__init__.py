"""Partition-preserving transformation monoids, wreath products and their ranks."""

from .enumeration import ClosureResult, closure, contains, is_generating, units
from .errors import (
    BudgetExceededError,
    DegreeMismatchError,
    InvalidDegreeError,
    NotInvertibleError,
    NotPartitionPreservingError,
    ParseError,
    UnsupportedCaseError,
)
from .rank import (
    RankReport,
    rank_exhaustive,
    rank_via_lemma1,
    relative_rank,
    verify_kernel_obstruction,
    verify_lemma1_consistency,
)
from .structures import (
    GeneratorSet,
    StructureKind,
    full_transformation_generators,
    membership,
    order_formula,
    paper_generators,
    symmetric_group_generators,
)
from .transform import (
    Kernel,
    Transformation,
    UniformPartition,
    compose,
    cycle,
    identity,
    inverse,
    is_permutation,
    kernel,
)
from .wreath import WreathElement, act, conjugate_by_top, flatten, multiply, theta, unflatten

__version__ = "0.1.0"
