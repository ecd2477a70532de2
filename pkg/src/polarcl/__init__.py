"""Cameron-Liebler sets of generators in finite classical polar spaces."""

__version__ = "0.1.0"

from .geometry import (  # noqa: E402
    CapacityError,
    Family,
    PolarSpace,
    PolarSpaceKind,
    Subspace,
    build_space,
    classify_type,
    load_space,
)
from .scheme import SchemeData, build_scheme, p_eigenvalue  # noqa: E402
from .clsets import GeneratorSet, check, is_cl_disjointness, is_degree_one, parameter  # noqa: E402

__all__ = [
    "__version__",
    "CapacityError", "Family", "PolarSpace", "PolarSpaceKind", "Subspace",
    "build_space", "classify_type", "load_space",
    "SchemeData", "build_scheme", "p_eigenvalue",
    "GeneratorSet", "check", "is_cl_disjointness", "is_degree_one", "parameter",
]
