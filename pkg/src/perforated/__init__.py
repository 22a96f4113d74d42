"""Perforated Yoneda algebras over quiver algebras, their mutations, and
certificates for the resulting derived equivalences."""
from .exactlin import FieldSpec
from .path_algebra import PathAlgebra, Quiver, build_algebra, load_algebra
from .reps import Rep, RepMap, parse_module
from .homological import ExtElement, ExtSpace, ext_space, yoneda_compose
from .scalgebra import SCAlgebra
from .phi_yoneda import NonAdmissiblePhi, PhiYoneda, build_phi_yoneda, is_admissible
from .mutation import MutationReport, ShortExactSeq, check_hypotheses, mutate
from .tilting import verify_equivalence
from .invariants import analyze, compare_invariants

__version__ = "0.1.0"

__all__ = [
    "FieldSpec", "PathAlgebra", "Quiver", "build_algebra", "load_algebra",
    "Rep", "RepMap", "parse_module", "ExtElement", "ExtSpace", "ext_space", "yoneda_compose",
    "SCAlgebra", "NonAdmissiblePhi", "PhiYoneda", "build_phi_yoneda", "is_admissible",
    "MutationReport", "ShortExactSeq", "check_hypotheses", "mutate", "verify_equivalence",
    "analyze", "compare_invariants",
]
