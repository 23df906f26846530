"""Exact-rational calculus for Poincare DGCAs of Hodge type.

Validation and cohomology of finite-dimensional graded commutative
differential algebras over the rationals, Hodge-type decompositions, small
quotient models, homotopy transfer to ternary-and-higher operations on
cohomology, Hochschild/Harrison formality obstructions, and Massey product
sets, all in exact arithmetic.
"""

from .core import (
    CohomologyData, Dgca, DgcaMorphism, GradedBasis, GradedMap,
    NotConnectedError, Quotient, SubspaceFamily, ValidationReport,
    compute_cohomology, connectivity, is_quasi_iso, make_dgca, null_ideal,
    pairing_eval, quotient_by_ideal, validate_dgca, validate_poincare,
)
from .hodge import (
    HodgeDecomposition, HodgeError, HodgeNotFound, aperp_acyclicity,
    change_harmonic, dminus_apply, find_hodge, verify_hodge,
)
from .small import (
    GeneratingData, SmallQuotientResult, StructureReport, SubDgca,
    adapted_decomposition, adapted_splitting, generating_subspace,
    small_algebra, small_quotient,
)
from .transfer import (
    AInfinityMorphism, AInfinityStructure, tau_tensor, transfer_explicit,
    transfer_trees, verify_morphism, verify_stasheff,
)
from .obstruction import (
    Cochain, CompareResult, FormalityResult, cocycle_checks, compare_classes,
    formality_decision, hochschild_differential, mu3_cochain, solve_coboundary,
)
from .massey import (
    DefiningSystem, ProductDescription, ScreenResult, crosscheck_mu3,
    find_defining_system, massey_product, triviality_screen,
)
from .extension import extend, extend_decomposition, extended_mu3
from .interchange import ParseError, dump_dgca, load_dgca, loads_dgca, save_dgca
from .catalog import CatalogEntry, catalog

__all__ = [name for name in dir() if not name.startswith("_")]
