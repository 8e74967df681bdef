"""Single-server private linear transformation with joint privacy.

A client who wants l linear combinations of d dataset rows can download
as few as k - d + l coded rows without revealing anything about which
rows or which combinations.  This package provides the field and matrix
machinery, the two query constructions, brute-force verifiers for the
privacy and recoverability conditions, exact rate accounting, and a
small wire protocol plus CLI around them.
"""

from .gf import FieldElement, FieldMismatchError, PrimeField, is_prime
from .matrix import (
    EnumerationCapError,
    Matrix,
    RrefResult,
    ShapeError,
    SingularMatrixError,
    matrix_from_lists,
    random_invertible,
    random_matrix,
    vstack,
)
from .codes import (
    ExtensionChoice,
    ExtensionError,
    GrsCode,
    canonical_placement,
    extend_mds_generic,
    extend_mds_grs,
    grs_dual_multipliers,
    grs_generator,
    parity_to_generator,
    puncture,
    recovery_polynomials,
    supported_subcode,
)
from .protocols import (
    Answer,
    Dataset,
    Demand,
    ProtocolError,
    Query,
    RecoveryPlan,
    global_coefficients,
    jplt1_grs_query,
    jplt1_query,
    jplt2_query,
    pir_baseline_query,
    plc_baseline_queries,
    recover,
    server_answer,
)
from .verify import (
    PrivacyReport,
    RateSummary,
    capacity,
    check_feasibility,
    check_joint_privacy,
    check_recoverability,
    check_symmetry_property,
    pir_rate,
    plc_rate,
    rate_summary,
    rate_table,
    write_rate_csv,
)

__version__ = "0.1.0"
