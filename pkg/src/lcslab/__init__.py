"""Degree-by-degree lower central series computations for graded algebras.

Modules: free polynomial arithmetic (freealg), exact linear algebra
(linalg), finitely presented quotients (presented), the filtration engine
(lcs), differential-form realizations (fsforms), counting series (series),
free Lie algebra measurements (freelie), and the CLI driver (cli).
"""

from .freealg import (
    DegreeIndex,
    FieldSpec,
    FreePolynomial,
    commutator,
    format_polynomial,
    left_normed_bracket,
    multiply,
    parse_polynomial,
    symmetrize3,
)
from .lcs import FiltrationTable, FreeContext, LcsEngine, QuotientContext, filtration_table
from .linalg import InclusionViolationError, Subspace, quotient_dim, span
from .presented import (
    GradedQuotient,
    Presentation,
    abelianization_squarefree,
    parse_relation_file,
    presentation_from_degrees,
    random_relation,
)
from .series import TruncSeries, necklace_count, witt

__version__ = "0.1.0"
