"""Quantum majority-rule voting.

Preference bases over weak orders, a small dense state algebra, the QMR,
QMR2 and QMR3 constitutions, checkers for the quantum Arrow postulates, and
constructors for entanglement-based voting tactics.
"""

from .constitutions import (
    CycleError,
    CycleReport,
    NonPureInput,
    Profile,
    Revote,
    SocietyOutcome,
    classical_mr,
    qmr,
    qmr2,
    qmr3,
    qmr3_distribution,
    qmr3_sample,
    qmr_basis_term,
)
from .graphs import MajorityDigraph, build_majority_digraph, tarjan_scc
from .prefs import (
    CandidateSet,
    Mode,
    PreferenceBasis,
    PreferenceError,
    Relation,
    WeakOrder,
    enumerate_basis,
    format_order,
    parse_order,
    relation,
    reverse_order,
    subspace_indices,
)
from .properties import (
    PropertyReport,
    arrow_disproof,
    check_dictatorship,
    check_qiia,
    check_transitivity,
    check_unanimity,
    support_pattern,
)

__version__ = "0.1.0"
