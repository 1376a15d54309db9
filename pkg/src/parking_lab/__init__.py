"""Parking experiments with cars of assorted lengths.

Simulators for the assortment and sequence parking rules, membership and
permutation-invariance deciders, closed-form characterizations with
exact counts, exhaustive enumeration, and a differential verification
harness that checks every closed form against brute force.
"""

from .closed_form import (
    CountFormulaResult,
    TriplePattern,
    catalan,
    classify_triple,
    constant_invariant,
    first_invariant_probe,
    from_classical,
    fuss_catalan,
    inv_pair_set,
    inv_triple_set,
    is_minimally_invariant,
    is_minimally_invariant_alternate,
    mi_pair,
    mi_quadruple_conjecture,
    mi_triple,
    nondecreasing_member,
    pf_count,
    ps_count_formula,
    to_classical,
)
from .core import CarLengths, ParkOutcome, PreferenceList, Rule, park
from .enumeration import (
    BudgetExceededError,
    EnumerationResult,
    Filter,
    enumerate_set,
    multiset_permutations,
    nondecreasing_tuples,
)
from .predicates import (
    InvarianceVerdict,
    Permutation,
    Witness,
    is_invariant,
    is_member,
    is_pi_invariant,
    is_t_invariant,
    removal_shift,
    small_entry_obstruction,
)
from .verify import (
    CHECKS,
    CheckOutcome,
    Disagreement,
    NoWitnessError,
    ReplayError,
    StaleWitnessError,
    SweepReport,
    SweepSpec,
    replay_witness,
    run_sweep,
)

__all__ = [
    "BudgetExceededError",
    "CHECKS",
    "CarLengths",
    "CheckOutcome",
    "CountFormulaResult",
    "Disagreement",
    "EnumerationResult",
    "Filter",
    "InvarianceVerdict",
    "NoWitnessError",
    "ParkOutcome",
    "Permutation",
    "PreferenceList",
    "ReplayError",
    "Rule",
    "StaleWitnessError",
    "SweepReport",
    "SweepSpec",
    "TriplePattern",
    "Witness",
    "catalan",
    "classify_triple",
    "constant_invariant",
    "enumerate_set",
    "first_invariant_probe",
    "from_classical",
    "fuss_catalan",
    "inv_pair_set",
    "inv_triple_set",
    "is_invariant",
    "is_member",
    "is_minimally_invariant",
    "is_minimally_invariant_alternate",
    "is_pi_invariant",
    "is_t_invariant",
    "mi_pair",
    "mi_quadruple_conjecture",
    "mi_triple",
    "multiset_permutations",
    "nondecreasing_member",
    "nondecreasing_tuples",
    "park",
    "pf_count",
    "ps_count_formula",
    "removal_shift",
    "replay_witness",
    "run_sweep",
    "small_entry_obstruction",
    "to_classical",
]
