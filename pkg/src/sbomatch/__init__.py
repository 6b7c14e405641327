"""Local-search solvers and exact verification oracles for matroid parity
and matroid matching, with hardness-instance generators."""

from .errors import ParseError, SizeLimitError, ValidationError
from .instances import (
    MatchingInstance,
    ParityInstance,
    ReductionMap,
    as_weight,
    gen_random,
    matching_to_parity,
    parse,
    serialize,
    validate,
)
from .matroids import (
    AxiomViolation,
    CliqueMatroid,
    ColoopExtension,
    CopiesMatroid,
    CountingMatroid,
    ExplicitMatroid,
    Matroid,
    OracleStats,
    PartitionMatroid,
    TransversalMatroid,
    TruncationMatroid,
    UniformMatroid,
    add_coloops,
    check_matroid_axioms,
    truncate,
    with_counter,
)
from .sbo import (
    ExchangeBijection,
    GameReport,
    SboCounterexample,
    brute_force_parity_decider,
    check_sbo,
    clique_matroid,
    find_exchange_bijection,
    has_clique,
    hidden_oracle_game,
    max_feasible_matching_size,
)
from .solvers import (
    SMove,
    Solution,
    best_smove,
    brute_force_matching_opt,
    brute_force_opt,
    greedy,
    is_feasible_matching,
    local_search_unweighted,
    local_search_weighted,
    ptas,
    ptas_move_size,
    solve_matching,
    solve_parity,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "CliqueMatroid",
    "ColoopExtension",
    "CopiesMatroid",
    "CountingMatroid",
    "ExchangeBijection",
    "ExplicitMatroid",
    "GameReport",
    "MatchingInstance",
    "Matroid",
    "OracleStats",
    "ParityInstance",
    "ParseError",
    "PartitionMatroid",
    "ReductionMap",
    "SboCounterexample",
    "SizeLimitError",
    "SMove",
    "Solution",
    "TransversalMatroid",
    "TruncationMatroid",
    "UniformMatroid",
    "ValidationError",
    "add_coloops",
    "as_weight",
    "best_smove",
    "brute_force_matching_opt",
    "brute_force_opt",
    "brute_force_parity_decider",
    "check_matroid_axioms",
    "check_sbo",
    "clique_matroid",
    "find_exchange_bijection",
    "gen_random",
    "greedy",
    "has_clique",
    "hidden_oracle_game",
    "is_feasible_matching",
    "local_search_unweighted",
    "local_search_weighted",
    "matching_to_parity",
    "max_feasible_matching_size",
    "parse",
    "ptas",
    "ptas_move_size",
    "serialize",
    "solve_matching",
    "solve_parity",
    "truncate",
    "validate",
    "with_counter",
]
