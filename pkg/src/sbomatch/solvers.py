"""Solvers for the weighted matroid parity problem.

All arithmetic is exact (``fractions.Fraction``); every solver is a pure,
deterministic function of its arguments. A solution carries the chosen pair
indices, their exact total weight, the number of improving moves performed,
and the number of independence queries issued during the run.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import SizeLimitError, ValidationError
from .instances import (
    MatchingInstance,
    ParityInstance,
    as_weight,
    matching_to_parity,
    validate,
)
from .matroids import Matroid, with_counter

__all__ = [
    "Solution",
    "SMove",
    "greedy",
    "best_smove",
    "local_search_unweighted",
    "local_search_weighted",
    "ptas",
    "ptas_move_size",
    "brute_force_opt",
    "solve_parity",
    "solve_matching",
    "brute_force_matching_opt",
    "is_feasible_matching",
    "MAX_LOCAL_SEARCH_PAIRS",
    "MAX_BRUTE_FORCE_PAIRS",
]

MAX_LOCAL_SEARCH_PAIRS = 64
MAX_BRUTE_FORCE_PAIRS = 20

ALGORITHMS = ("greedy", "local1", "local2", "ptas", "exact")


@dataclass(frozen=True)
class Solution:
    """A feasible set of pair indices plus run statistics.

    For matching instances solved through the reduction, ``pair_indices``
    holds edge indices instead.
    """

    pair_indices: frozenset[int]
    weight: Fraction
    iterations: int
    oracle_calls: int


@dataclass(frozen=True)
class SMove:
    """Swap of at most ``s`` pairs: drop ``remove`` (a subset of the current
    solution), insert ``add`` (disjoint from it). Gain may be negative."""

    remove: frozenset[int]
    add: frozenset[int]
    gain: Fraction

    def apply(self, chosen: frozenset[int]) -> frozenset[int]:
        return (chosen - self.remove) | self.add


def _union(pairs: tuple[tuple[int, int], ...], idxs) -> frozenset[int]:
    out: list[int] = []
    for i in idxs:
        p = pairs[i]
        out.append(p[0])
        out.append(p[1])
    return frozenset(out)


def _weight(weights: tuple[Fraction, ...], idxs) -> Fraction:
    return sum((weights[i] for i in idxs), Fraction(0))


def _check_common(inst: ParityInstance, max_pairs: int) -> None:
    validate(inst)
    if inst.n > max_pairs:
        raise SizeLimitError(
            f"instance has {inst.n} pairs, beyond the bound of {max_pairs}"
        )


def _greedy_pick(oracle: Matroid, inst: ParityInstance) -> frozenset[int]:
    order = sorted(range(inst.n), key=lambda i: (-inst.weights[i], i))
    covered: frozenset[int] = frozenset()
    chosen: set[int] = set()
    for i in order:
        a, b = inst.pairs[i]
        cand = covered | {a, b}
        if oracle.is_independent(cand):
            covered = cand
            chosen.add(i)
    return frozenset(chosen)


def greedy(inst: ParityInstance, *, max_pairs: int = MAX_LOCAL_SEARCH_PAIRS) -> Solution:
    """Scan pairs by descending weight (ties by index) and keep each pair
    that preserves feasibility. A 2-approximation."""
    _check_common(inst, max_pairs)
    oracle, stats = with_counter(inst.matroid)
    chosen = _greedy_pick(oracle, inst)
    return Solution(chosen, _weight(inst.weights, chosen), 0, stats.calls)


def _enumerate_best(
    oracle: Matroid,
    pairs: tuple[tuple[int, int], ...],
    weights: tuple[Fraction, ...],
    chosen: frozenset[int],
    s: int,
    min_gain: Fraction,
) -> SMove | None:
    """Best qualifying move, or None.

    A move qualifies when its gain is positive and at least ``min_gain``;
    feasibility is checked (one oracle query on the resulting covered set)
    only for qualifying gains, since nothing else can be returned. Ties on
    gain break toward the lexicographically smallest (remove, add) pair of
    sorted index tuples.
    """
    n = len(pairs)
    inside = sorted(chosen)
    outside = [i for i in range(n) if i not in chosen]
    best: tuple[Fraction, tuple[tuple[int, ...], tuple[int, ...]]] | None = None
    for r_size in range(0, min(s, len(inside)) + 1):
        for rem in itertools.combinations(inside, r_size):
            w_rem = _weight(weights, rem)
            for a_size in range(0, min(s - r_size, len(outside)) + 1):
                if r_size == 0 and a_size == 0:
                    continue
                for add in itertools.combinations(outside, a_size):
                    gain = _weight(weights, add) - w_rem
                    if gain <= 0 or gain < min_gain:
                        continue
                    target = chosen.difference(rem).union(add)
                    if not oracle.is_independent(_union(pairs, target)):
                        continue
                    key = (rem, add)
                    if best is None or gain > best[0] or (
                        gain == best[0] and key < best[1]
                    ):
                        best = (gain, key)
    if best is None:
        return None
    gain, (rem, add) = best
    return SMove(frozenset(rem), frozenset(add), gain)


def best_smove(
    inst: ParityInstance,
    chosen,
    s: int,
    min_gain=Fraction(0),
    *,
    max_pairs: int = MAX_LOCAL_SEARCH_PAIRS,
) -> SMove | None:
    """Maximum-gain swap of at most ``s`` pairs improving ``chosen``.

    ``min_gain`` = 0 asks for any strictly improving move; a positive value
    additionally requires that much gain. Returns None when no move
    qualifies.
    """
    _check_common(inst, max_pairs)
    if s < 1:
        raise ValidationError("move size must be >= 1")
    min_gain = as_weight(min_gain)
    if min_gain < 0:
        raise ValidationError("min_gain must be >= 0")
    chosen = frozenset(int(i) for i in chosen)
    if any(not 0 <= i < inst.n for i in chosen):
        raise ValidationError("chosen pair index out of range")
    if not inst.matroid.is_independent(_union(inst.pairs, chosen)):
        raise ValidationError("chosen pair set is not feasible")
    return _enumerate_best(inst.matroid, inst.pairs, inst.weights, chosen, s, min_gain)


def local_search_unweighted(
    inst: ParityInstance,
    s: int,
    *,
    allow_general_weights: bool = False,
    max_pairs: int = MAX_LOCAL_SEARCH_PAIRS,
) -> Solution:
    """Start from the empty set and repeatedly apply the maximum-gain
    improving move of size at most ``s`` until none exists.

    Meant for unit weights, where each move gains at least one pair and the
    loop runs at most ``n`` times. Arbitrary weights still terminate (the
    weight strictly increases over finitely many subsets) but come with no
    iteration bound, so they must be enabled explicitly.
    """
    _check_common(inst, max_pairs)
    if s < 1:
        raise ValidationError("move size must be >= 1")
    if not allow_general_weights and any(w != 1 for w in inst.weights):
        raise ValidationError(
            "unweighted local search expects unit weights"
            " (allow_general_weights=True overrides)"
        )
    oracle, stats = with_counter(inst.matroid)
    chosen: frozenset[int] = frozenset()
    iterations = 0
    while True:
        move = _enumerate_best(oracle, inst.pairs, inst.weights, chosen, s, Fraction(0))
        if move is None:
            break
        chosen = move.apply(chosen)
        iterations += 1
        if not allow_general_weights and iterations > inst.n:
            raise RuntimeError("improving-move loop exceeded its cardinality bound")
    return Solution(chosen, _weight(inst.weights, chosen), iterations, stats.calls)


def local_search_weighted(
    inst: ParityInstance, s: int, *, max_pairs: int = MAX_LOCAL_SEARCH_PAIRS
) -> Solution:
    """Start from the greedy solution and repeatedly apply the maximum-gain
    move of size at most ``s`` whose gain is at least ``w(current)/n**2``
    (and positive), until none exists.

    Each move multiplies the weight by at least ``1 + 1/n**2`` and the start
    is within a factor two of optimal, so the loop runs at most
    ``ceil((1 + n**2) * ln 2)`` times; exceeding that indicates a bug.
    """
    _check_common(inst, max_pairs)
    if s < 1:
        raise ValidationError("move size must be >= 1")
    oracle, stats = with_counter(inst.matroid)
    chosen = _greedy_pick(oracle, inst)
    iterations = 0
    n = inst.n
    if n > 0:
        per = Fraction(1, n * n)
        cap = math.ceil((1 + n * n) * math.log(2))
        while True:
            threshold = _weight(inst.weights, chosen) * per
            move = _enumerate_best(
                oracle, inst.pairs, inst.weights, chosen, s, threshold
            )
            if move is None:
                break
            chosen = move.apply(chosen)
            iterations += 1
            if iterations > cap:
                raise RuntimeError("threshold local search exceeded its iteration bound")
    return Solution(chosen, _weight(inst.weights, chosen), iterations, stats.calls)


def ptas_move_size(eps, weighted: bool = True) -> int:
    """Move size giving a (1+eps)-approximation on strongly base orderable
    matroids: ``2*ceil(1/eps)+1`` unweighted, ``4*ceil(1/eps)+1`` weighted."""
    eps = as_weight(eps)
    if not 0 < eps < 1:
        raise ValidationError("epsilon must lie strictly between 0 and 1")
    t = math.ceil(1 / eps)
    return (4 * t if weighted else 2 * t) + 1


def ptas(
    inst: ParityInstance,
    eps,
    weighted: bool = True,
    *,
    max_pairs: int = MAX_LOCAL_SEARCH_PAIRS,
) -> Solution:
    """Local search with the move size selected from ``eps``; on strongly
    base orderable matroids the result is within a factor ``1+eps`` of
    optimal."""
    s = ptas_move_size(eps, weighted)
    if weighted:
        return local_search_weighted(inst, s, max_pairs=max_pairs)
    return local_search_unweighted(inst, s, max_pairs=max_pairs)


def brute_force_opt(
    inst: ParityInstance, *, max_pairs: int = MAX_BRUTE_FORCE_PAIRS
) -> Solution:
    """Exact optimum by enumerating every nonempty pair subset (one oracle
    query each); ties break toward the lexicographically smallest index
    tuple."""
    validate(inst)
    if inst.n > max_pairs:
        raise SizeLimitError(
            f"brute force limited to {max_pairs} pairs (got {inst.n})"
        )
    oracle, stats = with_counter(inst.matroid)
    best: tuple[int, ...] = ()
    best_w = Fraction(0)
    for size in range(1, inst.n + 1):
        for combo in itertools.combinations(range(inst.n), size):
            if oracle.is_independent(_union(inst.pairs, combo)):
                w = _weight(inst.weights, combo)
                if w > best_w or (w == best_w and combo < best):
                    best, best_w = combo, w
    return Solution(frozenset(best), best_w, 0, stats.calls)


def solve_parity(
    inst: ParityInstance,
    algorithm: str,
    *,
    s: int | None = None,
    eps=None,
    weighted: bool = True,
    allow_general_weights: bool = False,
    max_pairs: int | None = None,
) -> Solution:
    """Dispatch on the algorithm name: greedy | local1 | local2 | ptas | exact."""
    if algorithm not in ALGORITHMS:
        raise ValidationError(f"unknown algorithm {algorithm!r}")
    if algorithm in ("local1", "local2"):
        if s is None or eps is not None:
            raise ValidationError(f"{algorithm} takes a move size s (and no eps)")
    elif algorithm == "ptas":
        if eps is None or s is not None:
            raise ValidationError("ptas takes an eps (and no move size)")
    elif s is not None or eps is not None:
        raise ValidationError(f"{algorithm} takes neither s nor eps")
    if algorithm == "greedy":
        return greedy(inst, max_pairs=max_pairs or MAX_LOCAL_SEARCH_PAIRS)
    if algorithm == "local1":
        return local_search_unweighted(
            inst,
            s,
            allow_general_weights=allow_general_weights,
            max_pairs=max_pairs or MAX_LOCAL_SEARCH_PAIRS,
        )
    if algorithm == "local2":
        return local_search_weighted(
            inst, s, max_pairs=max_pairs or MAX_LOCAL_SEARCH_PAIRS
        )
    if algorithm == "ptas":
        return ptas(
            inst, eps, weighted, max_pairs=max_pairs or MAX_LOCAL_SEARCH_PAIRS
        )
    return brute_force_opt(inst, max_pairs=max_pairs or MAX_BRUTE_FORCE_PAIRS)


def solve_matching(
    inst: MatchingInstance,
    algorithm: str,
    *,
    s: int | None = None,
    eps=None,
    weighted: bool = True,
    allow_general_weights: bool = False,
    max_pairs: int | None = None,
) -> Solution:
    """Solve a matching instance through the parity reduction; the returned
    indices are edge indices and the weight is preserved exactly."""
    reduced, rmap = matching_to_parity(inst)
    sol = solve_parity(
        reduced,
        algorithm,
        s=s,
        eps=eps,
        weighted=weighted,
        allow_general_weights=allow_general_weights,
        max_pairs=max_pairs,
    )
    return Solution(
        rmap.edges_for_pairs(sol.pair_indices),
        sol.weight,
        sol.iterations,
        sol.oracle_calls,
    )


def is_feasible_matching(inst: MatchingInstance, edge_indices) -> bool:
    """True iff the edges are pairwise vertex-disjoint and their covered
    vertex set is independent."""
    validate(inst)
    covered: set[int] = set()
    for i in edge_indices:
        u, v = inst.edges[i]
        if u in covered or v in covered:
            return False
        covered.add(u)
        covered.add(v)
    return inst.matroid.is_independent(covered)


def brute_force_matching_opt(
    inst: MatchingInstance, *, max_edges: int = MAX_BRUTE_FORCE_PAIRS
) -> tuple[Fraction, frozenset[int]]:
    """Exact matching optimum by direct edge-subset enumeration (no
    reduction); verification counterpart to :func:`solve_matching`."""
    validate(inst)
    k = len(inst.edges)
    if k > max_edges:
        raise SizeLimitError(f"brute force limited to {max_edges} edges (got {k})")
    best: tuple[int, ...] = ()
    best_w = Fraction(0)
    for size in range(1, k + 1):
        for combo in itertools.combinations(range(k), size):
            covered: set[int] = set()
            ok = True
            for i in combo:
                u, v = inst.edges[i]
                if u in covered or v in covered:
                    ok = False
                    break
                covered.add(u)
                covered.add(v)
            if ok and inst.matroid.is_independent(covered):
                w = _weight(inst.weights, combo)
                if w > best_w or (w == best_w and combo < best):
                    best, best_w = combo, w
    return best_w, frozenset(best)
