"""Hardness instruments and strong-base-orderability checks.

The clique matroid family encodes a graph on pair indices so that a set of
``nu`` complete pairs is feasible exactly when those indices form a clique;
the special cases with zero or one clique are the classic oracle-hardness
matroids. This module also carries a brute-force strongly-base-orderable
checker with bijection certificates and a query-counting decision game.

A matroid is strongly base orderable when every two bases I, J admit a
bijection pi: I -> J, identity on the intersection, such that swapping any
subset K of I for pi(K) again yields a base. The checker searches bijections
exhaustively; because pi fixes I & J pointwise, only subsets of I \\ J need
examining, and candidate sets are compared against a base table by bitmask.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import SizeLimitError, ValidationError
from .instances import ParityInstance
from .matroids import CliqueMatroid, Matroid, with_counter

__all__ = [
    "ExchangeBijection",
    "SboCounterexample",
    "GameReport",
    "clique_matroid",
    "has_clique",
    "max_feasible_matching_size",
    "find_exchange_bijection",
    "check_sbo",
    "brute_force_parity_decider",
    "hidden_oracle_game",
]


def clique_matroid(
    nu: int, num_pairs: int, graph_edges: Iterable[tuple[int, int]]
) -> tuple[CliqueMatroid, ParityInstance]:
    """Clique matroid plus its companion unit-weight parity instance.

    The ground set has two elements per pair index (pair ``i`` is
    ``{2i, 2i+1}``). With an empty graph no ``nu`` pairs are feasible
    together; with a graph whose only clique of size ``nu`` is F, the union
    of F is the unique feasible set of ``nu`` pairs.
    """
    matroid = CliqueMatroid(nu, num_pairs, frozenset(tuple(e) for e in graph_edges))
    pairs = tuple((2 * i, 2 * i + 1) for i in range(num_pairs))
    inst = ParityInstance(matroid, pairs, tuple(Fraction(1) for _ in pairs))
    return matroid, inst


def has_clique(
    num_vertices: int, edges: Iterable[tuple[int, int]], k: int
) -> tuple[int, ...] | None:
    """First k-clique in lexicographic vertex order, or None. Every vertex
    counts as a 1-clique."""
    if k < 1:
        raise ValidationError("clique size must be >= 1")
    edge_set = {(min(u, v), max(u, v)) for u, v in edges}
    for combo in itertools.combinations(range(num_vertices), k):
        if all((a, b) in edge_set for a, b in itertools.combinations(combo, 2)):
            return combo
    return None


def max_feasible_matching_size(
    inst: ParityInstance, *, max_pairs: int = 20
) -> tuple[int, frozenset[int]]:
    """Largest feasible pair-set size with a witness, by exhaustive scan from
    the top; the witness is the lexicographically first of maximum size."""
    if inst.n > max_pairs:
        raise SizeLimitError(
            f"exhaustive scan limited to {max_pairs} pairs (got {inst.n})"
        )
    for size in range(inst.n, 0, -1):
        for combo in itertools.combinations(range(inst.n), size):
            covered = [e for i in combo for e in inst.pairs[i]]
            if inst.matroid.is_independent(covered):
                return size, frozenset(combo)
    return 0, frozenset()


@dataclass(frozen=True)
class ExchangeBijection:
    """Certificate bijection between two bases, identity on their
    intersection, sorted by source element."""

    mapping: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    @property
    def source(self) -> frozenset[int]:
        return frozenset(a for a, _ in self.mapping)

    @property
    def target(self) -> frozenset[int]:
        return frozenset(b for _, b in self.mapping)

    def image(self, subset: Iterable[int]) -> frozenset[int]:
        table = self.as_dict()
        return frozenset(table[e] for e in subset)


@dataclass(frozen=True)
class SboCounterexample:
    """Base pair admitting no valid exchange bijection."""

    base_i: frozenset[int]
    base_j: frozenset[int]


def _search_assignment(
    common_mask: int,
    src: tuple[int, ...],
    dst: tuple[int, ...],
    is_base_mask: Callable[[int], bool],
) -> tuple[int, ...] | None:
    """Lexicographically first assignment of dst elements onto (sorted) src
    making every swap a base, or None.

    Swapping any subset of src for its images (keeping the common part) must
    land on a base; candidate sets are walked in Gray-code order so each
    differs from the previous by one element exchange.
    """
    d = len(src)
    if d == 0:
        return ()
    src_bits = 0
    for e in src:
        src_bits |= 1 << e
    start = common_mask | src_bits
    for perm in itertools.permutations(dst):
        flips = [(1 << a) ^ (1 << b) for a, b in zip(src, perm)]
        mask = start
        prev = 0
        ok = True
        for i in range(1, 1 << d):
            gray = i ^ (i >> 1)
            mask ^= flips[(gray ^ prev).bit_length() - 1]
            prev = gray
            if not is_base_mask(mask):
                ok = False
                break
        if ok:
            return perm
    return None


def _to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << e
    return mask


def find_exchange_bijection(
    matroid: Matroid, base_i, base_j, *, max_rank: int = 8
) -> ExchangeBijection | None:
    """Exhaustive search for an exchange bijection between two bases.

    Tries bijections in lexicographic order (identity on the intersection)
    and validates each against every swap subset; None means no bijection
    works for this pair.
    """
    I = frozenset(int(e) for e in base_i)
    J = frozenset(int(e) for e in base_j)
    for name, base in (("base_i", I), ("base_j", J)):
        if not matroid.is_independent(base):
            raise ValidationError(f"{name} is not independent")
        for x in range(matroid.m):
            if x not in base and matroid.is_independent(base | {x}):
                raise ValidationError(f"{name} is not maximal (can add {x})")
    if len(I) != len(J):
        raise ValidationError("bases have different sizes")
    if len(I) > max_rank:
        raise SizeLimitError(
            f"bijection search limited to rank {max_rank} (got {len(I)})"
        )
    common = I & J
    src = tuple(sorted(I - J))
    dst = tuple(sorted(J - I))
    memo: dict[int, bool] = {}

    def is_base_mask(mask: int) -> bool:
        hit = memo.get(mask)
        if hit is None:
            hit = matroid.is_independent(_mask_elements(mask))
            memo[mask] = hit
        return hit

    perm = _search_assignment(_to_mask(common), src, dst, is_base_mask)
    if perm is None:
        return None
    mapping = sorted([(e, e) for e in common] + list(zip(src, perm)))
    return ExchangeBijection(tuple(mapping))


def _mask_elements(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def check_sbo(
    matroid: Matroid, *, max_rank: int = 6, max_ground: int = 18
) -> SboCounterexample | None:
    """Verify strong base orderability by exhausting all unordered base
    pairs; None means every pair has an exchange bijection, otherwise the
    first failing pair (in base enumeration order) is returned.

    Since all bases share the matroid's rank, a candidate swap set is a base
    exactly when it is independent, so a one-byte-per-mask table over the
    rank-sized subsets answers every query.
    """
    m = matroid.m
    if m > max_ground:
        raise SizeLimitError(f"SBO check limited to {max_ground} elements (got {m})")
    r = matroid.rank(range(m))
    if r > max_rank:
        raise SizeLimitError(f"SBO check limited to rank {max_rank} (got {r})")
    table = bytearray(1 << m)
    bases: list[tuple[int, ...]] = []
    masks: list[int] = []
    for combo in itertools.combinations(range(m), r):
        if matroid.is_independent(combo):
            mask = _to_mask(combo)
            table[mask] = 1
            bases.append(combo)
            masks.append(mask)
    lookup = table.__getitem__
    for i in range(len(bases)):
        mask_i = masks[i]
        elems_i = bases[i]
        for j in range(i + 1, len(bases)):
            mask_j = masks[j]
            common = mask_i & mask_j
            src = tuple(e for e in elems_i if not (mask_j >> e) & 1)
            dst = tuple(e for e in bases[j] if not (mask_i >> e) & 1)
            if _search_assignment(common, src, dst, lookup) is None:
                return SboCounterexample(frozenset(elems_i), frozenset(bases[j]))
    return None


@dataclass(frozen=True)
class GameReport:
    """Outcome of one hidden-oracle round: the decider's answer, the truth,
    the number of queries spent, and the hidden clique (None for the
    no-clique matroid)."""

    answer: bool
    expected: bool
    oracle_calls: int
    secret: tuple[int, ...] | None

    @property
    def correct(self) -> bool:
        return self.answer == self.expected


def brute_force_parity_decider(
    matroid: Matroid, pairs: tuple[tuple[int, int], ...], nu: int
) -> bool:
    """Decide whether some ``nu`` pairs are jointly feasible by testing each
    pair subset of size ``nu`` in lexicographic order (one query per
    subset), stopping at the first hit."""
    for combo in itertools.combinations(range(len(pairs)), nu):
        covered = [e for i in combo for e in pairs[i]]
        if matroid.is_independent(covered):
            return True
    return False


def hidden_oracle_game(
    nu: int,
    num_pairs: int,
    secret: Iterable[int] | None = None,
    decider: Callable[[Matroid, tuple[tuple[int, int], ...], int], bool] | None = None,
    *,
    max_pairs: int = 20,
) -> GameReport:
    """Run a decision procedure against a counting oracle that hides either
    the no-clique matroid (``secret=None``) or the matroid whose unique
    feasible ``nu``-set is ``secret``.

    The decider only sees the oracle and must answer whether ``nu`` pairs are
    jointly feasible; the report discloses the truth and the query count.
    """
    if num_pairs > max_pairs:
        raise SizeLimitError(f"game limited to {max_pairs} pairs (got {num_pairs})")
    if secret is None:
        edges: tuple[tuple[int, int], ...] = ()
        secret_t: tuple[int, ...] | None = None
    else:
        secret_t = tuple(sorted(int(i) for i in secret))
        if len(set(secret_t)) != nu:
            raise ValidationError(f"secret must consist of {nu} distinct pair indices")
        if any(not 0 <= i < num_pairs for i in secret_t):
            raise ValidationError("secret pair index out of range")
        edges = tuple(itertools.combinations(secret_t, 2))
    matroid, inst = clique_matroid(nu, num_pairs, edges)
    expected = secret_t is not None or nu == 1
    oracle, stats = with_counter(matroid)
    answer = (decider or brute_force_parity_decider)(oracle, inst.pairs, nu)
    return GameReport(bool(answer), expected, stats.calls, secret_t)
