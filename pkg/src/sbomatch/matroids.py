"""Matroid independence oracles.

Ground sets are always ``{0, ..., m-1}``. Every matroid here is a black-box
independence oracle: one method answers whether a subset is independent, and
``rank``, the combinators (truncation, coloop extension, parallel copies) and
the exhaustive axiom checker are built on top of that single method.

The enumeration helpers in this module use integer bitmasks internally, but
the oracle API itself works on plain integer sets and carries no ground-set
size limit.
"""

from __future__ import annotations

import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .errors import SizeLimitError, ValidationError

__all__ = [
    "Matroid",
    "UniformMatroid",
    "PartitionMatroid",
    "TransversalMatroid",
    "ExplicitMatroid",
    "TruncationMatroid",
    "ColoopExtension",
    "CopiesMatroid",
    "CliqueMatroid",
    "CountingMatroid",
    "OracleStats",
    "AxiomViolation",
    "truncate",
    "add_coloops",
    "with_counter",
    "check_matroid_axioms",
]


class Matroid(ABC):
    """Independence oracle over the ground set ``{0..m-1}``."""

    m: int  # every concrete matroid exposes its ground-set size as `m`

    @abstractmethod
    def _independent(self, T: frozenset[int]) -> bool:
        """Decide independence of an already-validated subset."""

    def is_independent(self, elements: Iterable[int]) -> bool:
        """True iff the given element set is independent."""
        return self._independent(self._checked(elements))

    def rank(self, elements: Iterable[int]) -> int:
        """Size of a maximal independent subset, grown greedily by ascending id.

        Correct for matroids by the exchange property; for arbitrary oracles it
        is just the greedy value.
        """
        T = self._checked(elements)
        cur: set[int] = set()
        for e in sorted(T):
            if self._independent(frozenset(cur | {e})):
                cur.add(e)
        return len(cur)

    def _checked(self, elements: Iterable[int]) -> frozenset[int]:
        T = frozenset(elements)
        if T:
            lo, hi = min(T), max(T)
            if lo < 0 or hi >= self.m:
                bad = lo if lo < 0 else hi
                raise ValidationError(
                    f"element {bad} outside ground set 0..{self.m - 1}"
                )
        return T


@dataclass(frozen=True)
class UniformMatroid(Matroid):
    """Independent iff the set has at most ``r`` elements."""

    m: int
    r: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise ValidationError("ground set size must be >= 0")
        if self.r < 0:
            raise ValidationError("uniform rank must be >= 0")

    def _independent(self, T: frozenset[int]) -> bool:
        return len(T) <= self.r


@dataclass(frozen=True)
class PartitionMatroid(Matroid):
    """Per-block capacity constraints; elements outside all blocks are free."""

    m: int
    blocks: tuple[tuple[int, ...], ...]
    caps: tuple[int, ...]

    def __post_init__(self) -> None:
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        caps = tuple(int(c) for c in self.caps)
        if len(blocks) != len(caps):
            raise ValidationError("blocks and caps must have equal length")
        order = sorted(range(len(blocks)), key=lambda i: blocks[i])
        blocks = tuple(blocks[i] for i in order)
        caps = tuple(caps[i] for i in order)
        seen: set[int] = set()
        for b in blocks:
            if not b:
                raise ValidationError("partition blocks must be nonempty")
            for e in b:
                if not 0 <= e < self.m:
                    raise ValidationError(f"block element {e} outside ground set")
                if e in seen:
                    raise ValidationError(f"element {e} appears in two blocks")
                seen.add(e)
        if any(c < 0 for c in caps):
            raise ValidationError("capacities must be >= 0")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "caps", caps)

    @cached_property
    def _block_sets(self) -> tuple[tuple[frozenset[int], int], ...]:
        return tuple((frozenset(b), c) for b, c in zip(self.blocks, self.caps))

    def _independent(self, T: frozenset[int]) -> bool:
        for members, cap in self._block_sets:
            if len(T & members) > cap:
                return False
        return True


@dataclass(frozen=True)
class TransversalMatroid(Matroid):
    """Independent iff the elements can be matched to pairwise distinct agents.

    Agent ``i`` may absorb any single element of ``agents[i]``. Duplicated
    agent sets are meaningful (two identical agents can absorb two elements),
    so the tuple is kept as a sorted multiset.
    """

    m: int
    agents: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        agents = tuple(sorted(tuple(sorted(a)) for a in self.agents))
        for a in agents:
            if not a:
                raise ValidationError("agent sets must be nonempty")
            if any(not 0 <= e < self.m for e in a):
                raise ValidationError("agent element outside ground set")
        object.__setattr__(self, "agents", agents)

    @cached_property
    def _agents_of(self) -> tuple[tuple[int, ...], ...]:
        table: list[list[int]] = [[] for _ in range(self.m)]
        for idx, members in enumerate(self.agents):
            for e in members:
                table[e].append(idx)
        return tuple(tuple(v) for v in table)

    def _independent(self, T: frozenset[int]) -> bool:
        if len(T) > len(self.agents):
            return False
        owner = [-1] * len(self.agents)

        def assign(e: int, taken: set[int]) -> bool:
            for a in self._agents_of[e]:
                if a in taken:
                    continue
                taken.add(a)
                if owner[a] < 0 or assign(owner[a], taken):
                    owner[a] = e
                    return True
            return False

        for e in sorted(T):
            if not assign(e, set()):
                return False
        return True


@dataclass(frozen=True)
class ExplicitMatroid(Matroid):
    """Independence by table lookup.

    Use :meth:`from_bases` / :meth:`from_sets` to build a downward-closed
    family. Constructing directly stores the family verbatim, which permits
    deliberately broken families for exercising the axiom checker.
    """

    m: int
    family: frozenset[frozenset[int]]

    def __post_init__(self) -> None:
        family = frozenset(frozenset(s) for s in self.family)
        for s in family:
            if any(not 0 <= e < self.m for e in s):
                raise ValidationError("family element outside ground set")
        object.__setattr__(self, "family", family)

    @classmethod
    def from_bases(cls, m: int, bases: Iterable[Iterable[int]]) -> "ExplicitMatroid":
        """All subsets of the given maximal sets (duplicates collapse)."""
        return cls.from_sets(m, bases)

    @classmethod
    def from_sets(cls, m: int, sets: Iterable[Iterable[int]]) -> "ExplicitMatroid":
        """Downward closure of the given sets; the empty set is always included."""
        family: set[frozenset[int]] = {frozenset()}
        stack = [frozenset(s) for s in sets]
        while stack:
            s = stack.pop()
            if s in family:
                continue
            family.add(s)
            for e in s:
                stack.append(s - {e})
        return cls(m, frozenset(family))

    def maximal_sets(self) -> tuple[tuple[int, ...], ...]:
        members = sorted(tuple(sorted(s)) for s in self.family)
        out = []
        for s in members:
            fs = frozenset(s)
            if not any(fs < other for other in self.family):
                out.append(s)
        return tuple(out)

    def is_downward_closed(self) -> bool:
        return all(s - {e} in self.family for s in self.family for e in s)

    def _independent(self, T: frozenset[int]) -> bool:
        return T in self.family


@dataclass(frozen=True)
class TruncationMatroid(Matroid):
    """Inner independence restricted to sets of size at most ``k``."""

    inner: Matroid
    k: int

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValidationError("truncation rank must be >= 0")

    @property
    def m(self) -> int:
        return self.inner.m

    def _independent(self, T: frozenset[int]) -> bool:
        return len(T) <= self.k and self.inner._independent(T)


@dataclass(frozen=True)
class ColoopExtension(Matroid):
    """``extra`` fresh elements appended after the inner ground set, each
    addable to every independent set."""

    inner: Matroid
    extra: int

    def __post_init__(self) -> None:
        if self.extra < 0:
            raise ValidationError("coloop count must be >= 0")

    @property
    def m(self) -> int:
        return self.inner.m + self.extra

    def _independent(self, T: frozenset[int]) -> bool:
        cut = self.inner.m
        return self.inner._independent(frozenset(e for e in T if e < cut))


@dataclass(frozen=True)
class CopiesMatroid(Matroid):
    """Parallel-copy extension: copy ``i`` stands for ``owners[i]`` in the
    inner matroid; a set is independent iff it holds at most one copy of each
    owner and the projected owner set is inner-independent."""

    inner: Matroid
    owners: tuple[int, ...]

    def __post_init__(self) -> None:
        owners = tuple(int(o) for o in self.owners)
        if any(not 0 <= o < self.inner.m for o in owners):
            raise ValidationError("copy owner outside inner ground set")
        object.__setattr__(self, "owners", owners)

    @property
    def m(self) -> int:
        return len(self.owners)

    def _independent(self, T: frozenset[int]) -> bool:
        projected: set[int] = set()
        for e in T:
            o = self.owners[e]
            if o in projected:
                return False
            projected.add(o)
        return self.inner._independent(frozenset(projected))


@dataclass(frozen=True)
class CliqueMatroid(Matroid):
    """Paired ground set with near-uniform independence.

    Element ``2i``/``2i+1`` form pair ``i``. Sets of size below ``2*nu`` are
    independent, sets above are dependent, and a set of size exactly ``2*nu``
    is independent unless it is the union of ``nu`` complete pairs whose
    indices do NOT form a clique in ``edges`` (a graph on pair indices).
    """

    nu: int
    num_pairs: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.nu < 1:
            raise ValidationError("nu must be >= 1")
        if self.num_pairs < self.nu:
            raise ValidationError("need at least nu pairs")
        edges = set()
        for u, v in self.edges:
            if u == v:
                raise ValidationError("self-loop in pair graph")
            if not (0 <= u < self.num_pairs and 0 <= v < self.num_pairs):
                raise ValidationError("pair-graph edge endpoint out of range")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))

    @property
    def m(self) -> int:
        return 2 * self.num_pairs

    def _independent(self, T: frozenset[int]) -> bool:
        cap = 2 * self.nu
        if len(T) < cap:
            return True
        if len(T) > cap:
            return False
        idxs = set()
        for x in T:
            if (x ^ 1) not in T:  # mate missing: not a union of pairs
                return True
            idxs.add(x >> 1)
        return all(
            (a, b) in self.edges for a, b in itertools.combinations(sorted(idxs), 2)
        )


class OracleStats:
    """Thread-safe independence-query counter; monotone between resets."""

    __slots__ = ("_lock", "_calls")

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._calls = 0

    @property
    def calls(self) -> int:
        return self._calls

    def reset(self) -> None:
        with self._lock:
            self._calls = 0

    def _bump(self) -> None:
        with self._lock:
            self._calls += 1

    def __repr__(self) -> str:
        return f"OracleStats(calls={self._calls})"


class CountingMatroid(Matroid):
    """Transparent wrapper that counts every independence query."""

    def __init__(self, inner: Matroid) -> None:
        self.inner = inner
        self.stats = OracleStats()

    @property
    def m(self) -> int:
        return self.inner.m

    def _independent(self, T: frozenset[int]) -> bool:
        self.stats._bump()
        return self.inner._independent(T)

    def __repr__(self) -> str:
        return f"CountingMatroid({self.inner!r}, calls={self.stats.calls})"


def truncate(matroid: Matroid, k: int) -> TruncationMatroid:
    """Restrict independent sets to size at most ``k``."""
    return TruncationMatroid(matroid, k)


def add_coloops(matroid: Matroid, extra: int) -> ColoopExtension:
    """Append ``extra`` always-addable elements after the existing ids."""
    return ColoopExtension(matroid, extra)


def with_counter(matroid: Matroid) -> tuple[CountingMatroid, OracleStats]:
    """Wrap an oracle so every query bumps the returned stats handle."""
    wrapped = CountingMatroid(matroid)
    return wrapped, wrapped.stats


@dataclass(frozen=True)
class AxiomViolation:
    """Witness of a failed matroid axiom: 'empty', 'hereditary' or 'exchange'."""

    axiom: str
    witness: tuple[frozenset[int], ...]


def _mask_set(mask: int) -> frozenset[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def check_matroid_axioms(
    matroid: Matroid, *, max_ground: int = 14
) -> AxiomViolation | None:
    """Exhaustively verify the matroid axioms; None means all hold.

    Checks, in order: the empty set is independent; independence is
    hereditary; and the exchange axiom. Once heredity holds, exchange between
    sets whose sizes differ by exactly one implies the general case, so only
    those pairs are scanned. Enumeration is by ascending bitmask, which fixes
    which witness is reported first.
    """
    m = matroid.m
    if m > max_ground:
        raise SizeLimitError(
            f"axiom check limited to {max_ground} elements (got {m})"
        )
    n_masks = 1 << m
    indep = bytearray(n_masks)
    for mask in range(n_masks):
        indep[mask] = 1 if matroid.is_independent(_mask_set(mask)) else 0
    if not indep[0]:
        return AxiomViolation("empty", (frozenset(),))
    for mask in range(1, n_masks):
        if indep[mask]:
            t = mask
            while t:
                bit = t & -t
                if not indep[mask ^ bit]:
                    return AxiomViolation(
                        "hereditary", (_mask_set(mask), _mask_set(mask ^ bit))
                    )
                t ^= bit
    by_size: list[list[int]] = [[] for _ in range(m + 1)]
    for mask in range(n_masks):
        if indep[mask]:
            by_size[bin(mask).count("1")].append(mask)
    aug: dict[int, int] = {}
    for size in range(m):
        if not by_size[size] or not by_size[size + 1]:
            continue
        for a in by_size[size]:
            grow = 0
            for x in range(m):
                bit = 1 << x
                if not a & bit and indep[a | bit]:
                    grow |= bit
            aug[a] = grow
        for a in by_size[size]:
            grow = aug[a]
            for b in by_size[size + 1]:
                if not b & ~a & grow:
                    return AxiomViolation("exchange", (_mask_set(a), _mask_set(b)))
    return None
