"""Problem instances, exact-rational weights, the matching-to-parity
reduction, seeded generators, and the instance file format.

File format
-----------
One UTF-8 text document. ``#`` starts a comment, blank lines are ignored.
Sections appear in fixed order::

    parity | matching                      header: instance type
    matroid <kind> <key>=<value> ...       one or more lines, see below
    pairs i-j i-j ...                      (parity)  k-th token is pair k
    edges u-v u-v ...                      (matching) k-th token is edge k
    weights w w ...                        one per pair/edge; "3" or "3/2"

Matroid lines form a chain: wrapper kinds apply to the matroid described by
the following lines, and the last line must be a leaf kind.

Leaf kinds::

    uniform m=<int> r=<int>
    partition m=<int> blocks=<set-list> caps=<int-list>
    transversal m=<int> agents=<set-list>
    explicit m=<int> bases=<set-list>          (downward closure is implied)
    clique nu=<int> pairs=<int> edges=<edge-list>

Wrapper kinds::

    truncation k=<int>
    coloops e=<int>
    copies owners=<int-list>

List syntax: ``<int-list>`` is comma-separated integers, ``<set-list>`` is
``|``-separated comma-lists, ``<edge-list>`` is comma-separated ``a-b``
tokens. All three may be empty. The serializer emits a canonical form
(ascending elements, sorted blocks/agents/bases/edges) so equal instances
always produce identical bytes.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Union

from .errors import ParseError, ValidationError
from .matroids import (
    CliqueMatroid,
    ColoopExtension,
    CopiesMatroid,
    ExplicitMatroid,
    Matroid,
    PartitionMatroid,
    TransversalMatroid,
    TruncationMatroid,
    UniformMatroid,
)

__all__ = [
    "ParityInstance",
    "MatchingInstance",
    "ReductionMap",
    "as_weight",
    "validate",
    "matching_to_parity",
    "gen_random",
    "parse",
    "serialize",
]

GENERATOR_KINDS = ("partition", "transversal", "uniform")

_WEIGHT_RE = re.compile(r"^-?\d+(/\d+)?$")

WeightLike = Union[int, str, Fraction]


def as_weight(value: WeightLike) -> Fraction:
    """Coerce an int, ``"p/q"`` string or Fraction to an exact rational."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _WEIGHT_RE.match(value.strip()):
            raise ValidationError(f"malformed weight token {value!r}")
        return Fraction(value.strip())
    raise ValidationError(f"cannot interpret {value!r} as a weight")


@dataclass(frozen=True)
class ParityInstance:
    """A matroid over ``2n`` elements, a perfect pairing of them, and one
    nonnegative rational weight per pair."""

    matroid: Matroid
    pairs: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        pairs = tuple(tuple(sorted(int(e) for e in p)) for p in self.pairs)
        weights = tuple(as_weight(w) for w in self.weights)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return len(self.pairs)

    def validate(self) -> None:
        validate(self)


@dataclass(frozen=True)
class MatchingInstance:
    """A matroid, an arbitrary multigraph on its ground set, and one
    nonnegative rational weight per edge."""

    matroid: Matroid
    edges: tuple[tuple[int, int], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        edges = tuple(tuple(sorted(int(e) for e in p)) for p in self.edges)
        weights = tuple(as_weight(w) for w in self.weights)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", weights)

    def validate(self) -> None:
        validate(self)


def validate(inst: ParityInstance | MatchingInstance) -> None:
    """Raise ValidationError naming the first violated instance invariant."""
    if isinstance(inst, ParityInstance):
        m = inst.matroid.m
        if m != 2 * inst.n:
            raise ValidationError(
                f"ground set size {m} != 2 * pair count {inst.n}"
            )
        seen: set[int] = set()
        for i, p in enumerate(inst.pairs):
            if len(p) != 2 or p[0] == p[1]:
                raise ValidationError(f"pair {i} is not a 2-element set: {p}")
            for e in p:
                if not 0 <= e < m:
                    raise ValidationError(f"pair {i} element {e} out of range")
                if e in seen:
                    raise ValidationError(f"element {e} appears in two pairs")
                seen.add(e)
        if len(inst.weights) != inst.n:
            raise ValidationError(
                f"{len(inst.weights)} weights for {inst.n} pairs"
            )
    elif isinstance(inst, MatchingInstance):
        m = inst.matroid.m
        for i, (u, v) in enumerate(inst.edges):
            if u == v:
                raise ValidationError(f"edge {i} is a self-loop at {u}")
            if not (0 <= u < m and 0 <= v < m):
                raise ValidationError(f"edge {i} endpoint out of range")
        if len(inst.weights) != len(inst.edges):
            raise ValidationError(
                f"{len(inst.weights)} weights for {len(inst.edges)} edges"
            )
    else:
        raise ValidationError(f"not an instance: {inst!r}")
    for i, w in enumerate(inst.weights):
        if w < 0:
            raise ValidationError(f"weight {i} is negative: {w}")


@dataclass(frozen=True)
class ReductionMap:
    """Bookkeeping for the matching-to-parity reduction.

    ``pair_to_edge[k]`` is the original edge index of reduced pair ``k`` and
    ``copy_to_vertex[c]`` the original vertex of copy element ``c``.
    """

    pair_to_edge: tuple[int, ...]
    copy_to_vertex: tuple[int, ...]

    @cached_property
    def edge_to_pair(self) -> dict[int, int]:
        return {e: k for k, e in enumerate(self.pair_to_edge)}

    def edges_for_pairs(self, pair_indices: Iterable[int]) -> frozenset[int]:
        return frozenset(self.pair_to_edge[k] for k in pair_indices)

    def vertices_for_copies(self, copies: Iterable[int]) -> list[int]:
        return [self.copy_to_vertex[c] for c in copies]


def matching_to_parity(
    inst: MatchingInstance,
) -> tuple[ParityInstance, ReductionMap]:
    """Rewrite a matching instance as a parity instance of equal optimum.

    Each vertex receives one copy per incident edge (degree-0 vertices get
    none); edge ``k`` becomes pair ``k`` on the two copies reserved for it,
    with the same weight. The new matroid accepts a copy set iff it holds at
    most one copy per vertex and the projected vertex set is independent in
    the original matroid, so feasible pair sets correspond exactly to
    feasible matchings.

    Copies are numbered by ascending vertex, then ascending incident edge
    index, making the map deterministic.
    """
    validate(inst)
    copy_of: dict[tuple[int, int], int] = {}
    copy_to_vertex: list[int] = []
    for v in range(inst.matroid.m):
        for k, (a, b) in enumerate(inst.edges):
            if v == a or v == b:
                copy_of[(v, k)] = len(copy_to_vertex)
                copy_to_vertex.append(v)
    pairs = tuple(
        (copy_of[(a, k)], copy_of[(b, k)]) for k, (a, b) in enumerate(inst.edges)
    )
    reduced = ParityInstance(
        CopiesMatroid(inst.matroid, tuple(copy_to_vertex)), pairs, inst.weights
    )
    validate(reduced)
    rmap = ReductionMap(tuple(range(len(inst.edges))), tuple(copy_to_vertex))
    return reduced, rmap


def gen_random(
    kind: str,
    n_pairs: int,
    seed: int,
    weight_range: tuple[int, int] = (1, 100),
) -> ParityInstance:
    """Deterministic random parity instance over one of the SBO families
    ``partition``, ``transversal`` or ``uniform``. Same arguments, same
    instance."""
    if kind not in GENERATOR_KINDS:
        raise ValidationError(f"unknown generator kind {kind!r}")
    if n_pairs < 0:
        raise ValidationError("n_pairs must be >= 0")
    lo, hi = int(weight_range[0]), int(weight_range[1])
    if not 0 <= lo <= hi:
        raise ValidationError("weight range must satisfy 0 <= lo <= hi")
    rng = random.Random(seed)
    m = 2 * n_pairs
    matroid = _random_matroid(kind, m, rng)
    ids = list(range(m))
    rng.shuffle(ids)
    pairs = tuple(
        (ids[2 * i], ids[2 * i + 1]) for i in range(n_pairs)
    )
    weights = tuple(Fraction(rng.randint(lo, hi)) for _ in range(n_pairs))
    inst = ParityInstance(matroid, pairs, weights)
    validate(inst)
    return inst


def _random_matroid(kind: str, m: int, rng: random.Random) -> Matroid:
    if kind == "uniform":
        return UniformMatroid(m, rng.randint(0, m))
    if kind == "partition":
        ids = list(range(m))
        rng.shuffle(ids)
        blocks: list[tuple[int, ...]] = []
        caps: list[int] = []
        at = 0
        while at < m:
            size = rng.randint(1, min(3, m - at))
            blocks.append(tuple(ids[at : at + size]))
            caps.append(rng.randint(0, size))
            at += size
        return PartitionMatroid(m, tuple(blocks), tuple(caps))
    # transversal
    if m == 0:
        return TransversalMatroid(0, ())
    agents = []
    for _ in range(rng.randint(1, m)):
        size = rng.randint(1, max(1, m // 2))
        agents.append(tuple(sorted(rng.sample(range(m), size))))
    return TransversalMatroid(m, tuple(agents))


# --- text format -----------------------------------------------------------


def _fmt_int_list(values: Iterable[int]) -> str:
    return ",".join(str(v) for v in values)


def _fmt_set_list(sets: Iterable[Iterable[int]]) -> str:
    return "|".join(_fmt_int_list(s) for s in sets)


def _fmt_edge_list(edges: Iterable[tuple[int, int]]) -> str:
    return ",".join(f"{a}-{b}" for a, b in edges)


def _matroid_lines(matroid: Matroid) -> list[str]:
    if isinstance(matroid, TruncationMatroid):
        return [f"truncation k={matroid.k}"] + _matroid_lines(matroid.inner)
    if isinstance(matroid, ColoopExtension):
        return [f"coloops e={matroid.extra}"] + _matroid_lines(matroid.inner)
    if isinstance(matroid, CopiesMatroid):
        return [f"copies owners={_fmt_int_list(matroid.owners)}"] + _matroid_lines(
            matroid.inner
        )
    if isinstance(matroid, UniformMatroid):
        return [f"uniform m={matroid.m} r={matroid.r}"]
    if isinstance(matroid, PartitionMatroid):
        return [
            f"partition m={matroid.m} blocks={_fmt_set_list(matroid.blocks)}"
            f" caps={_fmt_int_list(matroid.caps)}"
        ]
    if isinstance(matroid, TransversalMatroid):
        return [f"transversal m={matroid.m} agents={_fmt_set_list(matroid.agents)}"]
    if isinstance(matroid, ExplicitMatroid):
        if not matroid.is_downward_closed():
            raise ValidationError(
                "explicit family is not downward closed; cannot serialize"
            )
        return [
            f"explicit m={matroid.m} bases={_fmt_set_list(matroid.maximal_sets())}"
        ]
    if isinstance(matroid, CliqueMatroid):
        return [
            f"clique nu={matroid.nu} pairs={matroid.num_pairs}"
            f" edges={_fmt_edge_list(sorted(matroid.edges))}"
        ]
    raise ValidationError(f"matroid kind {type(matroid).__name__} is not serializable")


def serialize(inst: ParityInstance | MatchingInstance) -> str:
    """Canonical text form; equal instances yield identical bytes."""
    validate(inst)
    lines = ["parity" if isinstance(inst, ParityInstance) else "matching"]
    lines += [f"matroid {body}" for body in _matroid_lines(inst.matroid)]
    if isinstance(inst, ParityInstance):
        toks = " ".join(f"{a}-{b}" for a, b in inst.pairs)
        lines.append(f"pairs {toks}".rstrip())
    else:
        toks = " ".join(f"{a}-{b}" for a, b in inst.edges)
        lines.append(f"edges {toks}".rstrip())
    lines.append(("weights " + " ".join(str(w) for w in inst.weights)).rstrip())
    return "\n".join(lines) + "\n"


def _parse_int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected integer, got {tok!r}") from None


def _parse_int_list(value: str, lineno: int) -> tuple[int, ...]:
    if value == "":
        return ()
    return tuple(_parse_int(t, lineno) for t in value.split(","))


def _parse_set_list(value: str, lineno: int) -> tuple[tuple[int, ...], ...]:
    if value == "":
        return ()
    return tuple(_parse_int_list(part, lineno) for part in value.split("|"))


def _parse_edge_list(value: str, lineno: int) -> tuple[tuple[int, int], ...]:
    if value == "":
        return ()
    out = []
    for tok in value.split(","):
        ends = tok.split("-")
        if len(ends) != 2:
            raise ParseError(f"line {lineno}: malformed edge token {tok!r}")
        out.append((_parse_int(ends[0], lineno), _parse_int(ends[1], lineno)))
    return tuple(out)


def _parse_kv(tokens: list[str], keys: tuple[str, ...], lineno: int) -> dict[str, str]:
    got: dict[str, str] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"line {lineno}: expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        if k not in keys:
            raise ParseError(f"line {lineno}: unknown parameter {k!r}")
        if k in got:
            raise ParseError(f"line {lineno}: duplicate parameter {k!r}")
        got[k] = v
    missing = [k for k in keys if k not in got]
    if missing:
        raise ParseError(f"line {lineno}: missing parameter {missing[0]!r}")
    return got


def _build_matroid(entries: list[tuple[int, str, list[str]]]) -> Matroid:
    lineno, kind, tokens = entries[0]
    wrappers = {"truncation", "coloops", "copies"}
    if kind in wrappers:
        if len(entries) == 1:
            raise ParseError(
                f"line {lineno}: wrapper kind {kind!r} needs an inner matroid line"
            )
        inner = _build_matroid(entries[1:])
        try:
            if kind == "truncation":
                kv = _parse_kv(tokens, ("k",), lineno)
                return TruncationMatroid(inner, _parse_int(kv["k"], lineno))
            if kind == "coloops":
                kv = _parse_kv(tokens, ("e",), lineno)
                return ColoopExtension(inner, _parse_int(kv["e"], lineno))
            kv = _parse_kv(tokens, ("owners",), lineno)
            return CopiesMatroid(inner, _parse_int_list(kv["owners"], lineno))
        except ValidationError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"line {lineno}: {exc}") from None
    if len(entries) > 1:
        raise ParseError(
            f"line {entries[1][0]}: unexpected matroid line after leaf kind {kind!r}"
        )
    try:
        if kind == "uniform":
            kv = _parse_kv(tokens, ("m", "r"), lineno)
            return UniformMatroid(_parse_int(kv["m"], lineno), _parse_int(kv["r"], lineno))
        if kind == "partition":
            kv = _parse_kv(tokens, ("m", "blocks", "caps"), lineno)
            return PartitionMatroid(
                _parse_int(kv["m"], lineno),
                _parse_set_list(kv["blocks"], lineno),
                _parse_int_list(kv["caps"], lineno),
            )
        if kind == "transversal":
            kv = _parse_kv(tokens, ("m", "agents"), lineno)
            return TransversalMatroid(
                _parse_int(kv["m"], lineno), _parse_set_list(kv["agents"], lineno)
            )
        if kind == "explicit":
            kv = _parse_kv(tokens, ("m", "bases"), lineno)
            return ExplicitMatroid.from_bases(
                _parse_int(kv["m"], lineno), _parse_set_list(kv["bases"], lineno)
            )
        if kind == "clique":
            kv = _parse_kv(tokens, ("nu", "pairs", "edges"), lineno)
            return CliqueMatroid(
                _parse_int(kv["nu"], lineno),
                _parse_int(kv["pairs"], lineno),
                frozenset(_parse_edge_list(kv["edges"], lineno)),
            )
    except ValidationError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"line {lineno}: {exc}") from None
    raise ParseError(f"line {lineno}: unknown matroid kind {kind!r}")


def parse(text: str) -> ParityInstance | MatchingInstance:
    """Parse and validate an instance document (see the module docstring)."""
    lines: list[tuple[int, str]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            lines.append((i, body))
    if not lines:
        raise ParseError("line 1: empty instance document")
    at = 0
    lineno, header = lines[at]
    if header not in ("parity", "matching"):
        raise ParseError(f"line {lineno}: header must be 'parity' or 'matching'")
    at += 1
    entries: list[tuple[int, str, list[str]]] = []
    while at < len(lines) and lines[at][1].split()[0] == "matroid":
        lineno, body = lines[at]
        tokens = body.split()
        if len(tokens) < 2:
            raise ParseError(f"line {lineno}: matroid line needs a kind")
        entries.append((lineno, tokens[1], tokens[2:]))
        at += 1
    if not entries:
        lineno = lines[at][0] if at < len(lines) else lineno
        raise ParseError(f"line {lineno}: expected a matroid line")
    matroid = _build_matroid(entries)

    section = "pairs" if header == "parity" else "edges"
    if at >= len(lines) or lines[at][1].split()[0] != section:
        lineno = lines[at][0] if at < len(lines) else lines[-1][0]
        raise ParseError(f"line {lineno}: expected '{section}' section")
    lineno, body = lines[at]
    members = []
    for tok in body.split()[1:]:
        ends = tok.split("-")
        if len(ends) != 2:
            raise ParseError(f"line {lineno}: malformed {section} token {tok!r}")
        members.append((_parse_int(ends[0], lineno), _parse_int(ends[1], lineno)))
    at += 1

    if at >= len(lines) or lines[at][1].split()[0] != "weights":
        lineno = lines[at][0] if at < len(lines) else lines[-1][0]
        raise ParseError(f"line {lineno}: expected 'weights' section")
    lineno, body = lines[at]
    weights = []
    for tok in body.split()[1:]:
        if not _WEIGHT_RE.match(tok):
            raise ParseError(f"line {lineno}: malformed weight token {tok!r}")
        weights.append(Fraction(tok))
    at += 1
    if at < len(lines):
        raise ParseError(f"line {lines[at][0]}: unexpected content after weights")

    try:
        if header == "parity":
            inst: ParityInstance | MatchingInstance = ParityInstance(
                matroid, tuple(members), tuple(weights)
            )
        else:
            inst = MatchingInstance(matroid, tuple(members), tuple(weights))
        validate(inst)
    except ValidationError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"line {lineno}: {exc}") from None
    return inst
