"""Exact data model for 2-dimensional packing/covering instances.

All arithmetic is exact: integers are arbitrary-precision ``int``,
coordinates are ``fractions.Fraction``. Floats never enter a solver or
verifier path; decimal rendering is display-only.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

FORMAT_VERSION = 1
DIMENSION = 2

FLAVORS = ("pack", "skew", "cover")
KINDS = ("X", "Y", "Z", "Tuple", "Filler", "Dummy")
_KIND_RANK = {kind: rank for rank, kind in enumerate(KINDS)}

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")
_INT_RE = re.compile(r"^-?\d+$")

# params that are plain integers in instance documents; "delta" is rational
_INT_PARAMS = frozenset({"q", "t_count", "r", "b", "beta", "m", "n"})


class ParseError(ValueError):
    """A document could not be parsed."""


class InvariantError(ValueError):
    """A structurally valid object violates a model invariant."""


def parse_rational(text: str) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ParseError(f"malformed rational: {text!r}")
    if text.endswith("/0") and "/" in text and text.split("/")[1] == "0":
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(text)


def render_rational(value: Fraction) -> str:
    # Fraction is always in lowest terms with positive denominator.
    return f"{value.numerator}/{value.denominator}"


def parse_int(text: str) -> int:
    if not isinstance(text, str) or not _INT_RE.match(text):
        raise ParseError(f"malformed integer: {text!r}")
    return int(text)


@dataclass(frozen=True)
class Vec2:
    """A 2-dimensional item. c1 in (0,1], c2 in [0,1].

    c2 = 0 is admitted (the skewed dummy item) but flagged by
    :meth:`VectorInstance.warnings` rather than rejected.
    """

    c1: Fraction
    c2: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", Fraction(self.c1))
        object.__setattr__(self, "c2", Fraction(self.c2))
        if not (0 < self.c1 <= 1):
            raise InvariantError(f"c1 must lie in (0,1], got {self.c1}")
        if not (0 <= self.c2 <= 1):
            raise InvariantError(f"c2 must lie in [0,1], got {self.c2}")


def vec_sum(vectors: Iterable[Vec2]) -> tuple[Fraction, Fraction]:
    s1 = Fraction(0)
    s2 = Fraction(0)
    for v in vectors:
        s1 += v.c1
        s2 += v.c2
    return s1, s2


def fits(vectors: Iterable[Vec2]) -> bool:
    """True iff both coordinate sums are <= 1 (exact arithmetic)."""
    s1, s2 = vec_sum(vectors)
    return s1 <= 1 and s2 <= 1


def covers(vectors: Iterable[Vec2]) -> bool:
    """True iff both coordinate sums are >= 1 (exact arithmetic)."""
    s1, s2 = vec_sum(vectors)
    return s1 >= 1 and s2 >= 1


@dataclass(frozen=True)
class ItemLabel:
    """Provenance label: which gadget element an item encodes.

    kind     one of X, Y, Z, Tuple, Filler, Dummy
    index    element index i, tuple triple (i,j,k), or filler level l
             (Dummy items use index 0)
    copy     positive counter for duplicated filler/dummy items
    """

    kind: str
    index: int | tuple[int, int, int]
    copy: int = 1

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise InvariantError(f"unknown label kind: {self.kind!r}")
        if self.kind == "Tuple":
            if not (isinstance(self.index, tuple) and len(self.index) == 3
                    and all(isinstance(v, int) for v in self.index)):
                raise InvariantError(f"Tuple label needs an (i,j,k) index, got {self.index!r}")
        elif not isinstance(self.index, int):
            raise InvariantError(f"{self.kind} label needs an integer index, got {self.index!r}")
        if not (isinstance(self.copy, int) and self.copy >= 1):
            raise InvariantError(f"copy must be a positive integer, got {self.copy!r}")

    def sort_key(self) -> tuple:
        idx = self.index if isinstance(self.index, tuple) else (self.index,)
        return (_KIND_RANK[self.kind], idx, self.copy)

    def __str__(self) -> str:
        if isinstance(self.index, tuple):
            body = f"{self.kind}{self.index}"
        else:
            body = f"{self.kind}{self.index}"
        return body if self.copy == 1 else f"{body}#{self.copy}"


@dataclass(frozen=True)
class Item:
    label: ItemLabel
    vec: Vec2


@dataclass(frozen=True)
class VectorInstance:
    """A labeled multiset of exact-rational 2-dimensional items.

    Items are kept sorted by label so serialization is canonical. The
    generating parameters are embedded so verifiers never re-derive them.
    """

    flavor: str
    items: tuple[Item, ...]
    params: dict[str, int | Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise InvariantError(f"unknown flavor: {self.flavor!r}")
        items = tuple(sorted(self.items, key=lambda it: it.label.sort_key()))
        object.__setattr__(self, "items", items)
        seen = set()
        for item in items:
            key = (item.label.kind, item.label.index, item.label.copy)
            if key in seen:
                raise InvariantError(f"duplicate item label: {item.label}")
            seen.add(key)
            if item.label.kind != "Dummy" and not (item.vec.c1 > 0 and item.vec.c2 > 0):
                raise InvariantError(
                    f"non-dummy item {item.label} must have strictly positive coordinates")
        if self.flavor == "skew":
            delta = self.params.get("delta")
            if delta is None:
                raise InvariantError("skew instance requires a 'delta' parameter")
            for item in items:
                if (item.vec.c1 > delta) and (item.vec.c2 > delta):
                    raise InvariantError(
                        f"item {item.label} is not {delta}-skewed: both coordinates exceed delta")

    @property
    def item_count(self) -> int:
        return len(self.items)

    def vectors(self) -> list[Vec2]:
        return [item.vec for item in self.items]

    def labels(self) -> list[ItemLabel]:
        return [item.label for item in self.items]

    def warnings(self) -> list[str]:
        """Non-fatal validation flags (e.g. items with a zero coordinate)."""
        notes = []
        for item in self.items:
            if item.vec.c2 == 0:
                notes.append(f"item {item.label} has a zero coordinate (outside (0,1]^2)")
        return notes


def _normalize_groups(groups: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(g)) for g in groups))


@dataclass(frozen=True)
class PackingSolution:
    """Disjoint bins of item indices; feasibility is checked separately."""

    bins: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        bins = _normalize_groups(self.bins)
        object.__setattr__(self, "bins", bins)
        _check_disjoint(bins, "bins")

    def all_indices(self) -> set[int]:
        return {i for b in self.bins for i in b}


@dataclass(frozen=True)
class CoveringSolution:
    """Disjoint unit covers plus leftover (uncovered) item indices."""

    covers: tuple[tuple[int, ...], ...]
    leftovers: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        covers = _normalize_groups(self.covers)
        leftovers = tuple(sorted(self.leftovers))
        object.__setattr__(self, "covers", covers)
        object.__setattr__(self, "leftovers", leftovers)
        _check_disjoint(list(covers) + [leftovers], "covers/leftovers")


def _check_disjoint(groups: Iterable[Iterable[int]], what: str) -> None:
    seen: set[int] = set()
    for group in groups:
        for i in group:
            if not (isinstance(i, int) and i >= 0):
                raise InvariantError(f"bad item index in {what}: {i!r}")
            if i in seen:
                raise InvariantError(f"item index {i} appears twice in {what}")
            seen.add(i)


def check_packing(instance: VectorInstance, solution: PackingSolution) -> None:
    """Raise InvariantError unless the solution is a feasible packing."""
    if solution.all_indices() != set(range(instance.item_count)):
        raise InvariantError("bins do not cover the item set exactly")
    vecs = instance.vectors()
    for b in solution.bins:
        if not fits(vecs[i] for i in b):
            raise InvariantError(f"bin {b} does not fit")


def check_covering(instance: VectorInstance, solution: CoveringSolution) -> None:
    """Raise InvariantError unless the solution is a feasible covering."""
    indices = solution.leftovers + tuple(i for c in solution.covers for i in c)
    if set(indices) != set(range(instance.item_count)):
        raise InvariantError("covers and leftovers do not partition the item set")
    vecs = instance.vectors()
    for c in solution.covers:
        if not covers(vecs[i] for i in c):
            raise InvariantError(f"cover {c} does not cover")


# ---------------------------------------------------------------------------
# Canonical JSON serialization.
#
# Integers are decimal strings, rationals are "numerator/denominator" in
# lowest terms; keys are sorted, so output is byte-stable.

def _canonical_dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _label_to_json(label: ItemLabel) -> dict:
    index = list(label.index) if isinstance(label.index, tuple) else label.index
    return {"kind": label.kind, "index": index, "copy": label.copy}


def _label_from_json(obj: object) -> ItemLabel:
    if not isinstance(obj, dict):
        raise ParseError(f"label must be an object, got {obj!r}")
    try:
        kind = obj["kind"]
        index = obj["index"]
        copy = obj["copy"]
    except KeyError as exc:
        raise ParseError(f"label is missing field {exc}") from None
    if isinstance(index, list):
        index = tuple(index)
    return ItemLabel(kind=kind, index=index, copy=copy)


def _render_param(value: int | Fraction) -> str:
    if isinstance(value, Fraction):
        return render_rational(value)
    return str(value)


def _parse_param(key: str, text: str) -> int | Fraction:
    if key in _INT_PARAMS:
        return parse_int(text)
    if key == "delta" or (isinstance(text, str) and "/" in text):
        return parse_rational(text)
    return parse_int(text)


def serialize_instance(instance: VectorInstance) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "flavor": instance.flavor,
        "params": {k: _render_param(v) for k, v in instance.params.items()},
        "items": [
            {
                "label": _label_to_json(item.label),
                "c1": render_rational(item.vec.c1),
                "c2": render_rational(item.vec.c2),
            }
            for item in instance.items
        ],
    }
    return _canonical_dumps(doc)


def deserialize_instance(text: str) -> VectorInstance:
    doc = _load_document(text, expected_fields=("flavor", "params", "items"))
    if not isinstance(doc["items"], list):
        raise ParseError("'items' must be an array")
    if not isinstance(doc["params"], dict):
        raise ParseError("'params' must be an object")
    items = []
    for pos, entry in enumerate(doc["items"]):
        if not isinstance(entry, dict):
            raise ParseError(f"items[{pos}] must be an object")
        try:
            label = _label_from_json(entry["label"])
            c1 = parse_rational(entry["c1"])
            c2 = parse_rational(entry["c2"])
        except KeyError as exc:
            raise ParseError(f"items[{pos}] is missing field {exc}") from None
        items.append(Item(label=label, vec=Vec2(c1, c2)))
    params = {k: _parse_param(k, v) for k, v in doc["params"].items()}
    return VectorInstance(flavor=doc["flavor"], items=tuple(items), params=params)


def serialize_solution(solution: PackingSolution | CoveringSolution) -> str:
    if isinstance(solution, PackingSolution):
        doc = {
            "format_version": FORMAT_VERSION,
            "kind": "packing",
            "bins": [list(b) for b in solution.bins],
        }
    else:
        doc = {
            "format_version": FORMAT_VERSION,
            "kind": "covering",
            "covers": [list(c) for c in solution.covers],
            "leftovers": list(solution.leftovers),
        }
    return _canonical_dumps(doc)


def deserialize_solution(text: str) -> PackingSolution | CoveringSolution:
    doc = _load_document(text, expected_fields=("kind",))
    kind = doc["kind"]
    if kind == "packing":
        if "bins" not in doc:
            raise ParseError("packing solution is missing 'bins'")
        return PackingSolution(bins=tuple(tuple(b) for b in doc["bins"]))
    if kind == "covering":
        if "covers" not in doc:
            raise ParseError("covering solution is missing 'covers'")
        return CoveringSolution(
            covers=tuple(tuple(c) for c in doc["covers"]),
            leftovers=tuple(doc.get("leftovers", ())),
        )
    raise ParseError(f"unknown solution kind: {kind!r}")


def _load_document(text: str, expected_fields: tuple[str, ...]) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version: {doc.get('format_version')!r}")
    for name in expected_fields:
        if name not in doc:
            raise ParseError(f"document is missing field {name!r}")
    return doc
