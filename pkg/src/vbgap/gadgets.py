"""Integer encodings and the three vector-instance families.

Three reductions share one shape: encode a 3DM instance as integers whose
4-subset (or m-subset) sums hit a target b exactly when they spell out a
tuple, then embed the integers as 2-dimensional rational vectors.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .matching import HardnessConstants, Max3dmInstance
from .model import (
    FORMAT_VERSION,
    InvariantError,
    Item,
    ItemLabel,
    ParseError,
    Vec2,
    VectorInstance,
    _canonical_dumps,
)


class GadgetError(ValueError):
    """Construction parameters are infeasible (e.g. negative dummy count)."""


def _check_encoding(values: list[int], b: int, allow_duplicates: bool = False) -> None:
    for a in values:
        if not (0 < a < b):
            raise InvariantError(f"encoded integer {a} outside (0, {b})")
    if not allow_duplicates and len(set(values)) != len(values):
        raise InvariantError("encoded integers are not pairwise distinct")


@dataclass(frozen=True)
class GadgetIntegers:
    """The integer encoding with r = 64q and b = r^4 + 15."""

    q: int
    r: int
    b: int
    x: dict[int, int]
    y: dict[int, int]
    z: dict[int, int]
    t: dict[tuple[int, int, int], int]

    def entries(self) -> list[tuple[ItemLabel, int]]:
        out = [(ItemLabel("X", i), self.x[i]) for i in sorted(self.x)]
        out += [(ItemLabel("Y", j), self.y[j]) for j in sorted(self.y)]
        out += [(ItemLabel("Z", k), self.z[k]) for k in sorted(self.z)]
        out += [(ItemLabel("Tuple", t), self.t[t]) for t in sorted(self.t)]
        return out

    @property
    def tuples(self) -> list[tuple[int, int, int]]:
        return sorted(self.t)


def build_integers(instance: Max3dmInstance) -> GadgetIntegers:
    if instance.q < 1:
        raise GadgetError("need q >= 1")
    q = instance.q
    r = 64 * q
    b = r**4 + 15
    x = {i: i * r + 1 for i in range(1, q + 1)}
    y = {j: j * r**2 + 2 for j in range(1, q + 1)}
    z = {k: k * r**3 + 4 for k in range(1, q + 1)}
    t = {
        (i, j, k): r**4 - k * r**3 - j * r**2 - i * r + 8
        for (i, j, k) in instance.tuples
    }
    g = GadgetIntegers(q=q, r=r, b=b, x=x, y=y, z=z, t=t)
    _check_encoding([a for _, a in g.entries()], b)
    return g


@dataclass(frozen=True)
class SkewedGadgetIntegers:
    """The m-Partition encoding for skewed instances.

    The additive constant of the tuple integers is 2^m + 8, not 2^m: with
    constant pool {1, 2, 4} + {2^l : l = 4..m-1} + {2^m} the m constants
    sum to 2^(m+1) - 9, short of b's constant 2^(m+1) - 1 by 8. The +8
    restores the m-subset sum identity; uniqueness of the constant
    decomposition is re-checked by enumeration in the verify module.
    """

    q: int
    delta: Fraction
    m: int
    n: int
    r: int
    b: int
    tconst: int
    x: dict[int, int]
    y: dict[int, int]
    z: dict[int, int]
    t: dict[tuple[int, int, int], int]
    fillers: dict[int, int]
    filler_multiplicity: int

    def entries(self) -> list[tuple[ItemLabel, int]]:
        out = [(ItemLabel("X", i), self.x[i]) for i in sorted(self.x)]
        out += [(ItemLabel("Y", j), self.y[j]) for j in sorted(self.y)]
        out += [(ItemLabel("Z", k), self.z[k]) for k in sorted(self.z)]
        out += [(ItemLabel("Tuple", t), self.t[t]) for t in sorted(self.t)]
        for level in sorted(self.fillers):
            for copy in range(1, self.filler_multiplicity + 1):
                out.append((ItemLabel("Filler", level, copy), self.fillers[level]))
        return out

    @property
    def tuples(self) -> list[tuple[int, int, int]]:
        return sorted(self.t)

    def constant_pool(self) -> list[int]:
        """The additive constants available modulo r."""
        return [1, 2, 4] + [2**level for level in sorted(self.fillers)] + [self.tconst]


def skew_m(delta: Fraction) -> int:
    if not (0 < delta <= Fraction(2, 5)):
        raise GadgetError(f"delta must lie in (0, 2/5], got {delta}")
    return math.ceil(Fraction(2) / delta) - 1


def build_skewed_integers(instance: Max3dmInstance, delta: Fraction) -> SkewedGadgetIntegers:
    if instance.q < 1:
        raise GadgetError("need q >= 1")
    q = instance.q
    m = skew_m(delta)
    assert m >= 4
    # n slightly above m*2^m so the largest possible sum of m constants
    # (with tconst = 2^m + 8) stays below r; keeps the modulo-r argument
    # wraparound-free.
    n = m * 2**m + 9 * m + 1
    r = n * q
    b = r**m + 2 ** (m + 1) - 1
    tconst = 2**m + 8
    x = {i: i * r + 1 for i in range(1, q + 1)}
    y = {j: j * r**2 + 2 for j in range(1, q + 1)}
    z = {k: k * r**3 + 4 for k in range(1, q + 1)}
    filler_sum = sum(r**level for level in range(4, m))
    t = {
        (i, j, k): r**m - filler_sum - k * r**3 - j * r**2 - i * r + tconst
        for (i, j, k) in instance.tuples
    }
    fillers = {level: r**level + 2**level for level in range(4, m)}
    g = SkewedGadgetIntegers(
        q=q, delta=delta, m=m, n=n, r=r, b=b, tconst=tconst,
        x=x, y=y, z=z, t=t, fillers=fillers,
        filler_multiplicity=len(instance.tuples),
    )
    distinct = [a for label, a in g.entries() if label.copy == 1]
    _check_encoding(distinct, b)
    if sum(g.constant_pool()) != 2 ** (m + 1) - 1:
        raise InvariantError("constant pool does not sum to 2^(m+1) - 1")
    if m * max(g.constant_pool()) >= r:
        raise InvariantError("constant sums may wrap around modulo r")
    return g


def default_beta(instance: Max3dmInstance,
                 constants: HardnessConstants | None = None) -> int:
    """ceil(beta0 * q), computed in exact rational arithmetic."""
    constants = constants or HardnessConstants()
    return math.ceil(constants.beta0 * instance.q)


def _pack_vec(a: int, b: int) -> Vec2:
    return Vec2(
        Fraction(1, 5) + Fraction(a, 5 * b),
        Fraction(3, 10) - Fraction(a, 5 * b),
    )


def _skew_vec(a: int, b: int, m: int) -> Vec2:
    return Vec2(
        Fraction(1, m + 1) + Fraction(a, (m + 1) * b),
        Fraction(m + 2, m * (m + 1)) - Fraction(a, (m + 1) * b),
    )


def _dummy_items(count: int, vec: Vec2) -> list[Item]:
    return [Item(ItemLabel("Dummy", 0, copy), vec) for copy in range(1, count + 1)]


def packing_instance_from_gadget(g: GadgetIntegers, beta: int) -> VectorInstance:
    t_count = len(g.t)
    dummy_count = t_count + 3 * g.q - 4 * beta
    if dummy_count < 0:
        raise GadgetError(
            f"beta={beta} yields negative dummy count {dummy_count} "
            f"(|T|={t_count}, q={g.q})")
    items = [Item(label, _pack_vec(a, g.b)) for label, a in g.entries()]
    items += _dummy_items(dummy_count, Vec2(Fraction(3, 5), Fraction(3, 5)))
    params = {"q": g.q, "t_count": t_count, "r": g.r, "b": g.b, "beta": beta}
    return VectorInstance(flavor="pack", items=tuple(items), params=params)


def covering_instance_from_gadget(g: GadgetIntegers, beta: int) -> VectorInstance:
    t_count = len(g.t)
    dummy_count = t_count + 3 * g.q - 4 * beta
    if dummy_count < 0:
        raise GadgetError(
            f"beta={beta} yields negative dummy count {dummy_count} "
            f"(|T|={t_count}, q={g.q})")
    items = [Item(label, _pack_vec(a, g.b)) for label, a in g.entries()]
    items += _dummy_items(dummy_count, Vec2(Fraction(9, 10), Fraction(9, 10)))
    params = {"q": g.q, "t_count": t_count, "r": g.r, "b": g.b, "beta": beta}
    return VectorInstance(flavor="cover", items=tuple(items), params=params)


def skewed_instance_from_gadget(g: SkewedGadgetIntegers, beta: int) -> VectorInstance:
    t_count = len(g.t)
    m = g.m
    dummy_count = (m - 3) * t_count + 3 * g.q - m * beta
    if dummy_count < 0:
        raise GadgetError(
            f"beta={beta} yields negative dummy count {dummy_count} "
            f"(|T|={t_count}, q={g.q}, m={m})")
    items = [Item(label, _skew_vec(a, g.b, m)) for label, a in g.entries()]
    dummy = Vec2(Fraction(m - 1, m + 1), Fraction(0))
    items += _dummy_items(dummy_count, dummy)
    params = {
        "q": g.q, "t_count": t_count, "r": g.r, "b": g.b, "beta": beta,
        "delta": g.delta, "m": m, "n": g.n,
    }
    return VectorInstance(flavor="skew", items=tuple(items), params=params)


def build_packing_instance(instance: Max3dmInstance, beta: int) -> VectorInstance:
    return packing_instance_from_gadget(build_integers(instance), beta)


def build_covering_instance(instance: Max3dmInstance, beta: int) -> VectorInstance:
    return covering_instance_from_gadget(build_integers(instance), beta)


def build_skewed_instance(
    instance: Max3dmInstance, beta: int, delta: Fraction
) -> VectorInstance:
    return skewed_instance_from_gadget(build_skewed_integers(instance, delta), beta)


def mutate_integer(
    g: GadgetIntegers, label: ItemLabel, offset: int
) -> GadgetIntegers:
    """Copy of the gadget with one encoded integer shifted by ``offset``."""
    kind = label.kind
    if kind == "X":
        return replace(g, x={**g.x, label.index: g.x[label.index] + offset})
    if kind == "Y":
        return replace(g, y={**g.y, label.index: g.y[label.index] + offset})
    if kind == "Z":
        return replace(g, z={**g.z, label.index: g.z[label.index] + offset})
    if kind == "Tuple":
        return replace(g, t={**g.t, label.index: g.t[label.index] + offset})
    raise InvariantError(f"cannot mutate label kind {kind!r}")


# --- reconstruction from serialized instances -------------------------------

def instance_3dm_from_vector(vinst: VectorInstance) -> Max3dmInstance:
    tuples = sorted(
        item.label.index for item in vinst.items if item.label.kind == "Tuple"
    )
    return Max3dmInstance(q=vinst.params["q"], tuples=tuple(tuples))


def gadget_from_instance(
    vinst: VectorInstance,
) -> GadgetIntegers | SkewedGadgetIntegers:
    """Rebuild the integer gadget from an instance document and cross-check
    that the document's items match the rebuilt encoding."""
    instance3dm = instance_3dm_from_vector(vinst)
    if vinst.flavor == "skew":
        g = build_skewed_integers(instance3dm, vinst.params["delta"])
        expected = {
            (label.kind, label.index, label.copy): _skew_vec(a, g.b, g.m)
            for label, a in g.entries()
        }
    else:
        g = build_integers(instance3dm)
        expected = {
            (label.kind, label.index, label.copy): _pack_vec(a, g.b)
            for label, a in g.entries()
        }
    for item in vinst.items:
        if item.label.kind == "Dummy":
            continue
        key = (item.label.kind, item.label.index, item.label.copy)
        if key not in expected or expected[key] != item.vec:
            raise InvariantError(
                f"item {item.label} is inconsistent with the instance parameters")
    return g


# --- 4-Partition ------------------------------------------------------------

@dataclass(frozen=True)
class FourPartitionInstance:
    integers: tuple[int, ...]
    target: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "integers", tuple(sorted(self.integers)))
        for a in self.integers:
            if not (0 < a < self.target):
                raise InvariantError(f"integer {a} outside (0, {self.target})")


def emit_four_partition(
    g: GadgetIntegers | SkewedGadgetIntegers,
) -> FourPartitionInstance:
    return FourPartitionInstance(
        integers=tuple(a for _, a in g.entries()), target=g.b
    )


def serialize_four_partition(instance: FourPartitionInstance) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "target": str(instance.target),
        "integers": [str(a) for a in instance.integers],
    }
    return _canonical_dumps(doc)


def deserialize_four_partition(text: str) -> FourPartitionInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ParseError("not a format_version-1 4-Partition document")
    for name in ("target", "integers"):
        if name not in doc:
            raise ParseError(f"4-Partition document is missing field {name!r}")
    return FourPartitionInstance(
        integers=tuple(int(a) for a in doc["integers"]),
        target=int(doc["target"]),
    )
