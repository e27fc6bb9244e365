"""Per-vertex girth: the length of the shortest cycle through a vertex."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Union

from . import _kernels
from .plane_graph import PlaneGraph


class UnknownVertex(KeyError):
    pass


class _Infinite:
    """Girth of a vertex that lies on no cycle.

    Compares above every integer.  Arithmetic is deliberately unsupported.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinite, ())

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("girthwright.INF")

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, _Infinite)):
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        if isinstance(other, (int, _Infinite)):
            return other is self
        return NotImplemented

    def __gt__(self, other) -> bool:
        if isinstance(other, (int, _Infinite)):
            return other is not self
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, (int, _Infinite)):
            return True
        return NotImplemented


INF = _Infinite()
GirthValue = Union[int, _Infinite]


class GirthClass(Enum):
    G3 = "G3"
    G4 = "G4"
    G5PLUS = "G5plus"
    ACYCLIC = "Acyclic"


@dataclass(frozen=True)
class GirthProfile:
    values: tuple[GirthValue, ...]

    def __getitem__(self, v: int) -> GirthValue:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[GirthValue]:
        return iter(self.values)


def girth_profile(g: PlaneGraph) -> GirthProfile:
    hit = g.__dict__.get("_girth_profile")
    if hit is not None:
        return hit
    indptr, indices = g.csr
    raw = _kernels.vertex_girths(indptr, indices) if g.n else []
    prof = GirthProfile(tuple(int(x) if x else INF for x in raw))
    g.__dict__["_girth_profile"] = prof
    return prof


def vertex_girth(g: PlaneGraph, v: int) -> GirthValue:
    if not isinstance(v, int) or not 0 <= v < g.n:
        raise UnknownVertex(v)
    return girth_profile(g)[v]


def classify(value: GirthValue) -> GirthClass:
    if value is INF:
        return GirthClass.ACYCLIC
    if value == 3:
        return GirthClass.G3
    if value == 4:
        return GirthClass.G4
    return GirthClass.G5PLUS


def girth_class(profile: GirthProfile, v: int) -> GirthClass:
    return classify(profile[v])


def list_threshold(value: GirthValue) -> int:
    """Smallest list size a vertex of this girth is owed."""
    if value == 3:
        return 5
    if value == 4:
        return 4
    return 3
