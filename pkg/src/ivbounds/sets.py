"""Carrier types for identified sets.

The parameter vector has twenty components: eight instrument-controlled
direct effects ``theta_{z}{t}``, eight treatment-controlled direct effects
``delta_{d}{t}``, and the four compliance-type shares.  An identified set
assigns each component a point, an interval, the vacuous outcome-range
bracket, or the empty set; emptiness is a property of the whole set, never
of a single component.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

__all__ = [
    "AssumptionMenu",
    "Entry",
    "IdentifiedSet",
    "Interval",
    "PARAM_NAMES",
    "TypeProbabilities",
    "relabel_entries",
]

#: Component names in canonical order.
PARAM_NAMES = (
    "theta_0a", "theta_1a", "theta_0c", "theta_1c",
    "theta_0df", "theta_1df", "theta_0n", "theta_1n",
    "delta_0a", "delta_1a", "delta_0c", "delta_1c",
    "delta_0df", "delta_1df", "delta_0n", "delta_1n",
    "p_a", "p_c", "p_df", "p_n",
)

#: Compliance-type swap induced by flipping the instrument label.
_TYPE_SWAP = {"a": "a", "c": "df", "df": "c", "n": "n"}

_SIMPLEX_TOL = 1e-12


class AssumptionMenu(enum.Enum):
    """Which combination of identifying assumptions is maintained.

    ``RA_ER_MON`` keeps random assignment, exclusion, and monotonicity;
    ``RA_ER`` drops monotonicity; ``RA_MON`` drops exclusion.  The short
    codes ``A1``/``A2``/``A3`` are used in reports.
    """

    RA_ER_MON = "A1"
    RA_ER = "A2"
    RA_MON = "A3"

    @property
    def code(self) -> str:
        return self.value


@dataclass(frozen=True)
class Interval:
    """Closed real interval with ``lo <= hi``.

    The empty set is represented by ``None`` wherever an operation may
    return no interval at all.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol

    def shift(self, c: float) -> "Interval":
        return Interval(self.lo + c, self.hi + c)

    def reflect(self, c: float) -> "Interval":
        """Interval of ``c - x`` as ``x`` ranges over ``self``."""
        return Interval(c - self.hi, c - self.lo)

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def intersects(self, other: "Interval", tol: float = 0.0) -> bool:
        return self.lo <= other.hi + tol and other.lo <= self.hi + tol


@dataclass(frozen=True)
class Entry:
    """One component of an identified set.

    ``kind`` is ``"point"``, ``"interval"``, ``"full_range"``, or
    ``"empty"``.  A full-range entry still carries its bracket (the logical
    outcome range, or its difference range for effect parameters) so reports
    can print it.
    """

    kind: str
    lo: float | None = None
    hi: float | None = None

    @staticmethod
    def point(v: float) -> "Entry":
        return Entry("point", float(v), float(v))

    @staticmethod
    def interval(lo: float, hi: float) -> "Entry":
        if lo > hi:
            raise ValueError(f"entry endpoints out of order: [{lo}, {hi}]")
        return Entry("interval", float(lo), float(hi))

    @staticmethod
    def full_range(lo: float, hi: float) -> "Entry":
        return Entry("full_range", float(lo), float(hi))

    @staticmethod
    def empty() -> "Entry":
        return Entry("empty", None, None)

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"

    @property
    def width(self) -> float:
        if self.is_empty:
            return 0.0
        return self.hi - self.lo

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if self.is_empty:
            return False
        return self.lo - tol <= x <= self.hi + tol

    def as_interval(self) -> Interval | None:
        return None if self.is_empty else Interval(self.lo, self.hi)

    def negate(self) -> "Entry":
        """Entry of ``-x`` as ``x`` ranges over this entry."""
        if self.is_empty:
            return self
        return Entry(self.kind, -self.hi, -self.lo)

    def hull(self, other: "Entry") -> "Entry":
        """Smallest single entry containing both (interval hull)."""
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        if self.kind == other.kind == "point" and self.lo == other.lo:
            return Entry.point(self.lo)
        if self.kind == other.kind == "full_range":
            return Entry.full_range(lo, hi)
        return Entry.interval(lo, hi)

    def gap_to(self, other: "Entry") -> float:
        """Distance between the two entries (0 when they touch or overlap)."""
        if self.is_empty or other.is_empty:
            return 0.0
        return max(other.lo - self.hi, self.lo - other.hi, 0.0)


@dataclass(frozen=True)
class TypeProbabilities:
    """Shares of the four compliance types; a point on the 3-simplex."""

    p_a: float
    p_c: float
    p_df: float
    p_n: float

    def __post_init__(self):
        for name in ("p_a", "p_c", "p_df", "p_n"):
            v = getattr(self, name)
            if not (v >= -_SIMPLEX_TOL):
                raise ValueError(f"{name} = {v} is negative beyond tolerance")
        total = self.p_a + self.p_c + self.p_df + self.p_n
        if abs(total - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"type shares sum to {total}, expected 1")

    def as_dict(self) -> dict[str, float]:
        return {"p_a": self.p_a, "p_c": self.p_c, "p_df": self.p_df, "p_n": self.p_n}

    def relabel_instrument(self) -> "TypeProbabilities":
        """Shares after flipping the instrument label (compliers <-> defiers)."""
        return TypeProbabilities(self.p_a, self.p_df, self.p_c, self.p_n)


@dataclass
class IdentifiedSet:
    """Identified set for the full twenty-component parameter vector.

    Parameters
    ----------
    entries : dict
        One :class:`Entry` per name in :data:`PARAM_NAMES`.
    menu : AssumptionMenu
        Assumption menu that produced the set.
    case_tag : str
        Which structural sub-case applied (e.g. ``"A1.1"`` for a positive
        first stage under the full menu).
    linked_constraints : list of str
        Cross-component equalities that hold inside the set, such as
        ``"theta_0c=theta_1c"``; purely descriptive.
    """

    entries: dict[str, Entry]
    menu: AssumptionMenu
    case_tag: str = ""
    linked_constraints: list[str] = field(default_factory=list)

    def __post_init__(self):
        missing = [k for k in PARAM_NAMES if k not in self.entries]
        if missing:
            raise ValueError(f"missing entries: {missing}")
        empties = [k for k, e in self.entries.items() if e.is_empty]
        if empties and len(empties) != len(PARAM_NAMES):
            raise ValueError("either all entries are empty or none is")
        # canonical ordering for stable reports
        self.entries = {k: self.entries[k] for k in PARAM_NAMES}

    @classmethod
    def empty(cls, menu: AssumptionMenu, case_tag: str = "") -> "IdentifiedSet":
        return cls({k: Entry.empty() for k in PARAM_NAMES}, menu, case_tag)

    @property
    def is_empty(self) -> bool:
        return self.entries[PARAM_NAMES[0]].is_empty

    def __getitem__(self, name: str) -> Entry:
        return self.entries[name]

    def relabel_instrument(self) -> "IdentifiedSet":
        """Map a set computed on the flipped instrument back to original labels."""
        return IdentifiedSet(
            relabel_entries(self.entries),
            self.menu,
            self.case_tag,
            [_relabel_constraint(c) for c in self.linked_constraints],
        )


def relabel_entries(entries: dict[str, Entry]) -> dict[str, Entry]:
    """Translate per-component entries across an instrument flip.

    With the instrument label flipped, compliers and defiers trade places,
    the two instrument arms swap inside each ``theta``, and every ``delta``
    reverses sign.  Applying the map twice is the identity.
    """
    out: dict[str, Entry] = {}
    for z in "01":
        for t in ("a", "c", "df", "n"):
            zz = "1" if z == "0" else "0"
            out[f"theta_{z}{t}"] = entries[f"theta_{zz}{_TYPE_SWAP[t]}"]
    for d in "01":
        for t in ("a", "c", "df", "n"):
            out[f"delta_{d}{t}"] = entries[f"delta_{d}{_TYPE_SWAP[t]}"].negate()
    for t in ("a", "c", "df", "n"):
        out[f"p_{t}"] = entries[f"p_{_TYPE_SWAP[t]}"]
    return out


def _relabel_constraint(text: str) -> str:
    """Best-effort rewrite of a constraint label across an instrument flip."""
    marker = "\0"
    text = text.replace("df", marker)
    text = text.replace("c", "df").replace(marker, "c")
    return text
