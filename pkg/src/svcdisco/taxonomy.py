"""Non-functional service taxonomy and the 6-digit classification ID.

The hierarchy has three levels, two digits each::

    level 1  behavior   Collective=01  Notifying=02  Interactive=03
    level 2  cost tier  Free=01        Commercial=02
    level 3  cost mode  Free: Unlimited=01 Limited=02
                        Commercial: Subscription=01 PayPerUse=02

``00`` is reserved as a query wildcard and never appears in stored IDs.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

WILDCARD = "00"


class TaxonomyError(ValueError):
    """Invalid classification or classification ID."""


class BehaviorCategory(enum.Enum):
    COLLECTIVE = "01"
    NOTIFYING = "02"
    INTERACTIVE = "03"

    @property
    def label(self) -> str:
        return self.name.capitalize()


class CostTier(enum.Enum):
    FREE = "01"
    COMMERCIAL = "02"

    @property
    def label(self) -> str:
        return self.name.capitalize()


class CostMode(enum.Enum):
    """Level-3 cost mode. Each mode belongs to exactly one tier, so a mode
    also identifies one of the four selectable cost categories."""

    UNLIMITED = (CostTier.FREE, "01", "FreeUnlimited")
    LIMITED = (CostTier.FREE, "02", "FreeLimited")
    SUBSCRIPTION = (CostTier.COMMERCIAL, "01", "Subscribe")
    PAY_PER_USE = (CostTier.COMMERCIAL, "02", "PayPerUse")

    def __init__(self, tier: CostTier, code: str, label: str) -> None:
        self.tier = tier
        self.code = code
        self.label = label


BEHAVIORS = tuple(BehaviorCategory)
COST_MODES = tuple(CostMode)


@dataclass(frozen=True)
class Classification:
    behavior: BehaviorCategory
    tier: CostTier
    mode: CostMode

    def __post_init__(self) -> None:
        if self.mode.tier is not self.tier:
            raise TaxonomyError(
                f"cost mode {self.mode.name} is not valid under tier {self.tier.name}"
            )

    @classmethod
    def of(cls, behavior: BehaviorCategory, mode: CostMode) -> Classification:
        return cls(behavior, mode.tier, mode)

    @property
    def cost_label(self) -> str:
        return self.mode.label

    def __str__(self) -> str:
        return f"{self.behavior.label},{self.tier.label},{self.mode.name.title().replace('_', '')}"


def all_classifications() -> list[Classification]:
    """The 12 valid classifications, in code order."""
    return [Classification.of(b, m) for b in BEHAVIORS for m in COST_MODES]


def encode(c: Classification) -> str:
    # re-validate: callers may have bypassed __post_init__ via object.__setattr__
    if c.mode.tier is not c.tier:
        raise TaxonomyError(f"cost mode {c.mode.name} is not valid under tier {c.tier.name}")
    return c.behavior.value + c.tier.value + c.mode.code


_ID_RE = re.compile(r"^[0-9]{6}$")
_BEHAVIOR_BY_CODE = {b.value: b for b in BehaviorCategory}
_TIER_BY_CODE = {t.value: t for t in CostTier}
_MODE_BY_CODE = {(m.tier, m.code): m for m in CostMode}


def split_id(cid: str) -> tuple[str, str, str]:
    if not isinstance(cid, str) or not _ID_RE.match(cid):
        raise TaxonomyError(f"classification id must be 6 decimal digits, got {cid!r}")
    return cid[0:2], cid[2:4], cid[4:6]


def decode(cid: str) -> Classification:
    b, t, m = split_id(cid)
    if WILDCARD in (b, t, m):
        raise TaxonomyError(f"wildcard code in stored classification id {cid!r}")
    try:
        behavior = _BEHAVIOR_BY_CODE[b]
    except KeyError:
        raise TaxonomyError(f"unknown behavior code {b!r} in {cid!r}") from None
    try:
        tier = _TIER_BY_CODE[t]
    except KeyError:
        raise TaxonomyError(f"unknown cost tier code {t!r} in {cid!r}") from None
    try:
        mode = _MODE_BY_CODE[(tier, m)]
    except KeyError:
        raise TaxonomyError(f"unknown cost mode code {m!r} under tier {tier.name}") from None
    return Classification(behavior, tier, mode)


def is_valid_query_id(cid: str) -> bool:
    """True for 6-digit IDs whose levels are defined codes or the wildcard."""
    try:
        b, t, m = split_id(cid)
    except TaxonomyError:
        return False
    if b != WILDCARD and b not in _BEHAVIOR_BY_CODE:
        return False
    if t != WILDCARD and t not in _TIER_BY_CODE:
        return False
    if m == WILDCARD:
        return True
    if t == WILDCARD:
        return any(mode.code == m for mode in CostMode)
    return (_TIER_BY_CODE[t], m) in _MODE_BY_CODE


def category_universe() -> list[str]:
    """The seven selectable category labels (3 behavior + 4 cost)."""
    return [
        "Collective",
        "Notifying",
        "Interactive",
        "FreeLimited",
        "FreeUnlimited",
        "PayPerUse",
        "Subscribe",
    ]


def _norm(label: str) -> str:
    return re.sub(r"[^a-z0-9]", "", label.lower())


_CATEGORY_LOOKUP: dict[str, BehaviorCategory | CostMode] = {}
for _b in BehaviorCategory:
    _CATEGORY_LOOKUP[_norm(_b.label)] = _b
for _m in CostMode:
    _CATEGORY_LOOKUP[_norm(_m.label)] = _m
# tolerated aliases
_CATEGORY_LOOKUP["subscription"] = CostMode.SUBSCRIPTION
_CATEGORY_LOOKUP["payperuse"] = CostMode.PAY_PER_USE
_CATEGORY_LOOKUP["freeunlimited"] = CostMode.UNLIMITED
_CATEGORY_LOOKUP["freelimited"] = CostMode.LIMITED

_TIER_LOOKUP = {_norm(t.label): t for t in CostTier}
_MODE_LOOKUP = {
    "unlimited": CostMode.UNLIMITED,
    "limited": CostMode.LIMITED,
    "subscription": CostMode.SUBSCRIPTION,
    "subscribe": CostMode.SUBSCRIPTION,
    "payperuse": CostMode.PAY_PER_USE,
}


def parse_category(label: str) -> BehaviorCategory | CostMode:
    """Map a category label (case and punctuation insensitive) to its member."""
    try:
        return _CATEGORY_LOOKUP[_norm(label)]
    except KeyError:
        raise TaxonomyError(
            f"unknown category {label!r}; expected one of {', '.join(category_universe())}"
        ) from None


def parse_classification(text: str) -> Classification:
    """Parse ``behavior,tier,mode`` or ``behavior,costcategory``.

    >>> encode(parse_classification("Collective,Free,Unlimited"))
    '010101'
    >>> encode(parse_classification("interactive, pay-per-use"))
    '030202'
    """
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) not in (2, 3):
        raise TaxonomyError(f"expected 'behavior,tier,mode' or 'behavior,cost', got {text!r}")
    behavior = parse_category(parts[0])
    if not isinstance(behavior, BehaviorCategory):
        raise TaxonomyError(f"{parts[0]!r} is not a behavior category")
    if len(parts) == 2:
        mode = parse_category(parts[1])
        if not isinstance(mode, CostMode):
            raise TaxonomyError(f"{parts[1]!r} is not a cost category")
        return Classification.of(behavior, mode)
    try:
        tier = _TIER_LOOKUP[_norm(parts[1])]
    except KeyError:
        raise TaxonomyError(f"unknown cost tier {parts[1]!r}") from None
    try:
        mode = _MODE_LOOKUP[_norm(parts[2])]
    except KeyError:
        raise TaxonomyError(f"unknown cost mode {parts[2]!r}") from None
    return Classification(behavior, tier, mode)
