"""BGP-style routes and the merge (route selection) operator.

A route is either the distinguished :data:`NO_ROUTE` value or a :class:`Route`
record.  The AS path is abstracted as a hop count plus the set of nodes the
route has been sent from, which is all the membership/length style
properties need.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

DEFAULT_LP = 100
PREFIX_BITS = 32


class NoRouteError(AttributeError):
    """Raised when a route field is read off the no-route value."""


class _NoRoute:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __getattr__(self, name):
        if name.startswith("__"):
            raise AttributeError(name)
        raise NoRouteError(f"no-route has no field {name!r}")

    def __repr__(self):
        return "NO_ROUTE"

    def __reduce__(self):
        return (_NoRoute, ())


NO_ROUTE = _NoRoute()


def parse_tag(tag: str) -> str:
    """Normalise a community tag ``"a:b"`` (two 16-bit halves)."""
    try:
        hi, lo = (int(x) for x in str(tag).split(":"))
    except ValueError:
        raise ValueError(f"bad community tag {tag!r}") from None
    if not (0 <= hi < 1 << 16 and 0 <= lo < 1 << 16):
        raise ValueError(f"community tag {tag!r} out of range")
    return f"{hi}:{lo}"


def tag_key(tag: str) -> tuple[int, int]:
    hi, lo = tag.split(":")
    return int(hi), int(lo)


def parse_prefix(value) -> int:
    p = int(value, 0) if isinstance(value, str) else int(value)
    if not 0 <= p < 1 << PREFIX_BITS:
        raise ValueError(f"prefix {value!r} is not a 32-bit pattern")
    return p


def format_prefix(p: int) -> str:
    return f"0x{p:08x}"


@dataclass(frozen=True)
class Route:
    prefix: int = 0
    lp: int = DEFAULT_LP
    path_len: int = 0
    visited: frozenset = field(default_factory=frozenset)
    comms: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.lp < 0 or self.path_len < 0:
            raise ValueError("lp and path_len must be non-negative")
        object.__setattr__(self, "visited", frozenset(self.visited))
        object.__setattr__(self, "comms", frozenset(parse_tag(t) for t in self.comms))

    def replace(self, **changes) -> "Route":
        kw = dict(prefix=self.prefix, lp=self.lp, path_len=self.path_len,
                  visited=self.visited, comms=self.comms)
        kw.update(changes)
        return Route(**kw)

    def __repr__(self):
        vis = ",".join(sorted(self.visited))
        com = ",".join(sorted(self.comms, key=tag_key))
        return (f"Route(prefix={format_prefix(self.prefix)}, lp={self.lp}, "
                f"len={self.path_len}, visited={{{vis}}}, comms={{{com}}})")


AnyRoute = Union[Route, _NoRoute]


def is_no_route(r) -> bool:
    return r is NO_ROUTE


def mask_of(items: Iterable[str], index: Mapping[str, int]) -> int:
    m = 0
    for x in items:
        m |= 1 << index[x]
    return m


@dataclass(frozen=True)
class Ordering:
    """Bit positions used to canonically encode visited and community sets.

    The same positions are used by the SMT encoder, so the tiebreak of
    :func:`merge` means the same thing on both sides.
    """

    nodes: tuple = ()
    tags: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "node_index", {v: i for i, v in enumerate(self.nodes)})
        object.__setattr__(self, "tag_index", {t: i for i, t in enumerate(self.tags)})

    def visited_mask(self, r: Route) -> int:
        return mask_of(r.visited, self.node_index)

    def comms_mask(self, r: Route) -> int:
        return mask_of(r.comms, self.tag_index)


def _fallback_ordering(a: Route, b: Route) -> Ordering:
    nodes = sorted(a.visited | b.visited)
    tags = sorted(a.comms | b.comms, key=tag_key)
    return Ordering(tuple(nodes), tuple(tags))


def preference_key(r: Route, order: Ordering) -> tuple:
    """Total order on routes; smaller is preferred.

    Higher local preference first, then shorter path, then the canonical
    tiebreak (visited mask, prefix, community mask).
    """
    return (-r.lp, r.path_len, order.visited_mask(r), r.prefix, order.comms_mask(r))


def merge(a: AnyRoute, b: AnyRoute, order: Ordering | None = None) -> AnyRoute:
    if a is NO_ROUTE:
        return b
    if b is NO_ROUTE:
        return a
    if order is None:
        order = _fallback_ordering(a, b)
    return a if preference_key(a, order) <= preference_key(b, order) else b


def merge_all(routes: Sequence[AnyRoute], order: Ordering | None = None) -> AnyRoute:
    best = NO_ROUTE
    for r in routes:
        best = merge(best, r, order)
    return best


def route_to_json(r: AnyRoute):
    if r is NO_ROUTE:
        return None
    return {
        "prefix": format_prefix(r.prefix),
        "lp": r.lp,
        "pathLen": r.path_len,
        "visited": sorted(r.visited),
        "comms": sorted(r.comms, key=tag_key),
    }


def route_from_json(obj) -> AnyRoute:
    if obj is None:
        return NO_ROUTE
    return Route(
        prefix=parse_prefix(obj.get("prefix", 0)),
        lp=int(obj.get("lp", DEFAULT_LP)),
        path_len=int(obj.get("pathLen", 0)),
        visited=frozenset(obj.get("visited", ())),
        comms=frozenset(obj.get("comms", ())),
    )
