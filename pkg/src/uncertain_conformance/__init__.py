"""Upper and lower conformance bounds for uncertain event traces."""
from ._kernel import DEFAULT as KERNEL
from .alignment import (
    STANDARD_COST,
    Alignment,
    ConformanceBounds,
    CostFunction,
    Move,
    align,
    bounds,
    bounds_bruteforce,
    cost,
    lower_bound,
    upper_bound,
)
from .behavior import BehaviorGraph, behavior_graph, behavior_net, transitive_reduction
from .petri import SKIP, TAU, Marking, SystemNet, enabled, event_net, fire, product, visible_language
from .uncertain_log import (
    CertainEvent,
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    StronglyUncertainEvent,
    WeaklyUncertainEvent,
    is_log_realization,
    realizations,
    simplify,
    weak_to_strong,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL",
    "STANDARD_COST",
    "Alignment",
    "ConformanceBounds",
    "CostFunction",
    "Move",
    "align",
    "bounds",
    "bounds_bruteforce",
    "cost",
    "lower_bound",
    "upper_bound",
    "BehaviorGraph",
    "behavior_graph",
    "behavior_net",
    "transitive_reduction",
    "SKIP",
    "TAU",
    "Marking",
    "SystemNet",
    "enabled",
    "event_net",
    "fire",
    "product",
    "visible_language",
    "CertainEvent",
    "SimpleUncertainEvent",
    "SimpleUncertainTrace",
    "StronglyUncertainEvent",
    "WeaklyUncertainEvent",
    "is_log_realization",
    "realizations",
    "simplify",
    "weak_to_strong",
]
