"""Selection state, harmonic ratios, and frequency-ratio graph construction.

All state transitions are pure: each operation returns a new SelectionState.
Selection order numbers are assigned once and never reused, so downstream
color assignment stays stable across deselections.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from sonolens.errors import NonPositiveFrequency, UnknownSelection
from sonolens.features import Peak

DEFAULT_AUTO_SELECT_N = 4
DEFAULT_INTEGER_TOLERANCE = 0.05


@dataclass(frozen=True)
class Selection:
    plot_id: str
    peak: Peak
    order: int

    def to_dict(self) -> dict:
        return {"plot_id": self.plot_id, "peak": self.peak.to_dict(),
                "selection_order": self.order}

    @staticmethod
    def from_dict(d: dict) -> "Selection":
        return Selection(d["plot_id"], Peak.from_dict(d["peak"]), int(d["selection_order"]))


@dataclass(frozen=True)
class Pair:
    order_a: int
    order_b: int
    ratio: float

    def to_dict(self) -> dict:
        return {"order_a": self.order_a, "order_b": self.order_b, "ratio": self.ratio}


@dataclass(frozen=True)
class SelectionState:
    selections: tuple[Selection, ...] = ()
    pairs: tuple[Pair, ...] = ()
    removed: tuple[tuple[str, float], ...] = ()  # (plot_id, freq_hz) struck from candidacy
    next_order: int = 1

    def find(self, plot_id: str, freq_hz: float, tol: float = 1e-9) -> Selection | None:
        for s in self.selections:
            if s.plot_id == plot_id and abs(s.peak.freq_hz - freq_hz) <= tol:
                return s
        return None

    def by_order(self, order: int) -> Selection:
        for s in self.selections:
            if s.order == order:
                return s
        raise UnknownSelection(f"no live selection with order {order}")

    def to_dict(self) -> dict:
        return {
            "selections": [s.to_dict() for s in self.selections],
            "pairs": [p.to_dict() for p in self.pairs],
            "removed": [list(r) for r in self.removed],
            "next_order": self.next_order,
        }

    @staticmethod
    def from_dict(d: dict) -> "SelectionState":
        return SelectionState(
            selections=tuple(Selection.from_dict(s) for s in d.get("selections", [])),
            pairs=tuple(Pair(int(p["order_a"]), int(p["order_b"]), float(p["ratio"]))
                        for p in d.get("pairs", [])),
            removed=tuple((r[0], float(r[1])) for r in d.get("removed", [])),
            next_order=int(d.get("next_order", 1)),
        )


def compute_ratio(fa: float, fb: float) -> float:
    """max/min frequency ratio, always >= 1."""
    if fa <= 0 or fb <= 0:
        raise NonPositiveFrequency(f"frequencies must be positive, got {fa}, {fb}")
    return max(fa, fb) / min(fa, fb)


def select(state: SelectionState, plot_id: str, peak: Peak) -> SelectionState:
    """Append a selection with the next (never-reused) order number."""
    if state.find(plot_id, peak.freq_hz) is not None:
        return state
    sel = Selection(plot_id=plot_id, peak=peak, order=state.next_order)
    return replace(state, selections=state.selections + (sel,),
                   next_order=state.next_order + 1)


def deselect(state: SelectionState, plot_id: str, freq_hz: float) -> SelectionState:
    """Drop a selection; pairs referencing it vanish with it."""
    sel = state.find(plot_id, freq_hz)
    if sel is None:
        raise UnknownSelection(f"no selection at {freq_hz} Hz on plot {plot_id}")
    keep = tuple(s for s in state.selections if s.order != sel.order)
    pairs = tuple(p for p in state.pairs
                  if p.order_a != sel.order and p.order_b != sel.order)
    return replace(state, selections=keep, pairs=pairs)


def remove(state: SelectionState, plot_id: str, freq_hz: float) -> SelectionState:
    """Strike a detected peak from candidacy, cascading a deselect if selected."""
    if state.find(plot_id, freq_hz) is not None:
        state = deselect(state, plot_id, freq_hz)
    return replace(state, removed=state.removed + ((plot_id, freq_hz),))


def pair(state: SelectionState, order_a: int, order_b: int) -> SelectionState:
    """Record a ratio pair between two live selections."""
    sa = state.by_order(order_a)
    sb = state.by_order(order_b)
    ratio = compute_ratio(sa.peak.freq_hz, sb.peak.freq_hz)
    return replace(state, pairs=state.pairs + (Pair(order_a, order_b, ratio),))


def auto_select(peaks_by_plot: dict[str, list[Peak]],
                n: int = DEFAULT_AUTO_SELECT_N) -> SelectionState:
    """Top-n peaks per plot by linear power, selected in power order."""
    if not 1 <= n <= 5:
        raise ValueError("auto-select n must be in [1, 5]")
    state = SelectionState()
    for plot_id, peaks in peaks_by_plot.items():
        ranked = sorted(peaks, key=lambda p: (-p.power_linear, p.bin_index))
        for p in ranked[:n]:
            state = select(state, plot_id, p)
    return state


@dataclass(frozen=True)
class GraphNode:
    order: int
    freq_hz: float
    plot_id: str

    def to_dict(self) -> dict:
        return {"order": self.order, "freq_hz": self.freq_hz, "plot_id": self.plot_id}


@dataclass(frozen=True)
class GraphEdge:
    order_a: int
    order_b: int
    ratio: float
    is_near_integer: bool
    nearest_integer: int

    def to_dict(self) -> dict:
        return {"order_a": self.order_a, "order_b": self.order_b, "ratio": self.ratio,
                "is_near_integer": self.is_near_integer,
                "nearest_integer": self.nearest_integer}


@dataclass(frozen=True)
class HarmonicGraph:
    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]

    def to_dict(self) -> dict:
        return {"nodes": [n.to_dict() for n in self.nodes],
                "edges": [e.to_dict() for e in self.edges]}


def build_graph(state: SelectionState,
                integer_tolerance: float = DEFAULT_INTEGER_TOLERANCE) -> HarmonicGraph:
    """Node per selection, edge per pair, near-integer ratios flagged."""
    if not 0.0 < integer_tolerance < 0.5:
        raise ValueError("integer_tolerance must be in (0, 0.5)")
    nodes = tuple(GraphNode(s.order, s.peak.freq_hz, s.plot_id) for s in state.selections)
    edges = []
    for p in state.pairs:
        nearest = int(round(p.ratio))
        edges.append(GraphEdge(
            order_a=p.order_a, order_b=p.order_b, ratio=p.ratio,
            is_near_integer=abs(p.ratio - nearest) <= integer_tolerance,
            nearest_integer=nearest,
        ))
    return HarmonicGraph(nodes=nodes, edges=tuple(edges))


def apply_events(state: SelectionState, events: list[tuple]) -> SelectionState:
    """Fold an event log: ('select', plot, peak) | ('deselect', plot, freq)
    | ('remove', plot, freq) | ('pair', order_a, order_b)."""
    for ev in events:
        kind = ev[0]
        if kind == "select":
            state = select(state, ev[1], ev[2])
        elif kind == "deselect":
            state = deselect(state, ev[1], ev[2])
        elif kind == "remove":
            state = remove(state, ev[1], ev[2])
        elif kind == "pair":
            state = pair(state, ev[1], ev[2])
        else:
            raise ValueError(f"unknown event {kind!r}")
    return state
