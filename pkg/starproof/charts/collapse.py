"""
LLEE-preserving bisimulation collapse.

Each step picks two distinct bisimilar vertices w1, w2 satisfying one of the
conditions C1, C2, C3, adapts loop levels (transformation I, II or III),
connects w1 through to w2, and cleans up entries that no longer loop.
"""
import json
import logging
from pathlib import Path
from typing import NamedTuple, Optional

import networkx as nx

from .bisim import is_functional, largest_bisimulation, self_bisimilarity_classes
from .chart import Chart, LabeledChart, Transition, erase, garbage_collect, save_chart
from .conf import get_setting
from .exceptions import CollapseError, PreconditionError
from .llee import compute_norms, compute_relations, loop_subchart, require_witness
from .serializers import CollapseStepSerializer

logger = logging.getLogger(__name__)

CONDITIONS = ('C1', 'C2', 'C3')
STRATEGIES = ('canonical', 'lbsn')


class PairCondition(NamedTuple):
    kind: str
    chain: tuple = ()
    pivot: Optional[int] = None

    def __str__(self):
        if self.kind == 'C2':
            return f"C2({' ⟲ '.join(map(str, self.chain))})"
        if self.kind == 'C3':
            return f"C3({self.pivot})"
        return self.kind


class CollapseStep(NamedTuple):
    step: int
    w1: int
    w2: int
    condition: PairCondition
    witness: LabeledChart


class Collapse(NamedTuple):
    witness: LabeledChart
    mapping: dict
    steps: tuple


def connect_through(c, w1, w2):
    """
    Redirect every transition into w1 over to w2 (moving the start if needed)
    and garbage-collect. Redirected transitions inherit their label unless
    they coincide with a transition already present.
    """
    chart = erase(c)
    if w1 == w2:
        raise PreconditionError("cannot connect a vertex through to itself")
    for w in (w1, w2):
        if w not in chart.vertices:
            raise PreconditionError(f"vertex {w} is not in the chart")
        if chart.is_tick(w):
            raise PreconditionError("the sink cannot be connected through")
    labeled = isinstance(c, LabeledChart)
    levels = {}
    for t in chart.transitions:
        if t.tgt != w1:
            levels[t] = c.levels[t] if labeled else 0
    for t in chart.incoming(w1):
        moved = Transition(t.src, t.action, w2)
        if moved not in levels:
            levels[moved] = c.levels[t] if labeled else 0
    result = garbage_collect(Chart(
        start=w2 if chart.start == w1 else chart.start,
        transitions=list(levels),
        tick=chart.tick,
        vertices=chart.vertices,
        captions=chart.captions,
    ))
    mapping = {v: v for v in result.vertices}
    mapping[w1] = w2
    if labeled:
        return LabeledChart(result, {t: levels[t] for t in result.transitions}), mapping
    return result, mapping


def _normed(chart, v):
    return chart.tick is not None and chart.reaches(v, chart.tick)


class _Context:
    """Relations of one witness, computed once per collapse step"""

    def __init__(self, lc):
        self.lc = lc
        self.chart = lc.chart
        self.rel = compute_relations(lc)
        self.lb_plus = self.rel.loops_back_plus()
        self._lb_graph = nx.DiGraph()
        self._lb_graph.add_nodes_from(self.chart.vertices)
        self._lb_graph.add_edges_from(self.rel.loops_back)

    def check(self, kind, w1, w2):
        """The PairCondition if (w1, w2) satisfies kind, else None"""
        if kind == 'C1':
            if self.chart.reaches(w2, w1):
                return None
            if self.rel.descends_to(w1) and _normed(self.chart, w2):
                return None
            return PairCondition('C1')
        if kind == 'C2':
            if (w2, w1) not in self.lb_plus:
                return None
            return PairCondition('C2', chain=tuple(nx.shortest_path(self._lb_graph, w2, w1)))
        if self.lc.body_reaches(w2, w1):
            return None
        for w, v in sorted(self.rel.directly_loops_back):
            if w == w1 and (w2, v) in self.lb_plus:
                return PairCondition('C3', pivot=v)
        return None


def bisimilar_pairs(c):
    """Ordered pairs of distinct bisimilar non-sink vertices, canonical order"""
    chart = erase(c)
    pairs = []
    for members in self_bisimilarity_classes(chart):
        members = [v for v in members if not chart.is_tick(v)]
        pairs.extend((w1, w2) for w1 in members for w2 in members if w1 != w2)
    return sorted(pairs)


def find_collapsible_pair(lc, strategy='canonical'):
    """A bisimilar pair with the condition it satisfies, or None if the chart is collapsed"""
    require_witness(lc)
    return _find_pair(lc, strategy)


def _find_pair(lc, strategy):
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown collapse strategy {strategy!r}")
    pairs = bisimilar_pairs(lc)
    if not pairs:
        return None
    ctx = _Context(lc)
    if strategy == 'canonical':
        for kind in CONDITIONS:
            for w1, w2 in pairs:
                cond = ctx.check(kind, w1, w2)
                if cond is not None:
                    return w1, w2, cond
    else:
        lbsn = compute_norms(lc).lbsn
        for w1, w2 in sorted(pairs, key=lambda p: (lbsn[p[0]], lbsn[p[1]], p)):
            for kind in CONDITIONS:
                cond = ctx.check(kind, w1, w2)
                if cond is not None:
                    return w1, w2, cond
    raise CollapseError(f"{len(pairs)} bisimilar pairs but none satisfies C1, C2 or C3")


def clean_up(lc):
    """Demote entry identifiers <u, a> whose loop subchart no longer returns to u, to a fixpoint"""
    while True:
        stale = None
        for u, alpha in lc.entry_ids:
            sub = loop_subchart(lc, u, alpha)
            if not any(t.tgt == u for t in sub.transitions):
                stale = (u, alpha)
                break
        if stale is None:
            return lc
        u, alpha = stale
        logger.debug("clean-up: entries <%d,%d> become body", u, alpha)
        lc = lc.relabel({t: 0 for t in lc.entries_at(u, alpha)})


def transform(lc, w1, w2, cond):
    """Apply transformation I, II or III for the pair (w1, w2) under cond"""
    chart = lc.chart
    if not any(w1 in members and w2 in members for members in self_bisimilarity_classes(chart)):
        raise CollapseError(f"vertices {w1} and {w2} are not bisimilar")
    ctx = _Context(lc)
    verified = ctx.check(cond.kind, w1, w2)
    if verified is None:
        raise CollapseError(f"pair ({w1}, {w2}) does not satisfy {cond}")
    if cond.kind == 'C1':
        result = _transform_one(lc, w1, w2)
    elif cond.kind == 'C2':
        result = _transform_two(ctx, w1, w2)
    else:
        pivot = cond.pivot if cond.pivot is not None else verified.pivot
        if (w1, pivot) not in ctx.rel.directly_loops_back or (w2, pivot) not in ctx.lb_plus:
            raise CollapseError(f"pair ({w1}, {w2}) does not satisfy C3 with pivot {pivot}")
        result = _transform_three(lc, w1, w2, pivot)
    return clean_up(result)


def _transform_one(lc, w1, w2):
    chart = lc.chart
    m = max((lc.level(t) for t in chart.transitions if lc.is_entry(t) and chart.reaches(w2, t.src)), default=0)
    raised = {t: lc.level(t) + m for t in chart.transitions if lc.is_entry(t) and chart.reaches(t.tgt, w1)}
    connected, _ = connect_through(lc.relabel(raised), w1, w2)
    return connected


def _transform_two(ctx, w1, w2):
    lc = ctx.lc
    candidates = sorted(
        u for u, v in ctx.rel.directly_loops_back
        if v == w1 and (u == w2 or (w2, u) in ctx.lb_plus)
    )
    if not candidates:
        raise CollapseError(f"no vertex between {w2} and {w1} directly loops back to {w1}")
    hat = candidates[0]
    gamma = max(lc.entry_levels(w1), default=0)
    connected, _ = connect_through(lc, w1, w2)
    if hat not in connected.chart.vertices:
        raise CollapseError(f"vertex {hat} vanished while connecting {w1} through to {w2}")
    return connected.relabel({t: gamma for t in connected.body_out(hat)})


def _transform_three(lc, w1, w2, pivot):
    gamma = max(lc.entry_levels(pivot))
    lifted = lc.relabel({t: gamma for t in lc.entry_out(pivot)})
    connected, _ = connect_through(lifted, w1, w2)
    return connected


def collapse_llee(lc, strategy=None):
    """Collapse a LLEE-witness step by step; the result is a LLEE-witness of the bisimulation collapse"""
    require_witness(lc)
    strategy = strategy or get_setting('COLLAPSE_STRATEGY')
    current = lc
    steps = []
    while True:
        found = _find_pair(current, strategy)
        if found is None:
            break
        w1, w2, cond = found
        current = transform(current, w1, w2, cond)
        steps.append(CollapseStep(len(steps) + 1, w1, w2, cond, current))
        logger.debug("collapse step %d: %d => %d under %s, %d vertices left",
                     len(steps), w1, w2, cond, len(current.chart.vertices))
    relation = largest_bisimulation(lc.chart, current.chart)
    if relation is None or not is_functional(relation, lc.chart, current.chart):
        raise CollapseError("collapsed witness is not the image of a functional bisimulation")
    return Collapse(current, relation.as_map(), tuple(steps))


def write_trace(collapse, directory, initial=None):
    """Write one labeled chart file per step plus manifest.json; returns the manifest path"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    if initial is not None:
        (directory / 'step-00.chart').write_text(save_chart(initial), encoding='utf-8')
    rows = []
    for step in collapse.steps:
        name = f"step-{step.step:02d}.chart"
        (directory / name).write_text(save_chart(step.witness), encoding='utf-8')
        rows.append({
            'step': step.step,
            'w1': step.w1,
            'w2': step.w2,
            'condition': step.condition.kind,
            'pivot': step.condition.pivot,
            'chain': list(step.condition.chain),
            'file': name,
        })
    manifest = {
        'steps': CollapseStepSerializer(rows, many=True).data,
        'vertices': len(collapse.witness.chart.vertices),
    }
    path = directory / 'manifest.json'
    path.write_text(json.dumps(manifest, indent=2), encoding='utf-8')
    return path
