"""
Charts: finite transition graphs with a start vertex and an optional sink √.

Vertices are integer ids. Transitions are kept in canonical order
(source id, target id, action name) and every iteration, file and proof
built on top of a chart follows that order.
"""
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Mapping, NamedTuple, Optional

import networkx as nx

from .exceptions import ChartFormatError, ChartInvariantError, PreconditionError
from .expr import ACTION_RE


class Transition(NamedTuple):
    src: int
    action: str
    tgt: int

    def __str__(self):
        return f"{self.src} -{self.action}-> {self.tgt}"


def transition_key(t):
    return (t.src, t.tgt, t.action)


@dataclass(frozen=True)
class Chart:
    """Start vertex, optional tick, transitions; captions are display-only"""
    start: int
    transitions: tuple
    tick: Optional[int] = None
    vertices: frozenset = frozenset()
    captions: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        transitions = tuple(sorted(set(self.transitions), key=transition_key))
        vertices = set(self.vertices) | {self.start}
        for t in transitions:
            vertices.update((t.src, t.tgt))
        if self.tick is not None:
            vertices.add(self.tick)
        object.__setattr__(self, 'transitions', transitions)
        object.__setattr__(self, 'vertices', frozenset(vertices))
        object.__setattr__(self, 'captions', MappingProxyType(
            {v: c for v, c in dict(self.captions).items() if v in vertices}
        ))
        if self.start == self.tick:
            raise ChartInvariantError("start vertex cannot be the sink")
        if self.tick is not None and self.out(self.tick):
            raise ChartInvariantError("sink has outgoing transition")

    @cached_property
    def _out(self):
        out = {v: [] for v in self.vertices}
        for t in self.transitions:
            out[t.src].append(t)
        return {v: tuple(ts) for v, ts in out.items()}

    @cached_property
    def _in(self):
        incoming = {v: [] for v in self.vertices}
        for t in self.transitions:
            incoming[t.tgt].append(t)
        return {v: tuple(ts) for v, ts in incoming.items()}

    def out(self, v):
        """Transitions leaving v, canonical order"""
        return self._out.get(v, ())

    def incoming(self, v):
        return self._in.get(v, ())

    def is_tick(self, v):
        return self.tick is not None and v == self.tick

    @property
    def proper_vertices(self):
        """Vertices other than the sink, ascending"""
        return sorted(v for v in self.vertices if not self.is_tick(v))

    def caption(self, v):
        if self.is_tick(v):
            return '√'
        return self.captions.get(v, f"v{v}")

    @cached_property
    def graph(self):
        """Underlying simple digraph (parallel actions merged)"""
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from((t.src, t.tgt) for t in self.transitions)
        return g

    def multigraph(self, levels=None):
        g = nx.MultiDiGraph()
        for v in self.vertices:
            g.add_node(v, is_start=v == self.start, is_tick=self.is_tick(v))
        for t in self.transitions:
            attrs = {'action': t.action}
            if levels is not None:
                attrs['level'] = levels[t]
            g.add_edge(t.src, t.tgt, key=t.action, **attrs)
        return g

    def reachable_from(self, v):
        """Vertices reachable from v, v included"""
        return nx.descendants(self.graph, v) | {v}

    def reaches(self, u, v):
        """u ->* v (reflexive)"""
        return u == v or nx.has_path(self.graph, u, v)

    def is_connected(self):
        return self.reachable_from(self.start) == self.vertices

    def check_connected(self):
        missing = sorted(self.vertices - self.reachable_from(self.start))
        if missing:
            raise ChartInvariantError(f"vertex {missing[0]} not reachable from start")
        return self

    def replace(self, **changes):
        data = {
            'start': self.start,
            'transitions': self.transitions,
            'tick': self.tick,
            'vertices': self.vertices,
            'captions': dict(self.captions),
        }
        data.update(changes)
        return Chart(**data)


@dataclass(frozen=True)
class LabeledChart:
    """A chart whose transitions carry 0 (body) or a loop-entry level n >= 1"""
    chart: Chart
    levels: Mapping[Transition, int] = field(hash=False)

    def __post_init__(self):
        levels = dict(self.levels)
        for t in self.chart.transitions:
            if t not in levels:
                raise ChartInvariantError(f"transition {t} has no label")
            if levels[t] < 0:
                raise ChartInvariantError(f"transition {t} has negative label")
        object.__setattr__(self, 'levels', MappingProxyType(
            {t: levels[t] for t in self.chart.transitions}
        ))

    @property
    def start(self):
        return self.chart.start

    @property
    def tick(self):
        return self.chart.tick

    @property
    def transitions(self):
        return self.chart.transitions

    def level(self, t):
        return self.levels[t]

    def is_entry(self, t):
        return self.levels[t] > 0

    def body_out(self, v):
        return tuple(t for t in self.chart.out(v) if self.levels[t] == 0)

    def entry_out(self, v):
        return tuple(t for t in self.chart.out(v) if self.levels[t] > 0)

    def entries_at(self, v, alpha):
        """The alpha-entry transitions departing v"""
        return tuple(t for t in self.chart.out(v) if self.levels[t] == alpha)

    @cached_property
    def entry_ids(self):
        """Sorted entry identifiers (v, alpha)"""
        return sorted({(t.src, self.levels[t]) for t in self.chart.transitions if self.levels[t] > 0})

    def entry_levels(self, v):
        return sorted({self.levels[t] for t in self.entry_out(v)})

    @cached_property
    def body_graph(self):
        g = nx.DiGraph()
        g.add_nodes_from(self.chart.vertices)
        g.add_edges_from((t.src, t.tgt) for t in self.chart.transitions if self.levels[t] == 0)
        return g

    def body_reaches(self, u, v):
        """u ->bo* v (reflexive)"""
        return u == v or nx.has_path(self.body_graph, u, v)

    def relabel(self, changes):
        levels = dict(self.levels)
        levels.update(changes)
        return LabeledChart(self.chart, levels)


def erase(c):
    """Underlying chart of a chart or labeled chart"""
    return c.chart if isinstance(c, LabeledChart) else c


def garbage_collect(c):
    """Restrict c (or a labeled chart) to what is reachable from its start"""
    chart = erase(c)
    keep = chart.reachable_from(chart.start)
    transitions = [t for t in chart.transitions if t.src in keep]
    result = Chart(
        start=chart.start,
        transitions=transitions,
        tick=chart.tick if chart.tick in keep else None,
        vertices=keep,
        captions=chart.captions,
    )
    if isinstance(c, LabeledChart):
        return LabeledChart(result, {t: c.levels[t] for t in transitions})
    return result


def rename(c, mapping):
    """Apply an injective vertex renaming to a chart or labeled chart"""
    chart = erase(c)

    def move(t):
        return Transition(mapping[t.src], t.action, mapping[t.tgt])

    result = Chart(
        start=mapping[chart.start],
        transitions=[move(t) for t in chart.transitions],
        tick=None if chart.tick is None else mapping[chart.tick],
        vertices={mapping[v] for v in chart.vertices},
        captions={mapping[v]: cap for v, cap in chart.captions.items()},
    )
    if isinstance(c, LabeledChart):
        return LabeledChart(result, {move(t): lvl for t, lvl in c.levels.items()})
    return result


def generated_subchart(c, v, entries):
    """
    The subchart generated by entry transitions U from v: paths first take a
    transition in U and then continue with any transitions, halting when v
    is reached again.
    """
    entries = set(entries)
    if v not in c.vertices:
        raise PreconditionError(f"vertex {v} is not in the chart")
    stray = sorted((t for t in entries if t not in set(c.out(v))), key=transition_key)
    if stray:
        raise PreconditionError(f"transition {stray[0]} does not depart from {v}")
    transitions = set(entries)
    seen = {v}
    todo = [t.tgt for t in entries if t.tgt != v]
    while todo:
        w = todo.pop()
        if w in seen:
            continue
        seen.add(w)
        for t in c.out(w):
            transitions.add(t)
            if t.tgt != v and t.tgt not in seen:
                todo.append(t.tgt)
    tick = c.tick if c.tick in seen else None
    return Chart(start=v, transitions=transitions, tick=tick, vertices=seen, captions=c.captions)


def sccs(c):
    """Strongly connected components, ordered by least member"""
    components = (frozenset(comp) for comp in nx.strongly_connected_components(erase(c).graph))
    return sorted(components, key=min)


def scc_index(c):
    """Map vertex -> index of its component in sccs(c)"""
    return {v: i for i, comp in enumerate(sccs(c)) for v in comp}


# Files

def load_chart(text):
    """Read a chart file; returns a LabeledChart when transitions carry levels"""
    start = tick = None
    found = {}
    labeled = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        words = line.split()
        directive, args = words[0], words[1:]
        if directive == 'start':
            if start is not None:
                raise ChartFormatError("start declared twice", lineno)
            start = _vertex_id(args, lineno, 'start')
        elif directive == 'tick':
            if tick is not None:
                raise ChartFormatError("tick declared twice", lineno)
            tick = _vertex_id(args, lineno, 'tick')
        elif directive == 'trans':
            if len(args) not in (3, 4):
                raise ChartFormatError("expected 'trans <src> <action> <tgt> [<level>]'", lineno)
            src = _int(args[0], lineno, 'source id')
            action = args[1]
            if not ACTION_RE.fullmatch(action):
                raise ChartFormatError(f"invalid action name {action!r}", lineno)
            tgt = _int(args[2], lineno, 'target id')
            has_level = len(args) == 4
            if labeled is None:
                labeled = has_level
            elif labeled != has_level:
                raise ChartFormatError("either every transition carries a level or none does", lineno)
            level = _int(args[3], lineno, 'level') if has_level else 0
            t = Transition(src, action, tgt)
            if t in found and found[t] != level:
                raise ChartFormatError(f"transition {t} declared with two levels", lineno)
            found[t] = level
        else:
            raise ChartFormatError(f"unknown directive {directive!r}", lineno)
    if start is None:
        raise ChartInvariantError("no start vertex declared")
    chart = Chart(start=start, transitions=list(found), tick=tick).check_connected()
    if labeled:
        return LabeledChart(chart, found)
    return chart


def _vertex_id(args, lineno, what):
    if len(args) != 1:
        raise ChartFormatError(f"expected '{what} <id>'", lineno)
    return _int(args[0], lineno, f"{what} id")


def _int(word, lineno, what):
    try:
        value = int(word)
    except ValueError:
        raise ChartFormatError(f"{what} must be a nonnegative integer, got {word!r}", lineno)
    if value < 0:
        raise ChartFormatError(f"{what} must be a nonnegative integer, got {word!r}", lineno)
    return value


def save_chart(c):
    """Chart file text; labeled charts get the level column"""
    chart = erase(c)
    lines = [f"start {chart.start}"]
    if chart.tick is not None:
        lines.append(f"tick {chart.tick}")
    for v in chart.proper_vertices:
        if v in chart.captions:
            lines.append(f"# {v}: {chart.captions[v]}")
    for t in chart.transitions:
        row = f"trans {t.src} {t.action} {t.tgt}"
        if isinstance(c, LabeledChart):
            row += f" {c.levels[t]}"
        lines.append(row)
    return '\n'.join(lines) + '\n'


def _gvquote(s):
    return '"{}"'.format(str(s).replace('"', r'\"'))


def graphviz(c, name='chart'):
    """Yield DOT lines; entries are bold with label 'a [k]'"""
    chart = erase(c)
    yield f"digraph {_gvquote(name)} {{\n"
    yield '  __start [shape=point];\n'
    for v in sorted(chart.vertices):
        if chart.is_tick(v):
            yield f'  {_gvquote(v)} [shape=doublecircle label="√"];\n'
        else:
            yield f'  {_gvquote(v)} [shape=circle label={_gvquote(f"v{v}")} tooltip={_gvquote(chart.caption(v))}];\n'
    yield f'  __start -> {_gvquote(chart.start)};\n'
    for t in chart.transitions:
        level = c.levels[t] if isinstance(c, LabeledChart) else 0
        if level:
            attrs = f'label={_gvquote(f"{t.action} [{level}]")} style=bold'
        else:
            attrs = f'label={_gvquote(t.action)}'
        yield f'  {_gvquote(t.src)} -> {_gvquote(t.tgt)} [{attrs}];\n'
    yield '}\n'


def to_dot(c, name='chart'):
    return ''.join(graphviz(c, name))
