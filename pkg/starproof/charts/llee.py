"""
Loop charts, loop elimination (LEE) and layered LEE-witnesses.

A labeled chart marks each transition as body (level 0) or as a loop entry
with level n >= 1. It is a LLEE-witness when body steps from the start
cannot cycle, every entry identifier <v, n> generates a loop chart, and no
vertex inside that loop has an entry of level >= n.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx

from .chart import Chart, LabeledChart, erase, garbage_collect, generated_subchart, scc_index, transition_key
from .conf import get_setting
from .exceptions import PreconditionError, SubsetSearchLimitError, WitnessError

logger = logging.getLogger(__name__)

STRATEGIES = ('maximal', 'single', 'guided')
ORDERS = ('forward', 'reverse')


class LoopCheck(NamedTuple):
    ok: bool
    failed: tuple


def is_loop_chart(c):
    """Which of L1 (an infinite path), L2 (every cycle passes the start), L3 (no √) fail"""
    chart = erase(c)
    reach = chart.reachable_from(chart.start)
    graph = chart.graph.subgraph(reach)
    failed = []
    if nx.is_directed_acyclic_graph(graph):
        failed.append('L1')
    if not nx.is_directed_acyclic_graph(graph.subgraph(reach - {chart.start})):
        failed.append('L2')
    if chart.tick is not None and chart.tick in reach:
        failed.append('L3')
    return LoopCheck(not failed, tuple(failed))


def body_labeling(c):
    """The labeling that marks every transition as body"""
    chart = erase(c)
    return LabeledChart(chart, {t: 0 for t in chart.transitions})


# Loop elimination

class EliminationStep(NamedTuple):
    step: int
    vertex: int
    entries: tuple


@dataclass(frozen=True)
class EliminationResult:
    lee: bool
    witness: LabeledChart
    trace: tuple
    diagnosis: str = ''


def _entry_sets(chart, v, strategy, order, limit):
    outs = list(chart.out(v))
    if order == 'reverse':
        outs.reverse()
    if strategy == 'single':
        return [(t,) for t in outs]
    if 2 ** len(outs) - 1 > limit:
        raise SubsetSearchLimitError(
            f"vertex {v} has {len(outs)} outgoing transitions; more than {limit} entry sets to try"
        )
    subsets = []
    for k in range(len(outs), 0, -1):
        subsets.extend(itertools.combinations(outs, k))
    return subsets


def _loop_candidates(chart, strategy, order, limit, exhaustive=False):
    """(v, U) pairs whose generated subchart is a loop chart, in search order"""
    vertices = chart.proper_vertices
    if order == 'reverse':
        vertices = list(reversed(vertices))
    for v in vertices:
        for entries in _entry_sets(chart, v, strategy, order, limit):
            if is_loop_chart(generated_subchart(chart, v, entries)).ok:
                yield v, tuple(sorted(entries, key=transition_key))
                if strategy == 'maximal' and not exhaustive:
                    break


def _eliminate(chart, entries):
    remaining = [t for t in chart.transitions if t not in set(entries)]
    return garbage_collect(chart.replace(transitions=remaining))


def _record(original, steps):
    levels = {t: 0 for t in original.transitions}
    for step in steps:
        for t in step.entries:
            levels[t] = step.step
    return LabeledChart(original, levels)


def _state_key(chart):
    return (chart.start, chart.transitions)


def loop_elimination(c, strategy='maximal', order='forward', guide=None):
    """
    Repeatedly remove the entries of a loop subchart and garbage-collect.
    lee holds when the residue has no infinite path; the witness records the
    step number on every removed entry and 0 everywhere else.
    """
    if strategy not in STRATEGIES:
        raise PreconditionError(f"unknown elimination strategy {strategy!r}")
    if order not in ORDERS:
        raise PreconditionError(f"unknown candidate order {order!r}")
    original = erase(c)
    if strategy == 'guided':
        if guide is None:
            if not isinstance(c, LabeledChart):
                raise PreconditionError("guided elimination needs a labeled chart to replay")
            guide = c
        return _guided_elimination(original, guide)
    limit = get_setting('SUBSET_SEARCH_LIMIT')
    failed = set()

    def search(chart, steps):
        if nx.is_directed_acyclic_graph(chart.graph):
            return steps
        key = _state_key(chart)
        if key in failed:
            return None
        for v, entries in _loop_candidates(chart, strategy, order, limit):
            step = EliminationStep(len(steps) + 1, v, entries)
            logger.debug("elimination step %d: vertex %d, entries %s", step.step, v, entries)
            found = search(_eliminate(chart, entries), steps + [step])
            if found is not None:
                return found
        failed.add(key)
        return None

    steps = search(original, [])
    if steps is None:
        return _stuck_result(original, strategy, order, limit)
    return EliminationResult(True, _record(original, steps), tuple(steps))


def _stuck_result(original, strategy, order, limit):
    # Replay greedily so the reported trace is a real maximal run.
    chart, steps = original, []
    while True:
        candidate = next(iter(_loop_candidates(chart, strategy, order, limit)), None)
        if candidate is None:
            break
        v, entries = candidate
        steps.append(EliminationStep(len(steps) + 1, v, entries))
        chart = _eliminate(chart, entries)
    diagnosis = "no loop subchart" if not steps else f"no loop subchart after {len(steps)} eliminations"
    return EliminationResult(False, _record(original, steps), tuple(steps), diagnosis)


def _guided_elimination(original, guide):
    chart, steps = original, []
    pending = {t: lvl for t, lvl in guide.levels.items() if lvl > 0 and t in set(original.transitions)}
    while True:
        live = set(chart.transitions)
        ids = sorted({(lvl, t.src) for t, lvl in pending.items() if t in live})
        if not ids:
            break
        alpha, v = ids[0]
        entries = tuple(sorted((t for t, lvl in pending.items() if lvl == alpha and t.src == v and t in live),
                               key=transition_key))
        if not is_loop_chart(generated_subchart(chart, v, entries)).ok:
            diagnosis = f"entry <{v},{alpha}> does not generate a loop subchart"
            return EliminationResult(False, _record(original, steps), tuple(steps), diagnosis)
        steps.append(EliminationStep(len(steps) + 1, v, entries))
        chart = _eliminate(chart, entries)
    if nx.is_directed_acyclic_graph(chart.graph):
        return EliminationResult(True, _record(original, steps), tuple(steps))
    diagnosis = "no loop subchart" if not steps else f"no loop subchart after {len(steps)} eliminations"
    return EliminationResult(False, _record(original, steps), tuple(steps), diagnosis)


def elimination_runs(c, limit=None):
    """Enumerate complete elimination runs (every loop subchart choice), up to limit runs"""
    original = erase(c)
    limit = get_setting('ELIMINATION_RUN_LIMIT') if limit is None else limit
    subset_limit = get_setting('SUBSET_SEARCH_LIMIT')
    produced = 0
    stack = [(original, [])]
    while stack and produced < limit:
        chart, steps = stack.pop()
        candidates = list(_loop_candidates(chart, 'maximal', 'forward', subset_limit, exhaustive=True))
        if not candidates:
            produced += 1
            lee = nx.is_directed_acyclic_graph(chart.graph)
            diagnosis = '' if lee else ("no loop subchart" if not steps else
                                        f"no loop subchart after {len(steps)} eliminations")
            yield EliminationResult(lee, _record(original, steps), tuple(steps), diagnosis)
            continue
        for v, entries in reversed(candidates):
            step = EliminationStep(len(steps) + 1, v, entries)
            stack.append((_eliminate(chart, entries), steps + [step]))


# Witnesses

class Violation(NamedTuple):
    kind: str
    site: str


@dataclass(frozen=True)
class WitnessReport:
    ok: bool
    violations: tuple


def loop_subchart(lc, v, alpha):
    """
    The chart generated by the alpha-entries at v, continuing with body
    transitions only and halting when v is reached again.
    """
    entries = lc.entries_at(v, alpha)
    transitions = set(entries)
    seen = {v}
    todo = [t.tgt for t in entries if t.tgt != v]
    while todo:
        w = todo.pop()
        if w in seen:
            continue
        seen.add(w)
        for t in lc.body_out(w):
            transitions.add(t)
            if t.tgt != v and t.tgt not in seen:
                todo.append(t.tgt)
    chart = lc.chart
    return Chart(start=v, transitions=transitions, tick=chart.tick if chart.tick in seen else None,
                 vertices=seen, captions=chart.captions)


def check_llee_witness(lc):
    """Check W1, W2a (L1-L3 for every loop subchart) and W2b (layeredness)"""
    violations = []
    body = lc.body_graph
    from_start = nx.descendants(body, lc.start) | {lc.start}
    try:
        cycle = nx.find_cycle(body.subgraph(from_start))
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        path = '->'.join(str(edge[0]) for edge in cycle) + f"->{cycle[-1][1]}"
        violations.append(Violation('W1', path))
    for v, alpha in lc.entry_ids:
        sub = loop_subchart(lc, v, alpha)
        for condition in is_loop_chart(sub).failed:
            violations.append(Violation(f"W2a-{condition}", f"<{v},{alpha}>"))
        for w in sorted(sub.vertices - {v}):
            if sub.is_tick(w):
                continue
            higher = [lvl for lvl in lc.entry_levels(w) if lvl >= alpha]
            if higher:
                violations.append(Violation('W2b', f"<{v},{alpha}>@{w}[{max(higher)}]"))
    return WitnessReport(not violations, tuple(violations))


def require_witness(lc):
    report = check_llee_witness(lc)
    if not report.ok:
        raise WitnessError(report)
    return report


# Relations and norms

@dataclass(frozen=True)
class Relations:
    body_step: frozenset
    descends: frozenset  # (v, w, alpha)
    loops_back: frozenset  # (w, v): w loops back to v
    directly_loops_back: frozenset

    @property
    def descends_pairs(self):
        return frozenset((v, w) for v, w, _ in self.descends)

    def descends_to(self, w):
        """Some vertex descends in loop to w"""
        return any(target == w for _, target, _ in self.descends)

    def loops_back_targets(self, w):
        return sorted(v for u, v in self.loops_back if u == w)

    def loops_back_plus(self):
        """Transitive closure of loops-back-to as a set of pairs"""
        closure = nx.transitive_closure(_pair_graph(self.loops_back), reflexive=False)
        return frozenset(closure.edges())

    def loops_back_star(self, vertices):
        return self.loops_back_plus() | {(v, v) for v in vertices}


def _pair_graph(pairs):
    g = nx.DiGraph()
    g.add_edges_from(pairs)
    return g


def compute_relations(lc):
    """Relations without the witness check; callers guarantee validity"""
    body_step = frozenset((t.src, t.tgt) for t in lc.transitions if lc.level(t) == 0)
    descends = set()
    for v, alpha in lc.entry_ids:
        for w in loop_subchart(lc, v, alpha).vertices - {v}:
            descends.add((v, w, alpha))
    body = lc.body_graph
    loops_back = frozenset(
        (w, v) for v, w, _ in descends if w != v and nx.has_path(body, w, v)
    )
    successors = {}
    for w, v in loops_back:
        successors.setdefault(w, set()).add(v)
    direct = frozenset(
        (w, v) for w, v in loops_back
        if all(u == v or (v, u) in loops_back for u in successors[w])
    )
    return Relations(body_step, frozenset(descends), loops_back, direct)


def relations(lc):
    """Body step, descends-in-loop-to (with level), loops-back-to and directly-loops-back-to"""
    require_witness(lc)
    return compute_relations(lc)


@dataclass(frozen=True)
class Norms:
    enl: dict
    bosn: dict
    lbsn: dict


def _longest_paths(graph):
    lengths = {}
    for v in reversed(list(nx.topological_sort(graph))):
        lengths[v] = max((lengths[w] + 1 for w in graph.successors(v)), default=0)
    return lengths


def compute_norms(lc):
    chart = lc.chart
    enl = {v: max(lc.entry_levels(v), default=0) for v in chart.vertices}
    bosn = _longest_paths(lc.body_graph)
    component = scc_index(chart)
    lb = nx.DiGraph()
    lb.add_nodes_from(chart.vertices)
    lb.add_edges_from((t.src, t.tgt) for t in chart.transitions
                      if lc.level(t) == 0 and component[t.src] == component[t.tgt])
    lbsn = _longest_paths(lb)
    return Norms(enl, bosn, lbsn)


def norms(lc):
    """Entry step level, body step norm and loops-back step norm per vertex"""
    require_witness(lc)
    return compute_norms(lc)
