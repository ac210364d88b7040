"""
Bisimulation between charts.

The largest bisimulation is computed by signature-based partition refinement
(Kanellakis-Smolka splitting) on the disjoint union of the two charts.
"""
import logging
from dataclasses import dataclass

from networkx.algorithms import isomorphism

from .chart import Chart, LabeledChart, Transition, erase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bisimulation:
    """A relation between the vertices of two charts"""
    pairs: frozenset

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)

    def image(self, v):
        return sorted(w for u, w in self.pairs if u == v)

    def converse(self):
        return Bisimulation(frozenset((w, v) for v, w in self.pairs))

    def as_map(self):
        """The relation as a dict; only meaningful when it is functional"""
        return {v: w for v, w in sorted(self.pairs)}


def refine(nodes, successors, is_tick):
    """
    Coarsest stable partition of nodes. successors(n) yields (action, node);
    ticks start in their own block. Returns node -> block number.
    """
    block = {n: (1 if is_tick(n) else 0) for n in nodes}
    count = len(set(block.values()))
    rounds = 0
    while True:
        rounds += 1
        signatures = {
            n: (block[n], frozenset((action, block[m]) for action, m in successors(n)))
            for n in nodes
        }
        numbering = {}
        for n in sorted(nodes, key=repr):
            numbering.setdefault(signatures[n], len(numbering))
        block = {n: numbering[signatures[n]] for n in nodes}
        if len(numbering) == count:
            break
        count = len(numbering)
    logger.debug("partition refinement: %d blocks after %d rounds", count, rounds)
    return block


def _union_blocks(c1, c2):
    nodes = [(1, v) for v in c1.vertices] + [(2, v) for v in c2.vertices]
    charts = {1: c1, 2: c2}

    def successors(node):
        side, v = node
        return ((t.action, (side, t.tgt)) for t in charts[side].out(v))

    def is_tick(node):
        side, v = node
        return charts[side].is_tick(v)

    return refine(nodes, successors, is_tick)


def largest_bisimulation(c1, c2):
    """The largest bisimulation between c1 and c2, or None when the start vertices are not bisimilar"""
    c1, c2 = erase(c1), erase(c2)
    block = _union_blocks(c1, c2)
    if block[(1, c1.start)] != block[(2, c2.start)]:
        return None
    pairs = frozenset(
        (v, w) for v in c1.vertices for w in c2.vertices if block[(1, v)] == block[(2, w)]
    )
    return Bisimulation(pairs)


def bisimilar(c1, c2):
    return largest_bisimulation(c1, c2) is not None


def verify_bisimulation(c1, c2, relation):
    """Check the start, forth, back and termination clauses"""
    c1, c2 = erase(c1), erase(c2)
    pairs = relation.pairs if isinstance(relation, Bisimulation) else frozenset(relation)
    if (c1.start, c2.start) not in pairs:
        return False
    for v, w in pairs:
        if v not in c1.vertices or w not in c2.vertices:
            return False
        if c1.is_tick(v) != c2.is_tick(w):
            return False
        for t in c1.out(v):
            if not any(u.action == t.action and (t.tgt, u.tgt) in pairs for u in c2.out(w)):
                return False
        for u in c2.out(w):
            if not any(t.action == u.action and (t.tgt, u.tgt) in pairs for t in c1.out(v)):
                return False
    return True


def is_functional(relation, c1, c2):
    """Every vertex of c1 is related to exactly one vertex of c2"""
    c1, c2 = erase(c1), erase(c2)
    pairs = relation.pairs if isinstance(relation, Bisimulation) else frozenset(relation)
    images = {v: set() for v in c1.vertices}
    for v, w in pairs:
        if v not in images or w not in c2.vertices:
            return False
        images[v].add(w)
    return all(len(targets) == 1 for targets in images.values())


def self_bisimilarity_classes(c):
    """Classes of mutually bisimilar vertices of one chart, each sorted, ordered by least member"""
    c = erase(c)
    block = refine(list(c.vertices), lambda v: ((t.action, t.tgt) for t in c.out(v)), c.is_tick)
    classes = {}
    for v in sorted(c.vertices):
        classes.setdefault(block[v], []).append(v)
    return sorted(classes.values(), key=lambda members: members[0])


def quotient_collapse(c):
    """Quotient by the largest self-bisimulation; each class is represented by its least vertex"""
    c = erase(c)
    representative = {}
    for members in self_bisimilarity_classes(c):
        for v in members:
            representative[v] = members[0]
    transitions = {
        Transition(representative[t.src], t.action, representative[t.tgt]) for t in c.transitions
    }
    quotient = Chart(
        start=representative[c.start],
        transitions=transitions,
        tick=None if c.tick is None else representative[c.tick],
        vertices=set(representative.values()),
        captions=c.captions,
    )
    return quotient, representative


def is_collapsed(c):
    return all(len(members) == 1 for members in self_bisimilarity_classes(c))


def isomorphic(c1, c2):
    """
    Start-, tick- and action-preserving isomorphism from c1 to c2 as a dict,
    or None. Levels must match too when both arguments are labeled.
    """
    labeled = isinstance(c1, LabeledChart) and isinstance(c2, LabeledChart)
    ch1, ch2 = erase(c1), erase(c2)
    if len(ch1.vertices) != len(ch2.vertices) or len(ch1.transitions) != len(ch2.transitions):
        return None
    g1 = ch1.multigraph(c1.levels if labeled else None)
    g2 = ch2.multigraph(c2.levels if labeled else None)
    node_match = isomorphism.categorical_node_match(['is_start', 'is_tick'], [False, False])
    if labeled:
        edge_match = isomorphism.categorical_multiedge_match(['action', 'level'], [None, None])
    else:
        edge_match = isomorphism.categorical_multiedge_match('action', None)
    matcher = isomorphism.MultiDiGraphMatcher(g1, g2, node_match=node_match, edge_match=edge_match)
    if not matcher.is_isomorphic():
        return None
    return dict(matcher.mapping)
