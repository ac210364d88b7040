"""
Star expressions extracted from LLEE-witnesses.

For v descending in loop to w, the relative extraction t(w|v) iterates the
loop entries at w and exits along body steps back towards v. The extraction
s(w) iterates the same entries and exits along body steps towards √.
"""
import logging

from .expr import ZERO, Act, Prod, Star, Sum, big_sum
from .exceptions import PreconditionError
from .llee import compute_norms, compute_relations, require_witness
from .proof.builder import ProofBuilder
from .proof.certificate import Certificate, Equation

logger = logging.getLogger(__name__)


class ExtractionTable:
    """Memoized t(w|v) and s(w) for one witness"""

    def __init__(self, lc, check=True):
        if check:
            require_witness(lc)
        self.lc = lc
        self.chart = lc.chart
        self.norms = compute_norms(lc)
        self.descends = compute_relations(lc).descends_pairs
        self.rel = {}
        self.abs = {}

    def _measure(self, w, v):
        return (self.norms.enl[v], self.norms.bosn[w])

    def loop_part(self, w):
        """Summands for the entries at w: a for a self-entry, b.t(u|w) otherwise"""
        own = []
        others = []
        for t in self.lc.entry_out(w):
            if t.tgt == w:
                own.append(Act(t.action))
            else:
                others.append(Prod(Act(t.action), self.relative(t.tgt, w)))
        return big_sum(own + others)

    def relative(self, w, v):
        key = (w, v)
        if key in self.rel:
            return self.rel[key]
        if (v, w) not in self.descends:
            raise PreconditionError(f"vertex {v} does not descend in loop to {w}")
        back = []
        onward = []
        for t in self.lc.body_out(w):
            if t.tgt == v:
                back.append(Act(t.action))
            elif self.chart.is_tick(t.tgt):
                raise PreconditionError(f"loop of {v} reaches the sink from {w}")
            else:
                assert self._measure(t.tgt, v) < self._measure(w, v), (t.tgt, w, v)
                onward.append(Prod(Act(t.action), self.relative(t.tgt, v)))
        for t in self.lc.entry_out(w):
            if t.tgt != w:
                assert self.norms.enl[w] < self.norms.enl[v], (t.tgt, w, v)
        result = Star(self.loop_part(w), big_sum(back + onward))
        self.rel[key] = result
        return result

    def solution(self, w):
        if w in self.abs:
            return self.abs[w]
        if w not in self.chart.vertices:
            raise PreconditionError(f"vertex {w} is not in the chart")
        if self.chart.is_tick(w):
            raise PreconditionError("the sink has no extracted value")
        done = []
        onward = []
        for t in self.lc.body_out(w):
            if self.chart.is_tick(t.tgt):
                done.append(Act(t.action))
            else:
                assert self.norms.bosn[t.tgt] < self.norms.bosn[w], (t.tgt, w)
                onward.append(Prod(Act(t.action), self.solution(t.tgt)))
        result = Star(self.loop_part(w), big_sum(done + onward))
        self.abs[w] = result
        return result

    def values(self):
        """s at every non-sink vertex"""
        values = {w: self.solution(w) for w in sorted(self.chart.proper_vertices)}
        logger.debug("extracted %d values, %d relative", len(values), len(self.rel))
        return values


def extract_relative(lc, w, v):
    """t(w|v) for a valid witness with v descending in loop to w"""
    return ExtractionTable(lc).relative(w, v)


def extract_solution(lc, w):
    """s(w) for a valid witness and a non-sink vertex w"""
    return ExtractionTable(lc).solution(w)


# Simplification

def _zero_star(builder, e):
    """0 * x = x by BKS1, B7, B1 and B6"""
    x = e.exit
    unfold = builder.symm(builder.axiom('BKS1', x=ZERO, y=x))
    drop = builder.cong(unfold.rhs, 'L', builder.axiom('B7', x=e))
    swap = builder.axiom('B1', x=ZERO, y=x)
    return builder.chain(unfold, drop, swap, builder.axiom('B6', x=x))


def _root_rule(builder, e):
    """One rewrite at the root, or None"""
    if isinstance(e, Star) and e.body == ZERO:
        return _zero_star(builder, e)
    if isinstance(e, Sum) and e.right == ZERO:
        return builder.axiom('B6', x=e.left)
    if isinstance(e, Sum) and e.left == ZERO:
        return builder.trans(builder.axiom('B1', x=ZERO, y=e.right), builder.axiom('B6', x=e.right))
    if isinstance(e, Prod) and e.left == ZERO:
        return builder.axiom('B7', x=e.right)
    return None


def _simplify(builder, e):
    derivation = builder.refl(e)
    for path, child in zip('LR', e.children()):
        inner = _simplify(builder, child)
        derivation = builder.trans(derivation, builder.cong(derivation.rhs, path, inner))
    rewrite = _root_rule(builder, derivation.rhs)
    if rewrite is not None:
        derivation = builder.trans(derivation, rewrite)
    return derivation


def simplify(e):
    """
    Rewrite innermost-first with 0*x -> x, x+0 -> x, 0+x -> x and 0.x -> 0.
    Returns the result with a certificate for e = result; the certificate is
    empty when nothing changed.
    """
    builder = ProofBuilder()
    derivation = _simplify(builder, e)
    if derivation.rhs == e:
        return e, Certificate((), Equation(e, e))
    return derivation.rhs, builder.certificate(derivation)
