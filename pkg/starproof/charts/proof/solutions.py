"""
Provable solutions of charts and the certificates of the completeness pipeline.

A provable solution assigns an expression to every vertex such that each value
is BBP-provably equal to the sum of its terminating actions plus, for every
other transition v -a-> w, the summand a.value(w).
"""
import logging
from typing import NamedTuple

from ..bisim import bisimilar, is_functional, largest_bisimulation, verify_bisimulation
from ..chart import erase
from ..collapse import collapse_llee
from ..exceptions import PreconditionError, ProofConstructionError
from ..expr import Act, Prod, Sum, big_sum, format_expr
from ..extract import ExtractionTable
from ..interp import interpret, interpret_labeled
from .builder import ProofBuilder
from .certificate import Equation, ProvableSolution, check_certificate
from .tactics import derive_ft, distribute, map_summands, prove_aci

logger = logging.getLogger(__name__)


class SolutionCheck(NamedTuple):
    ok: bool
    failures: tuple  # (vertex, reason)


def solution_shape(chart, values, v):
    """(sum of a for v -a-> √) + (sum of a.values[w] for v -a-> w), canonical transition order"""
    done = [Act(t.action) for t in chart.out(v) if chart.is_tick(t.tgt)]
    onward = [Prod(Act(t.action), values[t.tgt]) for t in chart.out(v) if not chart.is_tick(t.tgt)]
    return Sum(big_sum(done), big_sum(onward))


def check_solution(sol):
    """Every certificate checks and proves the solution condition at its vertex"""
    chart = sol.chart
    failures = []
    for v in sorted(chart.proper_vertices):
        cert = sol.certificates.get(v)
        if cert is None:
            failures.append((v, "no certificate"))
            continue
        result = check_certificate(cert)
        if not result.ok:
            failures.append((v, f"step {result.index}: {result.reason}"))
        elif cert.goal != Equation(sol.values[v], solution_shape(chart, sol.values, v)):
            failures.append((v, "goal is not the solution condition"))
    return SolutionCheck(not failures, tuple(failures))


def identity_solution(e):
    """Every vertex of C(e) carries its own expression"""
    interpretation = interpret(e)
    chart = interpretation.chart
    values = {vid: x for x, vid in interpretation.ids.items()}
    certificates = {}
    for v in sorted(values):
        b = ProofBuilder()
        expanded = derive_ft(b, values[v])
        d = b.trans(expanded, prove_aci(b, expanded.rhs, solution_shape(chart, values, v)))
        certificates[v] = b.certificate(d)
    return ProvableSolution(chart, values, certificates)


def transfer_solution(sol, phi, c1):
    """Pull a provable solution of sol.chart back along a functional bisimulation phi from c1"""
    c1 = erase(c1)
    mapping = phi.as_map() if hasattr(phi, 'as_map') else dict(phi)
    pairs = set(mapping.items())
    if not is_functional(pairs, c1, sol.chart) or not verify_bisimulation(c1, sol.chart, pairs):
        raise PreconditionError("not a functional bisimulation onto the solved chart")
    values = {v: sol.values[mapping[v]] for v in c1.proper_vertices}
    certificates = {}
    for v in sorted(values):
        cert = sol.certificates[mapping[v]]
        shape = solution_shape(c1, values, v)
        if cert.goal.rhs == shape:
            certificates[v] = cert
            continue
        b = ProofBuilder()
        given = b.adopt(cert)
        certificates[v] = b.certificate(b.trans(given, prove_aci(b, given.rhs, shape)))
    return ProvableSolution(c1, values, certificates)


class _ExtractionProof:
    """Certificates that the extracted values solve the chart, without RSP"""

    def __init__(self, table, builder):
        self.table = table
        self.lc = table.lc
        self.b = builder
        self._lemma = {}
        self._condition = {}

    def lemma(self, w, v):
        """s(w) = t(w|v).s(v)"""
        key = (w, v)
        if key in self._lemma:
            return self._lemma[key]
        b = self.b
        t = self.table.relative(w, v)
        s_v = self.table.solution(v)
        s_w = self.table.solution(w)
        assoc = b.axiom('BKS2', x=t.body, y=t.exit, z=s_v)
        spread = distribute(b, assoc.rhs.exit)
        body = self.lc.body_out(w)
        rewrites = [b.refl for u in body if u.tgt == v]
        rewrites += [self._unfold_lemma(u.tgt, v) for u in body if u.tgt != v]
        mapped = map_summands(b, spread.rhs, rewrites or [b.refl])
        exit_eq = b.chain(spread, mapped, prove_aci(b, mapped.rhs, s_w.exit))
        folded = b.trans(assoc, b.cong(assoc.rhs, 'R', exit_eq))
        result = b.symm(folded)
        self._lemma[key] = result
        return result

    def _unfold_lemma(self, u, v):
        """Rewrite a.(t(u|v).s(v)) to a.s(u)"""
        return lambda leaf: self.b.cong(leaf, 'R', self.b.symm(self.lemma(u, v)))

    def condition(self, w):
        """s(w) = its solution shape"""
        if w in self._condition:
            return self._condition[w]
        b = self.b
        s_w = self.table.solution(w)
        unfold = b.symm(b.axiom('BKS1', x=s_w.body, y=s_w.exit))
        spread = b.trans(unfold, b.cong(unfold.rhs, 'L', distribute(b, unfold.rhs.left)))
        entries = self.lc.entry_out(w)
        rewrites = [b.refl for t in entries if t.tgt == w]
        rewrites += [self._unfold_lemma(t.tgt, w) for t in entries if t.tgt != w]
        loop = map_summands(b, spread.rhs.left, rewrites or [b.refl])
        mapped = b.trans(spread, b.cong(spread.rhs, 'L', loop))
        values = self.table.values()
        result = b.trans(mapped, prove_aci(b, mapped.rhs, solution_shape(self.lc.chart, values, w)))
        self._condition[w] = result
        return result


def extraction_solution(lc):
    """The extracted values with RSP-free certificates of the solution condition"""
    table = ExtractionTable(lc)
    proof = _ExtractionProof(table, ProofBuilder())
    values = table.values()
    certificates = {w: proof.b.certificate(proof.condition(w)) for w in values}
    assert all(cert.count('RSP') == 0 for cert in certificates.values())
    return ProvableSolution(lc.chart, values, certificates)


class _Unifier:
    """Derivations sol(w) = s(w) for a provable solution sol of a witness's chart"""

    def __init__(self, table, sol, builder):
        self.table = table
        self.lc = table.lc
        self.chart = table.chart
        self.sol = sol
        self.b = builder
        self._given = {}
        self._relative = {}
        self._absolute = {}

    def given(self, w):
        """sol(w) = shape of sol at w, replayed from sol's certificate"""
        if w not in self._given:
            self._given[w] = self.b.adopt(self.sol.certificates[w])
        return self._given[w]

    def _rewrites(self, w, body_rewrite):
        b = self.b
        chart = self.chart
        out = chart.out(w)
        rewrites = [b.refl for t in out if chart.is_tick(t.tgt)] or [b.refl]
        onward = [t for t in out if not chart.is_tick(t.tgt)]
        for t in onward:
            if self.lc.is_entry(t):
                rewrites.append(b.refl if t.tgt == w else self._descend(t.tgt, w))
            else:
                rewrites.append(body_rewrite(t))
        if not onward:
            rewrites.append(b.refl)
        return rewrites

    def _descend(self, u, v):
        """Rewrite a.sol(u) to a.(t(u|v).sol(v))"""
        return lambda leaf: self.b.cong(leaf, 'R', self.relative(u, v))

    def _absolute_rewrite(self, y):
        return lambda leaf: self.b.cong(leaf, 'R', self.absolute(y))

    def relative(self, w, v):
        """sol(w) = t(w|v).sol(v)"""
        key = (w, v)
        if key in self._relative:
            return self._relative[key]
        b = self.b
        t = self.table.relative(w, v)
        sol_w, sol_v = self.sol.values[w], self.sol.values[v]
        given = self.given(w)

        def body_rewrite(step):
            return b.refl if step.tgt == v else self._descend(step.tgt, v)

        mapped = map_summands(b, given.rhs, self._rewrites(w, body_rewrite))
        loop = distribute(b, Prod(t.body, sol_w))
        leave = distribute(b, Prod(t.exit, sol_v))
        target = Sum(loop.rhs, leave.rhs)
        regrouped = b.trans(b.cong(target, 'L', b.symm(loop)),
                            b.cong(Sum(loop.lhs, leave.rhs), 'R', b.symm(leave)))
        unfolded = b.chain(given, mapped, prove_aci(b, mapped.rhs, target), regrouped)
        result = b.trans(b.rsp(unfolded), b.symm(b.axiom('BKS2', x=t.body, y=t.exit, z=sol_v)))
        self._relative[key] = result
        return result

    def absolute(self, w):
        """sol(w) = s(w)"""
        if w in self._absolute:
            return self._absolute[w]
        b = self.b
        s_w = self.table.solution(w)
        sol_w = self.sol.values[w]
        given = self.given(w)

        def body_rewrite(step):
            return self._absolute_rewrite(step.tgt)

        mapped = map_summands(b, given.rhs, self._rewrites(w, body_rewrite))
        loop = distribute(b, Prod(s_w.body, sol_w))
        target = Sum(loop.rhs, s_w.exit)
        unfolded = b.chain(given, mapped, prove_aci(b, mapped.rhs, target), b.cong(target, 'L', b.symm(loop)))
        result = b.rsp(unfolded)
        self._absolute[w] = result
        return result


def _require_solution(lc, sol):
    if erase(sol.chart) != lc.chart:
        raise PreconditionError("solution belongs to a different chart")
    report = check_solution(sol)
    if not report.ok:
        vertex, reason = report.failures[0]
        raise ProofConstructionError(f"solution certificate at vertex {vertex} fails: {reason}")


def unify_solutions(lc, sol):
    """For each non-sink vertex w, a certificate of sol(w) = s(w)"""
    table = ExtractionTable(lc)
    _require_solution(lc, sol)
    unifier = _Unifier(table, sol, ProofBuilder())
    return {w: unifier.b.certificate(unifier.absolute(w)) for w in sorted(lc.chart.proper_vertices)}


def prove_equal(e1, e2):
    """
    A checked certificate of e1 = e2 when C(e1) and C(e2) are bisimilar, else
    None. Both sides are proved equal to the extraction of the collapsed
    witness of e1.
    """
    if not bisimilar(interpret(e1).chart, interpret(e2).chart):
        return None
    b = ProofBuilder()
    if e1 == e2:
        return b.certificate(b.refl(e1))
    logger.info("proving %s = %s", format_expr(e1), format_expr(e2))
    collapsed = collapse_llee(interpret_labeled(e1)).witness
    extracted = extraction_solution(collapsed)
    logger.debug("collapsed witness has %d vertices", len(collapsed.chart.vertices))
    sides = []
    for e in (e1, e2):
        lc = interpret_labeled(e)
        phi = largest_bisimulation(lc.chart, collapsed.chart)
        table = ExtractionTable(lc)
        via_values = _Unifier(table, identity_solution(e), b).absolute(lc.start)
        moved = transfer_solution(extracted, phi, lc.chart)
        via_moved = _Unifier(table, moved, b).absolute(lc.start)
        sides.append(b.trans(via_values, b.symm(via_moved)))
    cert = b.certificate(b.trans(sides[0], b.symm(sides[1])))
    result = check_certificate(cert)
    if not result.ok:
        raise ProofConstructionError(f"certificate fails at step {result.index}: {result.reason}", result)
    logger.info("proved equality with %d steps, %d by RSP", len(cert), cert.count('RSP'))
    return cert
