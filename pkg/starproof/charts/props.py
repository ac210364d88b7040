"""
Random star expressions and the property suites run over them.

Suites take one expression per case and fail with AssertionError (or any
library error) on a counterexample. run_suite drives them through hypothesis
so failures are shrunk structurally before being reported.
"""
import logging
import random
import string
from dataclasses import dataclass, replace
from typing import Optional

import hypothesis
import networkx as nx
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from .bisim import bisimilar, is_collapsed, isomorphic, largest_bisimulation, quotient_collapse
from .chart import erase, scc_index
from .collapse import collapse_llee
from .conf import get_setting
from .expr import ZERO, Act, Prod, Star, Sum
from .extract import ExtractionTable
from .interp import interpret, interpret_labeled, is_normed, normed_structural
from .llee import check_llee_witness, compute_norms, compute_relations
from .proof.certificate import Certificate, check_certificate, replace_at, subterm
from .proof.solutions import identity_solution, prove_equal
from .serializers import ExprGenSerializer

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExprGen:
    seed: int
    max_size: int
    alphabet_size: int

    @classmethod
    def from_data(cls, data):
        """Validated construction; raises serializers.ValidationError"""
        serializer = ExprGenSerializer(data=data)
        serializer.is_valid(raise_exception=True)
        return cls(**serializer.validated_data)

    @property
    def alphabet(self):
        return string.ascii_lowercase[:self.alphabet_size]


def _random_expr(rng, budget, alphabet):
    if budget < 3:
        if rng.random() < 0.2:
            return ZERO
        return Act(rng.choice(alphabet))
    if rng.random() < 0.15:
        return ZERO if rng.random() < 0.3 else Act(rng.choice(alphabet))
    kind = rng.choice((Sum, Prod, Star, Star))
    left = rng.randint(1, budget - 2)
    right = rng.randint(1, budget - 1 - left)
    return kind(_random_expr(rng, left, alphabet), _random_expr(rng, right, alphabet))


def gen_expr(cfg):
    """Endless deterministic stream of expressions of size at most cfg.max_size"""
    ExprGen.from_data({'seed': cfg.seed, 'max_size': cfg.max_size, 'alphabet_size': cfg.alphabet_size})
    rng = random.Random(cfg.seed)
    while True:
        yield _random_expr(rng, rng.randint(1, cfg.max_size), cfg.alphabet)


def star_exprs(max_size=None, alphabet_size=None):
    """Hypothesis strategy for expressions with at most max_size nodes"""
    max_size = max_size or get_setting('MAX_SIZE')
    alphabet_size = alphabet_size or get_setting('ALPHABET_SIZE')
    leaves = st.one_of(
        st.just(ZERO),
        st.sampled_from(string.ascii_lowercase[:alphabet_size]).map(Act),
    )

    def extend(children):
        return st.one_of(
            st.builds(Sum, children, children),
            st.builds(Prod, children, children),
            st.builds(Star, children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max(1, (max_size + 1) // 2))


def redundant_exprs(max_size=None, alphabet_size=None):
    """
    Mostly expressions whose charts have distinct but bisimilar vertices:
    x * (x * y), x.(x * y) + y and x * (y + x * y), so collapsing has
    work to do. Sizes stay within max_size.
    """
    max_size = max_size or get_setting('MAX_SIZE')
    part = (max_size - 3) // 3
    plain = star_exprs(max_size, alphabet_size)
    if part < 1:
        return plain
    x = star_exprs(part, alphabet_size)
    y = star_exprs(part, alphabet_size)
    return st.one_of(
        st.builds(lambda x, y: Star(x, Star(x, y)), x, y),
        st.builds(lambda x, y: Sum(Prod(x, Star(x, y)), y), x, y),
        st.builds(lambda x, y: Star(x, Sum(y, Star(x, y))), x, y),
        plain,
    )


# Oracles

def relation_violations(lc):
    """Names of the loop relation properties that fail on a witness"""
    chart = lc.chart
    rel = compute_relations(lc)
    vertices = sorted(chart.vertices)
    component = scc_index(chart)
    lb_star = rel.loops_back_star(vertices)
    failed = []

    reach = chart.reachable_from(chart.start)
    if not nx.is_directed_acyclic_graph(lc.body_graph.subgraph(reach)):
        failed.append('body-acyclic')

    descends = nx.DiGraph()
    descends.add_nodes_from(vertices)
    descends.add_edges_from(rel.descends_pairs)
    descends_star = set(nx.transitive_closure(descends, reflexive=True).edges())
    for u, v in descends_star:
        if component[u] == component[v] and (v, u) not in lb_star:
            failed.append('descends-loops-back')
            break

    has_loops_back = {w for w, _ in rel.loops_back}
    for v, w in rel.descends_pairs:
        if w not in has_loops_back and chart.tick is not None and chart.reaches(w, chart.tick):
            failed.append('unlooped-not-normed')
            break

    for u in vertices:
        for v in vertices:
            common = any((u, w) in lb_star and (v, w) in lb_star for w in vertices)
            if common != (component[u] == component[v]):
                failed.append('component-upper-bound')
                break
        else:
            continue
        break

    if any((u, v) in lb_star and (v, u) in lb_star for u in vertices for v in vertices if u != v):
        failed.append('partial-order')

    for u in vertices:
        for v in vertices:
            bounds = [w for w in vertices if (u, w) in lb_star and (v, w) in lb_star]
            if bounds and not any(all((b, c) in lb_star for c in bounds) for b in bounds):
                failed.append('least-upper-bound')
                break
        else:
            continue
        break

    for w in vertices:
        targets = rel.loops_back_targets(w)
        if any(a != b and (a, b) not in rel.loops_back and (b, a) not in rel.loops_back
               for a in targets for b in targets):
            failed.append('successors-ordered')
            break

    subordinates = {}
    for w, u in rel.directly_loops_back:
        subordinates.setdefault(u, []).append(w)
    for u, members in subordinates.items():
        if any(a != b and any((w, a) in lb_star and (w, b) in lb_star for w in vertices)
               for a in members for b in members):
            failed.append('direct-subordinates')
            break
    return failed


def norm_violations(lc):
    """Body steps lower the body step norm; descending in loop lowers the entry step level"""
    n = compute_norms(lc)
    failed = []
    if any(n.bosn[t.src] <= n.bosn[t.tgt] for t in lc.transitions if not lc.is_entry(t)):
        failed.append('body-norm')
    if any(n.enl[v] <= n.enl[w] for v, w in compute_relations(lc).descends_pairs):
        failed.append('entry-level')
    return failed


FRESH = Act('zz')


def _leftmost_path(e):
    path = ''
    while e.children():
        e = e.children()[0]
        path += 'L'
    return path


def _step_mutations(k, step):
    """Variants of step k that no longer check at position k"""
    lhs, rhs = step.eq
    eq = type(step.eq)
    yield replace(step, eq=eq(lhs, Sum(rhs, FRESH)))
    yield replace(step, eq=eq(Sum(lhs, FRESH), rhs))
    path = _leftmost_path(lhs)
    leaf = ZERO if subterm(lhs, path) == FRESH else FRESH
    yield replace(step, eq=eq(replace_at(lhs, path, leaf), rhs))
    yield replace(step, idx=k + 1)
    yield replace(step, rule='TRANS' if len(step.refs) == 1 else 'SYMM')
    if step.rule != 'REFL':
        yield replace(step, rule='REFL')
    for n, (var, value) in enumerate(step.subst):
        subst = list(step.subst)
        subst[n] = (var, Sum(value, FRESH))
        yield replace(step, subst=tuple(subst))
    if step.subst:
        (_, value), *rest = step.subst
        yield replace(step, subst=(('w', value), *rest))
    if step.refs:
        yield replace(step, refs=(k,) * len(step.refs))
    for n, i in enumerate(step.refs):
        j = i - 1 if i > 0 else i + 1
        if j < k:
            yield replace(step, refs=step.refs[:n] + (j,) + step.refs[n + 1:])
    if len(step.refs) == 2 and step.refs[0] != step.refs[1]:
        yield replace(step, refs=step.refs[::-1])
    if step.rule == 'CONG':
        yield replace(step, path=step.path[:-1] + ('R' if step.path[-1] == 'L' else 'L'))
        yield replace(step, path='')


def certificate_mutations(cert):
    """
    (index, mutated certificate) pairs that must be rejected exactly at index:
    perturbed sides, subterms, numbering, rule, substitution, references and
    congruence path. Retargeted references only fail when no two steps prove
    the same equation, which holds for everything ProofBuilder emits.
    """
    steps = cert.steps
    for k, step in enumerate(steps):
        for changed in _step_mutations(k, step):
            yield k, Certificate(steps[:k] + (changed,) + steps[k + 1:], cert.goal)


# Suites

def check_normed(e):
    assert normed_structural(e) == is_normed(e), "structural normedness disagrees with the chart"


def check_witness(e):
    lc = interpret_labeled(e)
    assert lc.chart == interpret(e).chart, "labeled interpretation changed the chart"
    report = check_llee_witness(lc)
    assert report.ok, f"labeled interpretation is not a witness: {report.violations}"


def check_relations(e):
    lc = interpret_labeled(e)
    failed = relation_violations(lc) + norm_violations(lc)
    assert not failed, f"loop relations fail: {', '.join(failed)}"


def check_collapse(e):
    lc = interpret_labeled(e)
    result = collapse_llee(lc)
    previous = lc
    for step in result.steps:
        report = check_llee_witness(step.witness)
        assert report.ok, f"step {step.step} breaks the witness: {report.violations}"
        assert bisimilar(previous.chart, step.witness.chart), f"step {step.step} changes behaviour"
        previous = step.witness
    assert is_collapsed(result.witness.chart), "result is not collapsed"
    quotient, _ = quotient_collapse(erase(lc))
    assert isomorphic(result.witness.chart, quotient) is not None, "result differs from the quotient"


def check_extraction(e):
    lc = interpret_labeled(e)
    table = ExtractionTable(lc)
    assert bisimilar(interpret(table.solution(lc.start)).chart, lc.chart), "extraction changes behaviour"
    for v, w in sorted(compute_relations(lc).descends_pairs):
        composed = Prod(table.relative(w, v), table.solution(v))
        assert bisimilar(interpret(table.solution(w)).chart, interpret(composed).chart), \
            f"s({w}) and t({w}|{v}).s({v}) differ"


def check_roundtrip(e):
    collapsed = collapse_llee(interpret_labeled(e)).witness
    extracted = ExtractionTable(collapsed).solution(collapsed.start)
    assert bisimilar(interpret(extracted).chart, interpret(e).chart), "extracted value changes behaviour"
    cert = prove_equal(e, extracted)
    assert cert is not None, "no certificate for bisimilar expressions"
    result = check_certificate(cert)
    assert result.ok, f"certificate fails at step {result.index}: {result.reason}"


def check_checker(e):
    cert = identity_solution(e).certificates[0]
    assert check_certificate(cert).ok, "generated certificate rejected"
    for k, mutated in certificate_mutations(cert):
        result = check_certificate(mutated)
        assert not result.ok and result.index == k, f"mutation of step {k} accepted or misplaced"


def check_bisim_soundness(e):
    other = Sum(e, e)
    cert = prove_equal(e, other)
    assert cert is not None and check_certificate(cert).ok, "e = e + e not proved"
    assert largest_bisimulation(interpret(e).chart, interpret(other).chart) is not None


SUITES = {
    'normed': check_normed,
    'llee-witness': check_witness,
    'relations': check_relations,
    'collapse': check_collapse,
    'extraction': check_extraction,
    'roundtrip': check_roundtrip,
    'checker': check_checker,
    'idempotence': check_bisim_soundness,
}

PROOF_SUITES = ('roundtrip', 'checker', 'idempotence')

# drawn from redundant_exprs instead of star_exprs
COLLAPSE_SUITES = ('collapse', 'roundtrip')


@dataclass(frozen=True)
class SuiteReport:
    name: str
    seed: int
    cases: int
    passed: bool
    counterexample: Optional[object] = None
    message: str = ''


def run_suite(name, seed=None, cases=None, max_size=None, alphabet_size=None):
    """Run one property suite; a failure is reported with its shrunk counterexample"""
    if name not in SUITES:
        raise KeyError(name)
    prop = SUITES[name]
    seed = get_setting('DEFAULT_SEED') if seed is None else seed
    if cases is None:
        cases = get_setting('PROOF_CASES' if name in PROOF_SUITES else 'SUITE_CASES')
    strategy = redundant_exprs if name in COLLAPSE_SUITES else star_exprs
    last = {}

    @hypothesis.seed(seed)
    @settings(max_examples=cases, database=None, deadline=None, report_multiple_bugs=False,
              suppress_health_check=list(HealthCheck))
    @given(strategy(max_size, alphabet_size))
    def run(e):
        last['expr'] = e
        prop(e)

    try:
        run()
    except Exception as exc:
        logger.info("suite %s failed: %s", name, exc)
        return SuiteReport(name, seed, cases, False, last.get('expr'), str(exc) or type(exc).__name__)
    logger.info("suite %s passed %d cases", name, cases)
    return SuiteReport(name, seed, cases, True)
