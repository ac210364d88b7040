from django.test import SimpleTestCase
from hypothesis import given, settings

from charts.bisim import largest_bisimulation
from charts.exceptions import PreconditionError, ProofConstructionError
from charts.expr import ZERO, Act, Sum
from charts.fixtures import E0, E1, E2, EQUAL_PAIRS, chart, expr
from charts.extract import ExtractionTable
from charts.interp import interpret, interpret_labeled
from charts.proof.certificate import Certificate, Equation, ProvableSolution, check_certificate
from charts.proof.solutions import (
    check_solution,
    extraction_solution,
    identity_solution,
    prove_equal,
    solution_shape,
    transfer_solution,
    unify_solutions,
)
from charts.props import star_exprs

a = Act('a')


def rsp_conclusions(cert):
    return [step.eq for step in cert.steps if step.rule == 'RSP']


class IdentitySolutionTests(SimpleTestCase):
    def test_single_action(self):
        sol = identity_solution(a)
        self.assertEqual(sol.values, {0: a})
        self.assertEqual(sol.certificates[0].goal, Equation(a, Sum(a, ZERO)))
        self.assertTrue(check_solution(sol).ok)

    def test_zero(self):
        sol = identity_solution(ZERO)
        self.assertEqual(sol.certificates[0].goal, Equation(ZERO, Sum(ZERO, ZERO)))
        self.assertTrue(check_solution(sol).ok)

    def test_e0(self):
        sol = identity_solution(expr(E0))
        self.assertEqual(sol.principal_value, expr(E0))
        self.assertEqual(len(sol.values), 3)
        self.assertEqual(check_solution(sol).failures, ())

    def test_wrong_goal_is_reported(self):
        sol = identity_solution(a)
        eq = Equation(a, a)
        broken = ProvableSolution(sol.chart, sol.values, {0: Certificate((), eq)})
        report = check_solution(broken)
        self.assertFalse(report.ok)
        self.assertEqual(report.failures[0][0], 0)


class TransferTests(SimpleTestCase):
    def test_e1_onto_e0(self):
        c1 = interpret(expr(E1)).chart
        sol = identity_solution(expr(E0))
        phi = largest_bisimulation(c1, sol.chart)
        moved = transfer_solution(sol, phi, c1)
        self.assertEqual(moved.principal_value, expr(E0))
        self.assertEqual(moved.values[3], expr(E0))
        self.assertTrue(check_solution(moved).ok)

    def test_parallel_transitions_merge(self):
        c1 = chart("start 0\ntick 3\ntrans 0 a 1\ntrans 0 a 2\ntrans 1 b 3\ntrans 2 b 3\n")
        sol = identity_solution(expr('a.b'))
        moved = transfer_solution(sol, {0: 0, 1: 1, 2: 1, 3: 2}, c1)
        self.assertTrue(check_solution(moved).ok)
        self.assertGreaterEqual(moved.certificates[0].count('B3'), 1)
        self.assertEqual(moved.certificates[0].goal.rhs, solution_shape(c1, moved.values, 0))

    def test_needs_functional_bisimulation(self):
        c0 = interpret(expr(E0)).chart
        c1 = interpret(expr(E1)).chart
        sol = identity_solution(expr(E1))
        with self.assertRaises(PreconditionError):
            transfer_solution(sol, largest_bisimulation(c0, c1), c0)


class ExtractionSolutionTests(SimpleTestCase):
    def test_e0(self):
        lc = interpret_labeled(expr(E0))
        sol = extraction_solution(lc)
        self.assertEqual(sol.values, ExtractionTable(lc).values())
        self.assertTrue(check_solution(sol).ok)
        self.assertTrue(all(cert.count('RSP') == 0 for cert in sol.certificates.values()))

    def test_single_loop(self):
        sol = extraction_solution(chart("start 0\ntick 1\ntrans 0 a 1 0\ntrans 0 b 0 1\n"))
        self.assertEqual(sol.values, {0: expr('b * a')})
        self.assertEqual(sol.certificates[0].goal, Equation(expr('b * a'), expr('a + b.(b * a)')))
        self.assertTrue(check_solution(sol).ok)

    @settings(max_examples=15)
    @given(star_exprs(max_size=8))
    def test_interpretations(self, e):
        self.assertTrue(check_solution(extraction_solution(interpret_labeled(e))).ok)


class UnifyTests(SimpleTestCase):
    def test_identity_against_extraction(self):
        lc = interpret_labeled(expr(E0))
        sol = identity_solution(expr(E0))
        certificates = unify_solutions(lc, sol)
        table = ExtractionTable(lc)
        self.assertEqual(sorted(certificates), [0, 1, 2])
        for v, cert in certificates.items():
            self.assertEqual(cert.goal, Equation(sol.values[v], table.solution(v)))
            self.assertTrue(check_certificate(cert).ok)
        unfolded = set()
        for v, cert in certificates.items():
            rsp = rsp_conclusions(cert)
            self.assertEqual(cert.count('RSP'), len(set(rsp)))
            self.assertEqual(rsp.count(cert.goal), 1)
            self.assertEqual(cert.steps[-1].rule, 'RSP')
            unfolded.update(eq.lhs for eq in rsp)
        self.assertEqual(unfolded, set(sol.values.values()))

    def test_extraction_against_itself(self):
        lc = interpret_labeled(expr(E1))
        for cert in unify_solutions(lc, extraction_solution(lc)).values():
            self.assertTrue(check_certificate(cert).ok)
            self.assertEqual([step.rule for step in cert.steps], ['REFL'])

    def test_broken_solution(self):
        lc = interpret_labeled(expr(E0))
        sol = identity_solution(expr(E0))
        eq = Equation(sol.values[0], sol.values[0])
        broken = ProvableSolution(sol.chart, sol.values, {**sol.certificates, 0: Certificate((), eq)})
        with self.assertRaises(ProofConstructionError):
            unify_solutions(lc, broken)

    def test_other_chart(self):
        with self.assertRaises(PreconditionError):
            unify_solutions(interpret_labeled(expr(E0)), identity_solution(a))


class ProveEqualTests(SimpleTestCase):
    def test_pairs(self):
        for left, right in EQUAL_PAIRS:
            with self.subTest(left=left, right=right):
                cert = prove_equal(expr(left), expr(right))
                self.assertEqual(cert.goal, Equation(expr(left), expr(right)))
                self.assertTrue(check_certificate(cert).ok)

    def test_e0_and_e2(self):
        cert = prove_equal(expr(E0), expr(E2))
        self.assertTrue(check_certificate(cert).ok)
        rsp = rsp_conclusions(cert)
        self.assertEqual(len(rsp), len(set(rsp)))
        table = ExtractionTable(interpret_labeled(expr(E0)))
        self.assertIn(Equation(expr(E0), table.solution(0)), rsp)

    def test_milestones_are_logged(self):
        with self.assertLogs('charts.proof.solutions', level='INFO') as logs:
            prove_equal(expr('a * b'), expr('a.(a * b) + b'))
        info = [record.getMessage() for record in logs.records if record.levelname == 'INFO']
        self.assertEqual(info[0], 'proving a * b = a.(a * b) + b')
        self.assertTrue(info[-1].startswith('proved equality with '))

    def test_not_bisimilar(self):
        self.assertIsNone(prove_equal(a, Act('b')))

    def test_identical(self):
        cert = prove_equal(expr(E1), expr(E1))
        self.assertEqual([step.rule for step in cert.steps], ['REFL'])

    @settings(max_examples=10)
    @given(star_exprs(max_size=7))
    def test_idempotence(self, e):
        cert = prove_equal(e, Sum(e, e))
        self.assertIsNotNone(cert)
        self.assertTrue(check_certificate(cert).ok)
