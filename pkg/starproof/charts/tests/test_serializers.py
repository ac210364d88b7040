from django.test import SimpleTestCase

from charts.fixtures import E0, NO_TERMINATION, chart, expr
from charts.interp import interpret, interpret_labeled
from charts.llee import body_labeling, check_llee_witness, loop_elimination
from charts.props import SuiteReport
from charts.serializers import (
    CollapseStepSerializer,
    ExprGenSerializer,
    LoopEliminationSerializer,
    SuiteReportSerializer,
    WitnessReportSerializer,
)


class ExprGenSerializerTests(SimpleTestCase):
    def test_valid(self):
        serializer = ExprGenSerializer(data={'seed': 0, 'max_size': 5, 'alphabet_size': 2})
        self.assertTrue(serializer.is_valid())

    def test_invalid_fields(self):
        serializer = ExprGenSerializer(data={'seed': 'x', 'max_size': 0, 'alphabet_size': 30})
        self.assertFalse(serializer.is_valid())
        self.assertEqual(set(serializer.errors), {'seed', 'max_size', 'alphabet_size'})


class ReportSerializerTests(SimpleTestCase):
    def test_loop_elimination(self):
        data = LoopEliminationSerializer(loop_elimination(interpret(expr(E0)).chart)).data
        self.assertTrue(data['lee'])
        self.assertEqual(data['trace'][0]['entries'], ['1 -c-> 0', '1 -a-> 2'])
        self.assertEqual(data['witness']['1 -a-> 2'], 1)

    def test_stuck_elimination(self):
        data = LoopEliminationSerializer(loop_elimination(chart(NO_TERMINATION))).data
        self.assertFalse(data['lee'])
        self.assertEqual(data['diagnosis'], 'no loop subchart')
        self.assertEqual(data['trace'], [])

    def test_witness_report(self):
        ok = WitnessReportSerializer(check_llee_witness(interpret_labeled(expr(E0)))).data
        self.assertEqual(ok, {'ok': True, 'violations': []})
        bad = WitnessReportSerializer(check_llee_witness(body_labeling(interpret(expr(E0)).chart))).data
        self.assertEqual(bad['violations'][0]['kind'], 'W1')

    def test_suite_report_prints_counterexample(self):
        report = SuiteReport('normed', 0, 10, False, expr('a * b'), 'broken')
        data = SuiteReportSerializer(report).data
        self.assertEqual(data['counterexample'], 'a * b')
        self.assertIsNone(SuiteReportSerializer(SuiteReport('normed', 0, 10, True)).data['counterexample'])

    def test_collapse_row_validation(self):
        row = {'step': 1, 'w1': 0, 'w2': 3, 'condition': 'C4', 'pivot': None, 'chain': [], 'file': 'x'}
        serializer = CollapseStepSerializer(data=row)
        self.assertFalse(serializer.is_valid())
        self.assertIn('condition', serializer.errors)
