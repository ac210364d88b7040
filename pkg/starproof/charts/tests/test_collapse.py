import json
import tempfile
from pathlib import Path

from django.test import SimpleTestCase
from hypothesis import given, settings

from charts.bisim import is_collapsed, isomorphic
from charts.chart import load_chart
from charts.collapse import (
    PairCondition,
    bisimilar_pairs,
    collapse_llee,
    connect_through,
    find_collapsible_pair,
    transform,
    write_trace,
)
from charts.exceptions import CollapseError, PreconditionError, WitnessError
from charts.fixtures import (
    E0,
    E1,
    E2,
    THREE_STEP,
    TRANSFORM_ONE,
    TRANSFORM_ONE_RESULT,
    TRANSFORM_THREE,
    TRANSFORM_THREE_RESULT,
    TRANSFORM_TWO,
    TRANSFORM_TWO_RESULT,
    chart,
    expr,
)
from charts.interp import interpret, interpret_labeled
from charts.llee import body_labeling, check_llee_witness, loop_elimination
from charts.props import star_exprs


def summary(result):
    return [(s.w1, s.w2, s.condition.kind, s.condition.pivot) for s in result.steps]


class TransformationTests(SimpleTestCase):
    def assertSameWitness(self, actual, expected):
        self.assertEqual(actual.chart, expected.chart)
        self.assertEqual(dict(actual.levels), dict(expected.levels))

    def test_first_condition(self):
        lc = chart(TRANSFORM_ONE)
        self.assertEqual(find_collapsible_pair(lc), (1, 2, PairCondition('C1')))
        self.assertSameWitness(transform(lc, 1, 2, PairCondition('C1')), chart(TRANSFORM_ONE_RESULT))

    def test_second_condition(self):
        lc = chart(TRANSFORM_TWO)
        w1, w2, cond = find_collapsible_pair(lc)
        self.assertEqual((w1, w2, cond.kind, cond.chain), (0, 3, 'C2', (3, 0)))
        self.assertEqual(str(cond), 'C2(3 ⟲ 0)')
        self.assertSameWitness(transform(lc, 0, 3, cond), chart(TRANSFORM_TWO_RESULT))

    def test_third_condition(self):
        lc = chart(TRANSFORM_THREE)
        self.assertEqual(find_collapsible_pair(lc), (1, 4, PairCondition('C3', pivot=0)))
        result = transform(lc, 1, 4, PairCondition('C3', pivot=0))
        self.assertSameWitness(result, chart(TRANSFORM_THREE_RESULT))

    def test_results_stay_witnesses(self):
        for text in (TRANSFORM_ONE_RESULT, TRANSFORM_TWO_RESULT, TRANSFORM_THREE_RESULT):
            with self.subTest(text=text):
                self.assertTrue(check_llee_witness(chart(text)).ok)

    def test_wrong_pairs_lose_lee(self):
        for text, w1, w2 in ((TRANSFORM_ONE, 4, 6), (TRANSFORM_THREE, 3, 6)):
            with self.subTest(w1=w1, w2=w2):
                connected, _ = connect_through(chart(text).chart, w1, w2)
                self.assertFalse(loop_elimination(connected).lee)

    def test_unsatisfied_condition(self):
        with self.assertRaises(CollapseError):
            transform(chart(TRANSFORM_ONE), 1, 2, PairCondition('C2'))
        with self.assertRaises(CollapseError):
            transform(chart(TRANSFORM_ONE), 1, 3, PairCondition('C1'))

    def test_connect_through_moves_start(self):
        lc = chart(TRANSFORM_TWO)
        connected, mapping = connect_through(lc, 0, 3)
        self.assertEqual(connected.start, 3)
        self.assertEqual(mapping[0], 3)
        with self.assertRaises(PreconditionError):
            connect_through(lc, 1, 1)

    def test_bisimilar_pairs(self):
        self.assertEqual(bisimilar_pairs(chart(TRANSFORM_THREE)),
                         [(1, 4), (2, 5), (3, 6), (4, 1), (5, 2), (6, 3)])


class CollapseTests(SimpleTestCase):
    def test_first_transformation_collapses_in_one_step(self):
        result = collapse_llee(chart(TRANSFORM_ONE))
        self.assertEqual(summary(result), [(1, 2, 'C1', None)])
        self.assertIsNotNone(isomorphic(result.witness, chart(TRANSFORM_ONE_RESULT)))

    def test_third_transformation_twice(self):
        result = collapse_llee(chart(TRANSFORM_THREE))
        self.assertEqual(summary(result), [(1, 4, 'C3', 0), (2, 5, 'C3', 0)])
        self.assertEqual(result.witness.chart.vertices, frozenset({0, 4, 5, 6}))

    def test_three_step(self):
        result = collapse_llee(chart(THREE_STEP))
        self.assertEqual(summary(result), [(0, 1, 'C1', None), (1, 5, 'C2', None), (3, 4, 'C3', 2)])
        self.assertEqual(result.witness.start, 5)
        self.assertIsNotNone(isomorphic(result.witness.chart, interpret(expr(E0)).chart))

    def test_worked_examples(self):
        e1 = collapse_llee(interpret_labeled(expr(E1)))
        self.assertEqual(summary(e1), [(0, 3, 'C2', None)])
        e2 = collapse_llee(interpret_labeled(expr(E2)))
        self.assertEqual(summary(e2), [(1, 4, 'C2', None), (0, 3, 'C1', None)])
        for result in (e1, e2):
            self.assertIsNotNone(isomorphic(result.witness.chart, interpret(expr(E0)).chart))

    def test_mapping_is_onto_result(self):
        result = collapse_llee(interpret_labeled(expr(E1)))
        self.assertEqual(set(result.mapping.values()), set(result.witness.chart.vertices))
        self.assertEqual(result.mapping[3], result.mapping[0])

    def test_collapsed_input_is_unchanged(self):
        lc = interpret_labeled(expr(E0))
        result = collapse_llee(lc)
        self.assertEqual(result.steps, ())
        self.assertEqual(result.witness, lc)
        self.assertIsNone(find_collapsible_pair(lc))

    def test_needs_a_witness(self):
        with self.assertRaises(WitnessError):
            collapse_llee(body_labeling(interpret(expr(E0)).chart))

    def test_lbsn_strategy_reaches_the_same_chart(self):
        result = collapse_llee(chart(THREE_STEP), strategy='lbsn')
        self.assertTrue(is_collapsed(result.witness.chart))
        self.assertIsNotNone(isomorphic(result.witness.chart, interpret(expr(E0)).chart))

    def test_trace(self):
        lc = chart(THREE_STEP)
        result = collapse_llee(lc)
        with tempfile.TemporaryDirectory() as tmp:
            manifest = write_trace(result, tmp, initial=lc)
            data = json.loads(manifest.read_text(encoding='utf-8'))
            self.assertEqual([row['condition'] for row in data['steps']], ['C1', 'C2', 'C3'])
            self.assertEqual(data['steps'][1]['chain'], [5, 2, 1])
            self.assertEqual(data['vertices'], 3)
            last = load_chart((Path(tmp) / data['steps'][-1]['file']).read_text(encoding='utf-8'))
            self.assertEqual(last.chart, result.witness.chart)
            self.assertTrue((Path(tmp) / 'step-00.chart').exists())

    @settings(max_examples=25)
    @given(star_exprs(max_size=10))
    def test_every_step_keeps_a_witness(self, e):
        result = collapse_llee(interpret_labeled(e))
        for step in result.steps:
            self.assertTrue(check_llee_witness(step.witness).ok)
        self.assertTrue(is_collapsed(result.witness.chart))
