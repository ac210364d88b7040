from django.test import SimpleTestCase
from hypothesis import given, settings

from charts.bisim import (
    bisimilar,
    is_collapsed,
    is_functional,
    isomorphic,
    largest_bisimulation,
    quotient_collapse,
    self_bisimilarity_classes,
    verify_bisimulation,
)
from charts.expr import Sum
from charts.fixtures import E0, E1, E2, expr
from charts.interp import interpret, interpret_labeled
from charts.props import star_exprs


def chart_of(text):
    return interpret(expr(text)).chart


class BisimulationTests(SimpleTestCase):
    def test_worked_examples_are_bisimilar(self):
        for text in (E1, E2):
            with self.subTest(text=text):
                relation = largest_bisimulation(chart_of(text), chart_of(E0))
                self.assertIsNotNone(relation)
                self.assertTrue(verify_bisimulation(chart_of(text), chart_of(E0), relation))
                self.assertTrue(is_functional(relation, chart_of(text), chart_of(E0)))

    def test_map_of_e1_onto_e0(self):
        relation = largest_bisimulation(chart_of(E1), chart_of(E0))
        self.assertEqual(relation.as_map(), {0: 0, 1: 1, 2: 2, 3: 0})
        self.assertEqual(relation.converse().image(0), [0, 3])

    def test_different_actions(self):
        self.assertIsNone(largest_bisimulation(chart_of('a'), chart_of('b')))
        self.assertFalse(bisimilar(chart_of('a.b'), chart_of('a.(b + c)')))

    def test_termination_matters(self):
        self.assertFalse(bisimilar(chart_of('a'), chart_of('a.0')))

    def test_classes_and_quotient(self):
        c = chart_of(E1)
        self.assertEqual(self_bisimilarity_classes(c), [[0, 3], [1], [2]])
        self.assertFalse(is_collapsed(c))
        quotient, representative = quotient_collapse(c)
        self.assertEqual(representative[3], 0)
        self.assertTrue(is_collapsed(quotient))
        self.assertIsNotNone(isomorphic(quotient, chart_of(E0)))

    def test_e0_is_collapsed(self):
        self.assertTrue(is_collapsed(chart_of(E0)))

    def test_isomorphism_respects_levels(self):
        lc = interpret_labeled(expr(E0))
        self.assertIsNotNone(isomorphic(lc, lc))
        relabeled = lc.relabel({t: 0 for t in lc.transitions})
        self.assertIsNone(isomorphic(lc, relabeled))
        self.assertIsNotNone(isomorphic(lc.chart, relabeled.chart))

    @settings(max_examples=30)
    @given(star_exprs(max_size=9))
    def test_sum_is_idempotent_up_to_bisimilarity(self, e):
        self.assertTrue(bisimilar(interpret(e).chart, interpret(Sum(e, e)).chart))

    @settings(max_examples=30)
    @given(star_exprs(max_size=9))
    def test_largest_bisimulation_verifies(self, e):
        c = interpret(e).chart
        relation = largest_bisimulation(c, c)
        self.assertTrue(verify_bisimulation(c, c, relation))

    @settings(max_examples=30)
    @given(star_exprs(max_size=7), star_exprs(max_size=7))
    def test_swapping_arguments_gives_converse(self, e, f):
        c1 = interpret(e).chart
        for c2 in (interpret(f).chart, interpret(Sum(e, e)).chart):
            relation = largest_bisimulation(c1, c2)
            swapped = largest_bisimulation(c2, c1)
            if relation is None:
                self.assertIsNone(swapped)
            else:
                self.assertEqual(swapped, relation.converse())

    @settings(max_examples=30)
    @given(star_exprs(max_size=9))
    def test_quotient_is_idempotent(self, e):
        quotient, _ = quotient_collapse(interpret(e).chart)
        again, representative = quotient_collapse(quotient)
        self.assertIsNotNone(isomorphic(quotient, again))
        self.assertTrue(all(v == w for v, w in representative.items()))
