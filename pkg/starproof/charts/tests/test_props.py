from itertools import islice
from unittest import mock

from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings
from rest_framework import serializers

from charts.bisim import isomorphic
from charts.collapse import collapse_llee
from charts.expr import ZERO, Act, Sum, Zero, actions, size
from charts.fixtures import E0, E1, E2, EQUAL_PAIRS, expr
from charts.interp import interpret, interpret_labeled
from charts.proof.certificate import Certificate, Equation, ProofStep, check_certificate
from charts.proof.solutions import identity_solution, prove_equal
from charts.props import (
    COLLAPSE_SUITES,
    PROOF_SUITES,
    SUITES,
    ExprGen,
    certificate_mutations,
    gen_expr,
    norm_violations,
    redundant_exprs,
    relation_violations,
    run_suite,
)

a = Act('a')


def sample(cfg, n=200):
    return list(islice(gen_expr(cfg), n))


class GeneratorTests(SimpleTestCase):
    def test_deterministic(self):
        cfg = ExprGen(seed=7, max_size=10, alphabet_size=2)
        self.assertEqual(sample(cfg), sample(cfg))
        self.assertNotEqual(sample(cfg), sample(ExprGen(seed=8, max_size=10, alphabet_size=2)))

    def test_bounds(self):
        exprs = sample(ExprGen(seed=1, max_size=9, alphabet_size=2))
        self.assertTrue(all(size(e) <= 9 for e in exprs))
        self.assertTrue(set().union(*(actions(e) for e in exprs)) <= {'a', 'b'})

    def test_size_one_gives_leaves(self):
        exprs = sample(ExprGen(seed=3, max_size=1, alphabet_size=3), 50)
        self.assertTrue(all(isinstance(e, (Zero, Act)) for e in exprs))

    def test_parameters_are_validated(self):
        self.assertEqual(ExprGen.from_data({'seed': 1, 'max_size': 4, 'alphabet_size': 3}).alphabet, 'abc')
        for data in ({'seed': 1, 'max_size': 0, 'alphabet_size': 3},
                     {'seed': 1, 'max_size': 4, 'alphabet_size': 27}):
            with self.subTest(data=data):
                with self.assertRaises(serializers.ValidationError):
                    ExprGen.from_data(data)
        with self.assertRaises(serializers.ValidationError):
            next(gen_expr(ExprGen(seed=1, max_size=0, alphabet_size=3)))

    @settings(max_examples=50)
    @given(redundant_exprs(max_size=11, alphabet_size=2))
    def test_redundant_bounds(self, e):
        self.assertLessEqual(size(e), 11)
        self.assertLessEqual(actions(e), {'a', 'b'})

    def test_redundant_forms_need_collapsing(self):
        target = interpret(expr('a * b')).chart
        for text in ('a * (a * b)', 'a.(a * b) + b'):
            with self.subTest(text=text):
                result = collapse_llee(interpret_labeled(expr(text)))
                self.assertGreaterEqual(len(result.steps), 1)
                self.assertIsNotNone(isomorphic(result.witness.chart, target))


class OracleTests(SimpleTestCase):
    def test_e0_relations(self):
        lc = interpret_labeled(expr(E0))
        self.assertEqual(relation_violations(lc), [])
        self.assertEqual(norm_violations(lc), [])

    def test_mutations(self):
        eq = Equation(Sum(a, ZERO), a)
        cert = Certificate((ProofStep(0, eq, 'B6', (('x', a),)),), eq)
        mutations = list(certificate_mutations(cert))
        # sides, leaf, numbering, two rules, substitution value and variable
        self.assertEqual(len(mutations), 8)
        for k, mutated in mutations:
            self.assertEqual(check_certificate(mutated)[:2], (False, k))

    def test_thousand_mutations_rejected_where_made(self):
        certificates = [prove_equal(expr(left), expr(right)) for left, right in EQUAL_PAIRS]
        for text in (E0, E1, E2):
            certificates.extend(identity_solution(expr(text)).certificates.values())
        total = 0
        for cert in certificates:
            self.assertTrue(check_certificate(cert).ok)
            for k, mutated in certificate_mutations(cert):
                result = check_certificate(mutated)
                self.assertEqual((result.ok, result.index), (False, k), str(mutated.steps[k]))
                total += 1
        self.assertGreaterEqual(total, 1000)


class SuiteTests(SimpleTestCase):
    def test_suite_names(self):
        self.assertTrue(set(PROOF_SUITES) <= set(SUITES))
        self.assertIn('llee-witness', SUITES)

    def test_passing_suites(self):
        for name in ('normed', 'llee-witness', 'relations'):
            with self.subTest(name=name):
                report = run_suite(name, seed=3, cases=20, max_size=8)
                self.assertTrue(report.passed, report.message)
                self.assertEqual((report.name, report.seed, report.cases), (name, 3, 20))
                self.assertIsNone(report.counterexample)

    def test_proof_suite(self):
        report = run_suite('checker', seed=1, cases=10, max_size=6)
        self.assertTrue(report.passed, report.message)

    def test_collapse_suites(self):
        self.assertEqual(set(COLLAPSE_SUITES), {'collapse', 'roundtrip'})
        report = run_suite('collapse', seed=4, cases=15, max_size=9)
        self.assertTrue(report.passed, report.message)

    @override_settings(STAREXPR={'DEFAULT_SEED': 11, 'SUITE_CASES': 5})
    def test_defaults_come_from_settings(self):
        report = run_suite('normed', max_size=5)
        self.assertEqual((report.seed, report.cases), (11, 5))

    def test_failure_reports_counterexample(self):
        def small_only(e):
            assert size(e) < 3, "too big"

        with mock.patch.dict(SUITES, {'small-only': small_only}):
            report = run_suite('small-only', seed=5, cases=100, max_size=9)
        self.assertFalse(report.passed)
        self.assertEqual(report.message, "too big")
        self.assertGreaterEqual(size(report.counterexample), 3)

    def test_unknown_suite(self):
        with self.assertRaises(KeyError):
            run_suite('nonexistent')
