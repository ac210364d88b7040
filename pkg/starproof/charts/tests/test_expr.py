from django.test import SimpleTestCase
from hypothesis import given, settings

from charts.exceptions import ExprSyntaxError
from charts.expr import ZERO, Act, Prod, Star, Sum, actions, big_sum, format_expr, parse_expr, size, star_height
from charts.fixtures import E0, E1, E2
from charts.props import star_exprs

a, b, c, d = Act('a'), Act('b'), Act('c'), Act('d')


class ParseTests(SimpleTestCase):
    def test_precedence(self):
        self.assertEqual(parse_expr('a + b.c * d'), Sum(a, Prod(b, Star(c, d))))

    def test_left_associative(self):
        self.assertEqual(parse_expr('a.b.c'), Prod(Prod(a, b), c))
        self.assertEqual(parse_expr('a * b * c'), Star(Star(a, b), c))
        self.assertEqual(parse_expr('a + b + c'), Sum(Sum(a, b), c))

    def test_zero_and_names(self):
        self.assertEqual(parse_expr('0'), ZERO)
        self.assertEqual(parse_expr('go_1 . a0'), Prod(Act('go_1'), Act('a0')))

    def test_errors_carry_offsets(self):
        cases = [('a +', 3), ('a $', 2), ('(a', 2), ('', 0), ('a b', 2)]
        for text, offset in cases:
            with self.subTest(text=text):
                with self.assertRaises(ExprSyntaxError) as ctx:
                    parse_expr(text)
                self.assertEqual(ctx.exception.offset, offset)

    def test_invalid_action_name(self):
        with self.assertRaises(ValueError):
            Act('A')


class FormatTests(SimpleTestCase):
    def test_worked_examples_print_back(self):
        for text in (E0, E1, E2):
            with self.subTest(text=text):
                self.assertEqual(format_expr(parse_expr(text)), text)

    def test_minimal_parentheses(self):
        self.assertEqual(format_expr(Prod(a, Prod(b, c))), 'a.(b.c)')
        self.assertEqual(format_expr(Sum(a, Sum(b, c))), 'a + (b + c)')
        self.assertEqual(format_expr(Prod(Star(a, b), c)), '(a * b).c')
        self.assertEqual(format_expr(Star(Sum(a, b), Prod(c, d))), '(a + b) * (c.d)')

    @settings(max_examples=200)
    @given(star_exprs(max_size=20))
    def test_parse_inverts_format(self, e):
        self.assertEqual(parse_expr(format_expr(e)), e)


class MeasureTests(SimpleTestCase):
    def test_star_height(self):
        self.assertEqual(star_height(parse_expr('(a * b) * c')), 2)
        self.assertEqual(star_height(parse_expr('a.b + c')), 0)

    def test_size_and_actions(self):
        e = parse_expr(E0)
        self.assertEqual(size(parse_expr('a.b')), 3)
        self.assertEqual(actions(e), {'a', 'b', 'c'})

    def test_big_sum(self):
        self.assertEqual(big_sum([]), ZERO)
        self.assertEqual(big_sum([a, b, c]), Sum(Sum(a, b), c))

    def test_structural_equality_and_hash(self):
        self.assertEqual(parse_expr(E1), parse_expr(E1))
        self.assertEqual(hash(parse_expr(E1)), hash(parse_expr(E1)))
        self.assertNotEqual(Sum(a, b), Sum(b, a))
