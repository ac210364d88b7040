import json
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from charts.bisim import largest_bisimulation
from charts.chart import LabeledChart, load_chart, save_chart, to_dot
from charts.collapse import STRATEGIES as COLLAPSE_STRATEGIES, collapse_llee, write_trace
from charts.exceptions import StarExprError, WitnessError
from charts.expr import format_expr, parse_expr
from charts.extract import ExtractionTable, simplify
from charts.interp import interpret, interpret_labeled
from charts.llee import ORDERS, STRATEGIES, check_llee_witness, elimination_runs, loop_elimination
from charts.proof.certificate import check_certificate, load_certificate, save_certificate
from charts.proof.solutions import prove_equal
from charts.props import SUITES, run_suite
from charts.serializers import (
    BisimulationSerializer,
    CollapseStepSerializer,
    LoopEliminationSerializer,
    SuiteReportSerializer,
    WitnessReportSerializer,
)


class Command(BaseCommand):
    help = 'Star expressions, charts, LLEE-witnesses and BBP certificates'
    requires_system_checks = []

    def add_arguments(self, parser):
        cmd = self
        subparsers = parser.add_subparsers(dest='command', required=True)

        def sub(name, help_text):
            return subparsers.add_parser(
                name, help=help_text,
                called_from_command_line=getattr(cmd, '_called_from_command_line', None),
            )

        p = sub('interpret', 'Write the chart interpretation of an expression')
        p.add_argument('-e', '--expr', required=True)
        p.add_argument('-o', '--output')

        p = sub('labeled', 'Write the entry/body-labeled interpretation of an expression')
        p.add_argument('-e', '--expr', required=True)
        p.add_argument('-o', '--output')

        p = sub('lee', 'Run loop elimination on a chart file')
        p.add_argument('chart')
        p.add_argument('--strategy', choices=STRATEGIES, default='maximal')
        p.add_argument('--order', choices=ORDERS, default='forward')
        p.add_argument('--runs', action='store_true', help='Enumerate elimination runs')
        p.add_argument('--json', action='store_true')

        p = sub('llee-check', 'Check a labeled chart file as LLEE-witness')
        p.add_argument('chart')
        p.add_argument('--json', action='store_true')

        p = sub('bisim', 'Decide bisimilarity of two chart files')
        p.add_argument('left')
        p.add_argument('right')
        p.add_argument('--json', action='store_true')

        p = sub('collapse', 'Collapse a LLEE-witness')
        p.add_argument('chart')
        p.add_argument('-o', '--output')
        p.add_argument('--trace', metavar='DIR')
        p.add_argument('--strategy', choices=COLLAPSE_STRATEGIES)
        p.add_argument('--json', action='store_true')

        p = sub('extract', 'Extract the star expression of a LLEE-witness')
        p.add_argument('chart')
        p.add_argument('--vertex', type=int)
        p.add_argument('--relative', type=int, metavar='V', help='Print t(vertex|V) instead')
        p.add_argument('--simplify', action='store_true')

        p = sub('prove', 'Write a BBP certificate for two bisimilar expressions')
        p.add_argument('-e1', '--e1', dest='e1', required=True)
        p.add_argument('-e2', '--e2', dest='e2', required=True)
        p.add_argument('-o', '--output')

        p = sub('check', 'Check a certificate file')
        p.add_argument('certificate')

        p = sub('dot', 'Render a chart file as DOT')
        p.add_argument('chart')
        p.add_argument('-o', '--output')

        p = sub('test', 'Run a property suite')
        p.add_argument('suite', choices=sorted(SUITES) + ['all'])
        p.add_argument('--seed', type=int)
        p.add_argument('--cases', type=int)
        p.add_argument('--max-size', type=int)
        p.add_argument('--alphabet-size', type=int)
        p.add_argument('--json', action='store_true')

    def handle(self, *args, **options):
        command = options['command']
        handler = getattr(self, 'handle_' + command.replace('-', '_'))
        try:
            handler(options)
        except WitnessError as exc:
            raise CommandError(str(exc), returncode=1)
        except (StarExprError, OSError) as exc:
            raise CommandError(str(exc), returncode=2)

    # Helpers

    def _emit(self, text, output):
        if output:
            Path(output).write_text(text, encoding='utf-8')
        else:
            self.stdout.write(text, ending='')

    def _json(self, data):
        self.stdout.write(json.dumps(data, indent=2, ensure_ascii=False))

    def _load(self, path):
        return load_chart(Path(path).read_text(encoding='utf-8'))

    def _load_labeled(self, path):
        chart = self._load(path)
        if not isinstance(chart, LabeledChart):
            raise CommandError(f"{path} has no levels; expected a labeled chart", returncode=2)
        return chart

    # Commands

    def handle_interpret(self, options):
        chart = interpret(parse_expr(options['expr'])).chart
        self._emit(save_chart(chart), options['output'])

    def handle_labeled(self, options):
        self._emit(save_chart(interpret_labeled(parse_expr(options['expr']))), options['output'])

    def handle_lee(self, options):
        chart = self._load(options['chart'])
        if options['runs']:
            results = list(elimination_runs(chart))
        else:
            results = [loop_elimination(chart, strategy=options['strategy'], order=options['order'])]
        if options['json']:
            self._json(LoopEliminationSerializer(results, many=True).data)
        else:
            for number, result in enumerate(results, start=1):
                if len(results) > 1:
                    self.stdout.write(f"run {number}")
                for step in result.trace:
                    entries = ', '.join(str(t) for t in step.entries)
                    self.stdout.write(f"  {step.step}: eliminate at {step.vertex}: {entries}")
                if result.lee:
                    self.stdout.write("LEE holds")
                else:
                    self.stdout.write(f"LEE fails: {result.diagnosis}")
        if not any(result.lee for result in results):
            raise CommandError("LEE fails", returncode=1)

    def handle_llee_check(self, options):
        report = check_llee_witness(self._load_labeled(options['chart']))
        if options['json']:
            self._json(WitnessReportSerializer(report).data)
        elif report.ok:
            self.stdout.write("valid LLEE-witness")
        else:
            for violation in report.violations:
                self.stdout.write(f"{violation.kind} at {violation.site}")
        if not report.ok:
            raise CommandError("not a LLEE-witness", returncode=1)

    def handle_bisim(self, options):
        relation = largest_bisimulation(self._load(options['left']), self._load(options['right']))
        if options['json']:
            pairs = [list(pair) for pair in relation] if relation is not None else []
            self._json(BisimulationSerializer({'bisimilar': relation is not None, 'pairs': pairs}).data)
        elif relation is not None:
            self.stdout.write("bisimilar")
            for v, w in relation:
                self.stdout.write(f"  {v} ~ {w}")
        if relation is None:
            if not options['json']:
                self.stdout.write("not bisimilar")
            raise CommandError("not bisimilar", returncode=1)

    def handle_collapse(self, options):
        lc = self._load_labeled(options['chart'])
        result = collapse_llee(lc, strategy=options['strategy'])
        if options['trace']:
            write_trace(result, options['trace'], initial=lc)
        if options['json']:
            rows = [{'step': s.step, 'w1': s.w1, 'w2': s.w2, 'condition': s.condition.kind,
                     'pivot': s.condition.pivot, 'chain': list(s.condition.chain),
                     'file': f"step-{s.step:02d}.chart"} for s in result.steps]
            self._json(CollapseStepSerializer(rows, many=True).data)
            if options['output']:
                Path(options['output']).write_text(save_chart(result.witness), encoding='utf-8')
        else:
            self._emit(save_chart(result.witness), options['output'])

    def handle_extract(self, options):
        lc = self._load_labeled(options['chart'])
        table = ExtractionTable(lc)
        vertex = lc.start if options['vertex'] is None else options['vertex']
        if options['relative'] is not None:
            value = table.relative(vertex, options['relative'])
        else:
            value = table.solution(vertex)
        if options['simplify']:
            value, _ = simplify(value)
        self.stdout.write(format_expr(value))

    def handle_prove(self, options):
        e1, e2 = parse_expr(options['e1']), parse_expr(options['e2'])
        cert = prove_equal(e1, e2)
        if cert is None:
            self.stdout.write("not bisimilar")
            raise CommandError("expressions are not bisimilar", returncode=1)
        self._emit(save_certificate(cert), options['output'])

    def handle_check(self, options):
        cert = load_certificate(Path(options['certificate']).read_text(encoding='utf-8'))
        result = check_certificate(cert)
        if result.ok:
            self.stdout.write(f"certificate ok ({len(cert)} steps)")
            return
        self.stdout.write(f"certificate rejected at step {result.index}: {result.reason}")
        raise CommandError(f"certificate rejected at step {result.index}", returncode=1)

    def handle_dot(self, options):
        self._emit(to_dot(self._load(options['chart'])), options['output'])

    def handle_test(self, options):
        names = sorted(SUITES) if options['suite'] == 'all' else [options['suite']]
        reports = [
            run_suite(name, seed=options['seed'], cases=options['cases'],
                      max_size=options['max_size'], alphabet_size=options['alphabet_size'])
            for name in names
        ]
        if options['json']:
            self._json(SuiteReportSerializer(reports, many=True).data)
        else:
            for report in reports:
                if report.passed:
                    self.stdout.write(f"{report.name}: {report.cases} cases passed (seed {report.seed})")
                else:
                    self.stdout.write(f"{report.name}: FAILED on {format_expr(report.counterexample)}"
                                      if report.counterexample is not None else f"{report.name}: FAILED")
                    self.stdout.write(f"  {report.message}")
        failed = [report.name for report in reports if not report.passed]
        if failed:
            raise CommandError(f"suites failed: {', '.join(failed)}", returncode=1)
