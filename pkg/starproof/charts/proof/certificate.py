"""
Equational certificates for the proof system BBP and their checker.

File format, one step per line::

    <idx> | <RULE> | <args> | <lhs> | <rhs>
    ...
    goal <lhs> = <rhs>

args: `x=<e>; y=<e>` for axioms, `-` for REFL, `i` for SYMM and RSP,
`i j` for TRANS and `<path> i` for CONG, where path walks L/R into the term
(for a star, L is the body and R the exit).
"""
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from ..exceptions import CertificateFormatError, ExprSyntaxError
from ..expr import ZERO, Prod, Star, Sum, format_expr, parse_expr, rebuild

AXIOMS = {
    'B1': (('x', 'y'), lambda x, y: (Sum(x, y), Sum(y, x))),
    'B2': (('x', 'y', 'z'), lambda x, y, z: (Sum(Sum(x, y), z), Sum(x, Sum(y, z)))),
    'B3': (('x',), lambda x: (Sum(x, x), x)),
    'B4': (('x', 'y', 'z'), lambda x, y, z: (Prod(Sum(x, y), z), Sum(Prod(x, z), Prod(y, z)))),
    'B5': (('x', 'y', 'z'), lambda x, y, z: (Prod(Prod(x, y), z), Prod(x, Prod(y, z)))),
    'B6': (('x',), lambda x: (Sum(x, ZERO), x)),
    'B7': (('x',), lambda x: (Prod(ZERO, x), ZERO)),
    'BKS1': (('x', 'y'), lambda x, y: (Sum(Prod(x, Star(x, y)), y), Star(x, y))),
    'BKS2': (('x', 'y', 'z'), lambda x, y, z: (Prod(Star(x, y), z), Star(x, Prod(y, z)))),
}
RULES = tuple(AXIOMS) + ('REFL', 'SYMM', 'TRANS', 'CONG', 'RSP')


class Equation(NamedTuple):
    lhs: object
    rhs: object

    def __str__(self):
        return f"{format_expr(self.lhs)} = {format_expr(self.rhs)}"


@dataclass(frozen=True)
class ProofStep:
    idx: int
    eq: Equation
    rule: str
    subst: tuple = ()  # ((var, expr), ...) for axioms
    refs: tuple = ()
    path: str = ''

    def args(self):
        if self.rule in AXIOMS:
            return '; '.join(f"{var}={format_expr(e)}" for var, e in self.subst)
        if self.rule == 'REFL':
            return '-'
        if self.rule == 'CONG':
            return f"{self.path} {self.refs[0]}"
        return ' '.join(str(i) for i in self.refs)


@dataclass(frozen=True)
class Certificate:
    steps: tuple
    goal: Optional[Equation]

    def __len__(self):
        return len(self.steps)

    def count(self, rule):
        return sum(1 for step in self.steps if step.rule == rule)


class CheckResult(NamedTuple):
    ok: bool
    index: Optional[int] = None
    reason: str = ''


@dataclass(frozen=True)
class ProvableSolution:
    """Vertex values of a chart with certificates for the solution condition at every vertex"""
    chart: object
    values: dict
    certificates: dict = field(compare=False)

    @property
    def principal_value(self):
        return self.values[self.chart.start]


def axiom_instance(name, subst):
    variables, schema = AXIOMS[name]
    return Equation(*schema(*(subst[var] for var in variables)))


def subterm(e, path):
    """The subterm of e at an L/R path, or None if the path leaves the term"""
    for step in path:
        children = e.children()
        if not children:
            return None
        e = children[0] if step == 'L' else children[1]
    return e


def replace_at(e, path, new):
    if not path:
        return new
    left, right = e.children()
    if path[0] == 'L':
        return rebuild(e, (replace_at(left, path[1:], new), right))
    return rebuild(e, (left, replace_at(right, path[1:], new)))


def _check_step(steps, k, step):
    """Reason the k-th step is invalid, or '' when it checks"""
    if step.idx != k:
        return f"step numbered {step.idx} at position {k}"
    if step.rule not in RULES:
        return f"unknown rule {step.rule}"
    for i in step.refs:
        if not 0 <= i < k:
            return f"reference {i} does not point to an earlier step"
    lhs, rhs = step.eq
    if step.rule in AXIOMS:
        variables, _ = AXIOMS[step.rule]
        subst = dict(step.subst)
        if sorted(subst) != sorted(variables) or len(subst) != len(step.subst):
            return f"{step.rule} binds {', '.join(variables)}"
        if axiom_instance(step.rule, subst) != step.eq:
            return f"not an instance of {step.rule}"
        return ''
    if step.rule == 'REFL':
        return '' if lhs == rhs else "REFL with different sides"
    premise = [steps[i].eq for i in step.refs]
    if step.rule == 'SYMM':
        if len(premise) != 1:
            return "SYMM takes one premise"
        return '' if premise[0] == Equation(rhs, lhs) else "SYMM premise is not the reversed equation"
    if step.rule == 'TRANS':
        if len(premise) != 2:
            return "TRANS takes two premises"
        first, second = premise
        if first.lhs != lhs or first.rhs != second.lhs or second.rhs != rhs:
            return "TRANS premises do not chain"
        return ''
    if step.rule == 'CONG':
        if len(premise) != 1 or not step.path or set(step.path) - {'L', 'R'}:
            return "CONG takes a nonempty L/R path and one premise"
        inner = premise[0]
        if subterm(lhs, step.path) != inner.lhs or subterm(rhs, step.path) != inner.rhs:
            return "CONG premise does not match the subterms at the path"
        if replace_at(lhs, step.path, inner.rhs) != rhs:
            return "CONG sides differ outside the path"
        return ''
    # RSP: from e = f.e + g conclude e = f * g
    if len(premise) != 1:
        return "RSP takes one premise"
    inner = premise[0]
    unfolded = inner.rhs
    if inner.lhs != lhs or not isinstance(unfolded, Sum) or not isinstance(unfolded.left, Prod):
        return "RSP premise must read e = f.e + g"
    if unfolded.left.right != lhs:
        return "RSP premise must read e = f.e + g"
    if rhs != Star(unfolded.left.left, unfolded.right):
        return "RSP conclusion must be e = f * g"
    return ''


def check_certificate(cert):
    """Check every step in one pass; report the first failing index and why"""
    steps = cert.steps
    for k, step in enumerate(steps):
        reason = _check_step(steps, k, step)
        if reason:
            return CheckResult(False, k, reason)
    if cert.goal is None:
        return CheckResult(False, len(steps), "missing goal")
    if not steps:
        if cert.goal.lhs == cert.goal.rhs:
            return CheckResult(True)
        return CheckResult(False, 0, "empty certificate for a non-reflexive goal")
    if steps[-1].eq != cert.goal:
        return CheckResult(False, len(steps), "goal differs from the last step")
    return CheckResult(True)


# Files

def save_certificate(cert):
    lines = [
        f"{step.idx} | {step.rule} | {step.args()} | {format_expr(step.eq.lhs)} | {format_expr(step.eq.rhs)}"
        for step in cert.steps
    ]
    if cert.goal is not None:
        lines.append(f"goal {cert.goal}")
    return '\n'.join(lines) + '\n'


def _expr(text, lineno):
    try:
        return parse_expr(text)
    except ExprSyntaxError as exc:
        raise CertificateFormatError(f"bad expression {text!r}: {exc}", lineno)


def _ints(words, lineno):
    try:
        return tuple(int(w) for w in words)
    except ValueError:
        raise CertificateFormatError(f"bad step references {' '.join(words)!r}", lineno)


def _parse_args(rule, args, lineno):
    """(subst, refs, path) from the args field"""
    if rule in AXIOMS:
        subst = []
        for binding in filter(None, (part.strip() for part in args.split(';'))):
            var, sep, text = binding.partition('=')
            if not sep:
                raise CertificateFormatError(f"expected var=<expr>, got {binding!r}", lineno)
            subst.append((var.strip(), _expr(text, lineno)))
        return tuple(subst), (), ''
    if rule == 'REFL':
        return (), (), ''
    words = args.split()
    if rule == 'CONG':
        if len(words) != 2:
            raise CertificateFormatError("CONG args are '<path> <i>'", lineno)
        return (), _ints(words[1:], lineno), words[0]
    return (), _ints(words, lineno), ''


def load_certificate(text):
    steps = []
    goal = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if goal is not None:
            raise CertificateFormatError("text after the goal line", lineno)
        if line.startswith('goal '):
            lhs, sep, rhs = line[len('goal '):].partition(' = ')
            if not sep:
                raise CertificateFormatError("goal line must read 'goal <lhs> = <rhs>'", lineno)
            goal = Equation(_expr(lhs, lineno), _expr(rhs, lineno))
            continue
        fields = [part.strip() for part in line.split('|')]
        if len(fields) != 5:
            raise CertificateFormatError("expected 'idx | RULE | args | lhs | rhs'", lineno)
        idx, rule, args, lhs, rhs = fields
        if rule not in RULES:
            raise CertificateFormatError(f"unknown rule {rule!r}", lineno)
        (number,) = _ints([idx], lineno)
        subst, refs, path = _parse_args(rule, args, lineno)
        steps.append(ProofStep(number, Equation(_expr(lhs, lineno), _expr(rhs, lineno)),
                               rule, subst, refs, path))
    return Certificate(tuple(steps), goal)
