"""Incremental construction of BBP certificates"""
from typing import NamedTuple, Optional

from ..exceptions import ProofConstructionError
from ..expr import Prod, Star, Sum, format_expr
from .certificate import AXIOMS, Certificate, Equation, ProofStep, axiom_instance, replace_at, subterm


class Derivation(NamedTuple):
    """lhs = rhs, proved by step `index`; index None means lhs and rhs are identical"""
    lhs: object
    rhs: object
    index: Optional[int] = None

    @property
    def trivial(self):
        return self.index is None


class ProofBuilder:
    """
    Collects proof steps in dependency order. Each method returns a
    Derivation; equal equations are proved once and shared.
    """

    def __init__(self):
        self.steps = []
        self._proved = {}

    def _add(self, eq, rule, subst=(), refs=(), path=''):
        if eq.lhs == eq.rhs:
            return Derivation(eq.lhs, eq.rhs)
        if eq in self._proved:
            return Derivation(eq.lhs, eq.rhs, self._proved[eq])
        idx = len(self.steps)
        self.steps.append(ProofStep(idx, eq, rule, tuple(subst), tuple(refs), path))
        self._proved[eq] = idx
        return Derivation(eq.lhs, eq.rhs, idx)

    def refl(self, e):
        return Derivation(e, e)

    def axiom(self, name, **subst):
        variables, _ = AXIOMS[name]
        eq = axiom_instance(name, subst)
        return self._add(eq, name, subst=tuple((var, subst[var]) for var in variables))

    def symm(self, d):
        if d.trivial:
            return d
        return self._add(Equation(d.rhs, d.lhs), 'SYMM', refs=(d.index,))

    def trans(self, first, second):
        if first.rhs != second.lhs:
            raise ProofConstructionError(
                f"cannot chain {format_expr(first.lhs)} = {format_expr(first.rhs)} "
                f"with {format_expr(second.lhs)} = {format_expr(second.rhs)}"
            )
        if first.trivial:
            return second
        if second.trivial:
            return first
        return self._add(Equation(first.lhs, second.rhs), 'TRANS', refs=(first.index, second.index))

    def chain(self, *derivations):
        result = derivations[0]
        for d in derivations[1:]:
            result = self.trans(result, d)
        return result

    def cong(self, context, path, d):
        """context = context[d.rhs at path], from d proving the subterm at path"""
        if subterm(context, path) != d.lhs:
            raise ProofConstructionError(f"no {format_expr(d.lhs)} at {path} of {format_expr(context)}")
        if d.trivial:
            return self.refl(context)
        return self._add(Equation(context, replace_at(context, path, d.rhs)), 'CONG', refs=(d.index,), path=path)

    def rsp(self, d):
        """From e = f.e + g conclude e = f * g"""
        unfolded = d.rhs
        if not (isinstance(unfolded, Sum) and isinstance(unfolded.left, Prod) and unfolded.left.right == d.lhs):
            raise ProofConstructionError(f"RSP needs e = f.e + g, got {format_expr(d.lhs)} = {format_expr(d.rhs)}")
        return self._add(Equation(d.lhs, Star(unfolded.left.left, unfolded.right)), 'RSP', refs=(d.index,))

    def adopt(self, cert):
        """Replay a certificate's steps here; returns the derivation of its goal"""
        replayed = []
        for step in cert.steps:
            lhs, rhs = step.eq
            if step.rule in AXIOMS:
                d = self.axiom(step.rule, **dict(step.subst))
            elif step.rule == 'REFL':
                d = self.refl(lhs)
            elif step.rule == 'SYMM':
                d = self.symm(replayed[step.refs[0]])
            elif step.rule == 'TRANS':
                d = self.trans(replayed[step.refs[0]], replayed[step.refs[1]])
            elif step.rule == 'CONG':
                d = self.cong(lhs, step.path, replayed[step.refs[0]])
            else:
                d = self.rsp(replayed[step.refs[0]])
            if (d.lhs, d.rhs) != (lhs, rhs):
                raise ProofConstructionError(f"step {step.idx} does not replay")
            replayed.append(d)
        goal = cert.goal
        if goal is None:
            raise ProofConstructionError("certificate has no goal")
        if replayed and (replayed[-1].lhs, replayed[-1].rhs) == tuple(goal):
            return replayed[-1]
        if goal.lhs == goal.rhs:
            return self.refl(goal.lhs)
        raise ProofConstructionError("certificate goal is not its last step")

    def certificate(self, d):
        """A stand-alone certificate for d, holding only the steps it depends on"""
        if d.trivial:
            eq = Equation(d.lhs, d.rhs)
            return Certificate((ProofStep(0, eq, 'REFL'),), eq)
        needed = set()
        todo = [d.index]
        while todo:
            i = todo.pop()
            if i in needed:
                continue
            needed.add(i)
            todo.extend(self.steps[i].refs)
        order = sorted(needed)
        number = {old: new for new, old in enumerate(order)}
        steps = []
        for old in order:
            step = self.steps[old]
            steps.append(ProofStep(number[old], step.eq, step.rule, step.subst,
                                   tuple(number[i] for i in step.refs), step.path))
        return Certificate(tuple(steps), Equation(d.lhs, d.rhs))
