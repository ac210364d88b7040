"""
Chart interpretation of star expressions, plain and entry/body-labeled.

Both interpretations come from one labeled derivative function, so the
labeled chart always has the plain chart underneath it.
"""
from collections import deque
from functools import lru_cache
from typing import NamedTuple, Union

from .chart import Chart, LabeledChart, Transition
from .expr import Act, Prod, Star, StarExpr, Sum, Zero, format_expr, star_height


class _Tick:
    """The termination target √ of a derivative"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return '√'

    __str__ = __repr__


TICK = _Tick()


class Derivative(NamedTuple):
    action: str
    target: Union[StarExpr, _Tick]


class Interpretation(NamedTuple):
    chart: Chart
    ids: dict


def _target_key(target):
    return '' if target is TICK else format_expr(target)


@lru_cache(maxsize=65536)
def normed_structural(e):
    """normed(0)=F, normed(a)=T, sum: or, product: and, star: normed(exit)"""
    if isinstance(e, Zero):
        return False
    if isinstance(e, Act):
        return True
    if isinstance(e, Sum):
        return normed_structural(e.left) or normed_structural(e.right)
    if isinstance(e, Prod):
        return normed_structural(e.left) and normed_structural(e.right)
    return normed_structural(e.exit)


@lru_cache(maxsize=65536)
def _labeled_steps(e):
    steps = {}

    def add(action, target, level):
        key = (action, target)
        steps[key] = max(level, steps.get(key, 0))

    if isinstance(e, Act):
        add(e.name, TICK, 0)
    elif isinstance(e, Sum):
        for part in (e.left, e.right):
            for action, target in _labeled_steps(part):
                add(action, target, 0)
    elif isinstance(e, Prod):
        for (action, target), level in _labeled_steps(e.left).items():
            if target is TICK:
                add(action, e.right, 0)
            else:
                add(action, Prod(target, e.right), level)
    elif isinstance(e, Star):
        loop_level = star_height(e.body) + 1
        iterates = normed_structural(e.body)
        for action, target in _labeled_steps(e.body):
            if target is TICK:
                add(action, e, loop_level)
            else:
                add(action, Prod(target, e), loop_level if iterates else 0)
        for action, target in _labeled_steps(e.exit):
            add(action, target, 0)
    return steps


def labeled_derivatives(e):
    """(action, target, level) triples in canonical derivative order"""
    steps = _labeled_steps(e)
    ordered = sorted(steps, key=lambda key: (key[0], _target_key(key[1])))
    return tuple((action, target, steps[(action, target)]) for action, target in ordered)


def action_derivatives(e):
    """The derivatives <a, xi> of e, ordered by action name, then target print (√ first)"""
    return tuple(Derivative(action, target) for action, target, _ in labeled_derivatives(e))


def _explore(e):
    ids = {e: 0}
    tick = None
    levels = {}
    queue = deque([e])
    while queue:
        current = queue.popleft()
        for action, target, level in labeled_derivatives(current):
            if target is TICK:
                if tick is None:
                    tick = len(ids)
                    ids[TICK] = tick
                tgt = tick
            else:
                if target not in ids:
                    ids[target] = len(ids)
                    queue.append(target)
                tgt = ids[target]
            levels[Transition(ids[current], action, tgt)] = level
    captions = {vid: format_expr(x) for x, vid in ids.items() if x is not TICK}
    chart = Chart(start=0, transitions=list(levels), tick=tick, vertices=set(ids.values()), captions=captions)
    expr_ids = {x: vid for x, vid in ids.items() if x is not TICK}
    return chart, expr_ids, levels


def interpret(e):
    """C(e) with vertex ids in breadth-first discovery order, plus the expression -> id map"""
    chart, ids, _ = _explore(e)
    return Interpretation(chart, ids)


def interpret_labeled(e):
    """The entry/body-labeled interpretation of e"""
    chart, _, levels = _explore(e)
    return LabeledChart(chart, levels)


def is_normed(e):
    """√ is reachable from e in C(e)"""
    return interpret(e).chart.tick is not None
