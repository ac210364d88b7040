"""
Reusable derivation patterns: sums modulo associativity, commutativity and
idempotence, right distribution over sums, and rewriting the summands of a sum.
"""
from ..exceptions import ProofConstructionError
from ..expr import ZERO, Act, Prod, Star, Sum, Zero, big_sum, format_expr
from ..interp import TICK, action_derivatives


def summands(e):
    """Leaves of the sum tree of e, left to right"""
    if isinstance(e, Sum):
        return summands(e.left) + summands(e.right)
    return [e]


def aci_normal_form(e):
    """Right-nested sum of the distinct nonzero summands of e sorted by print; 0 if none"""
    terms = sorted({t for t in summands(e) if not isinstance(t, Zero)}, key=format_expr)
    if not terms:
        return ZERO
    result = terms[-1]
    for term in reversed(terms[:-1]):
        result = Sum(term, result)
    return result


def _insert(b, a, normal):
    """a + normal = normal form, for a single nonzero summand a"""
    if normal == ZERO:
        return b.axiom('B6', x=a)
    head, rest = (normal.left, normal.right) if isinstance(normal, Sum) else (normal, None)
    ka, kh = format_expr(a), format_expr(head)
    if rest is None:
        if a == head:
            return b.axiom('B3', x=a)
        if ka < kh:
            return b.refl(Sum(a, normal))
        return b.axiom('B1', x=a, y=head)
    if a == head:
        regroup = b.symm(b.axiom('B2', x=a, y=a, z=rest))
        return b.trans(regroup, b.cong(regroup.rhs, 'L', b.axiom('B3', x=a)))
    if ka < kh:
        return b.refl(Sum(a, normal))
    regroup = b.symm(b.axiom('B2', x=a, y=head, z=rest))
    swap = b.cong(regroup.rhs, 'L', b.axiom('B1', x=a, y=head))
    ungroup = b.axiom('B2', x=head, y=a, z=rest)
    moved = b.chain(regroup, swap, ungroup)
    return b.trans(moved, b.cong(moved.rhs, 'R', _insert(b, a, rest)))


def _merge(b, first, second):
    """first + second = normal form, for two normal forms"""
    if first == ZERO:
        swap = b.axiom('B1', x=ZERO, y=second)
        return b.trans(swap, b.axiom('B6', x=second))
    if second == ZERO:
        return b.axiom('B6', x=first)
    if isinstance(first, Sum):
        head, rest = first.left, first.right
        regroup = b.axiom('B2', x=head, y=rest, z=second)
        merged = b.trans(regroup, b.cong(regroup.rhs, 'R', _merge(b, rest, second)))
        return b.trans(merged, _insert(b, head, merged.rhs.right))
    return _insert(b, first, second)


def normalize(b, e):
    """e = aci_normal_form(e)"""
    if not isinstance(e, Sum):
        return b.refl(e)
    left = normalize(b, e.left)
    step = b.cong(e, 'L', left)
    right = normalize(b, e.right)
    step = b.trans(step, b.cong(step.rhs, 'R', right))
    result = b.trans(step, _merge(b, left.rhs, right.rhs))
    assert result.rhs == aci_normal_form(e), format_expr(e)
    return result


def prove_aci(b, e, f):
    """e = f for sums with the same set of nonzero summands"""
    left, right = normalize(b, e), normalize(b, f)
    if left.rhs != right.rhs:
        raise ProofConstructionError(f"{format_expr(e)} and {format_expr(f)} differ beyond ACI")
    return b.trans(left, b.symm(right))


def distribute(b, e, assoc=True):
    """
    (s1 + ... + sn).z = s1.z + ... + sn.z for e = s.z, keeping the shape of
    the sum tree. 0.z becomes 0; with assoc, (a.x).z becomes a.(x.z).
    """
    if not isinstance(e, Prod):
        raise ProofConstructionError(f"cannot distribute over {format_expr(e)}")
    s, z = e.left, e.right
    if isinstance(s, Sum):
        split = b.axiom('B4', x=s.left, y=s.right, z=z)
        left = b.trans(split, b.cong(split.rhs, 'L', distribute(b, split.rhs.left, assoc)))
        return b.trans(left, b.cong(left.rhs, 'R', distribute(b, left.rhs.right, assoc)))
    if s == ZERO:
        return b.axiom('B7', x=z)
    if assoc and isinstance(s, Prod):
        return b.axiom('B5', x=s.left, y=s.right, z=z)
    return b.refl(e)


def map_summands(b, e, rewrites):
    """Rewrite the summand leaves of e in order; rewrites yields one derivation function per leaf"""
    rewrites = iter(rewrites)

    def walk(term):
        if not isinstance(term, Sum):
            return next(rewrites)(term)
        step = b.cong(term, 'L', walk(term.left))
        return b.trans(step, b.cong(step.rhs, 'R', walk(step.rhs.right)))

    result = walk(e)
    if next(rewrites, None) is not None:
        raise ProofConstructionError("more rewrites than summands")
    return result


def _raw_expansion(b, e):
    """e = a sum tree of its derivative summands (a for a -> √, b.f for b -> f) and zeros"""
    if isinstance(e, (Zero, Act)):
        return b.refl(e)
    if isinstance(e, Sum):
        step = b.cong(e, 'L', _raw_expansion(b, e.left))
        return b.trans(step, b.cong(step.rhs, 'R', _raw_expansion(b, e.right)))
    if isinstance(e, Prod):
        step = b.cong(e, 'L', _raw_expansion(b, e.left))
        return b.trans(step, distribute(b, step.rhs))
    unfold = b.symm(b.axiom('BKS1', x=e.body, y=e.exit))
    body = b.trans(unfold, b.cong(unfold.rhs, 'LL', _raw_expansion(b, e.body)))
    spread = b.trans(body, b.cong(body.rhs, 'L', distribute(b, body.rhs.left)))
    return b.trans(spread, b.cong(spread.rhs, 'R', _raw_expansion(b, e.exit)))


def expansion(e):
    """(sum of a for e -a-> √) + (sum of b.f for e -b-> f) in derivative order"""
    done = []
    onward = []
    for action, target in action_derivatives(e):
        if target is TICK:
            done.append(Act(action))
        else:
            onward.append(Prod(Act(action), target))
    return Sum(big_sum(done), big_sum(onward))


def derive_ft(b, e):
    """e = expansion(e), by structural induction on e"""
    raw = _raw_expansion(b, e)
    return b.trans(raw, prove_aci(b, raw.rhs, expansion(e)))
