"""
Worked examples shared by the tests and the command line: expressions, chart
files and LLEE-witnesses for each collapse transformation.
"""
from .chart import load_chart
from .expr import parse_expr

E0 = 'a.((c.a + a.(b + b.a)) * 0)'
E1 = '(a.((a.(b + b.a)) * c)) * 0'
E2 = 'a.((c.a + a.((b.(a.((c.a) * a))) * b)) * 0)'

# Pairs proved equal through a common collapsed value
EQUAL_PAIRS = (
    ('(a.(a + b) + b) * 0', '(b.(a + b) + a) * 0'),
    (E1, E2),
)

SIMPLIFIED_S0 = 'a.((c.a + a.(b + b.a)) * 0)'

# Neither chart has a loop subchart, so loop elimination is stuck at once.
NO_TERMINATION = """\
# a-cycle between 0 and 1, both can escape to 2, which returns on a
start 0
trans 0 a 1
trans 0 b 2
trans 1 a 0
trans 1 c 2
trans 2 a 0
trans 2 a 1
"""

DOUBLE_EXIT = """\
start 0
tick 2
trans 0 a 1
trans 0 b 2
trans 1 a 0
trans 1 c 2
"""

# Bisimilar pair (1, 2) satisfies C1
TRANSFORM_ONE = """\
start 0
tick 7
trans 0 a 1 0
trans 0 a 2 0
trans 1 a 3 2
trans 1 c 7 0
trans 3 b 4 0
trans 3 d 1 0
trans 4 e 1 0
trans 2 a 5 1
trans 2 c 7 0
trans 5 b 6 0
trans 5 d 2 0
trans 6 e 2 0
"""

TRANSFORM_ONE_RESULT = """\
start 0
tick 7
trans 0 a 2 0
trans 2 a 5 1
trans 2 c 7 0
trans 5 b 6 0
trans 5 d 2 0
trans 6 e 2 0
"""

# Bisimilar pair (0, 3) satisfies C2: 3 loops back to 0
TRANSFORM_TWO = """\
start 0
trans 0 a 1 2
trans 0 a 2 2
trans 1 c 2 1
trans 1 b 0 0
trans 2 b 3 0
trans 2 c 1 0
trans 3 a 1 0
"""

TRANSFORM_TWO_RESULT = """\
start 3
trans 3 a 1 0
trans 1 c 2 1
trans 1 b 3 2
trans 2 b 3 0
trans 2 c 1 0
"""

# Bisimilar pair (1, 4) satisfies C3 with pivot 0, and so does (2, 5) afterwards
TRANSFORM_THREE = """\
start 0
trans 0 a 1 2
trans 0 a 4 2
trans 0 b 2 2
trans 0 b 5 2
trans 1 c 2 1
trans 1 d 0 0
trans 4 c 5 1
trans 4 d 0 0
trans 2 e 3 0
trans 2 f 1 0
trans 5 e 6 0
trans 5 f 4 0
trans 3 g 1 0
trans 6 g 4 0
"""

TRANSFORM_THREE_RESULT = """\
start 0
trans 0 a 4 2
trans 0 b 2 2
trans 0 b 5 2
trans 4 c 5 1
trans 4 d 0 0
trans 2 e 3 0
trans 2 f 4 0
trans 3 g 4 0
trans 5 e 6 0
trans 5 f 4 0
trans 6 g 4 0
"""

# Collapses in three steps (C1, C2, C3) to a witness of the chart of E0
THREE_STEP = """\
start 0
trans 0 a 2 0
trans 1 a 2 2
trans 2 a 3 1
trans 2 a 4 1
trans 2 c 1 0
trans 3 b 2 0
trans 3 b 5 0
trans 4 b 2 0
trans 4 b 5 0
trans 5 a 2 0
"""


def expr(text):
    return parse_expr(text)


def chart(text):
    return load_chart(text)
