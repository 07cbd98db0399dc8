import pytest
from hypothesis import strategies as st

from lacunar import classb

F1 = classb.make(5, [9, 15])
F2 = classb.make(5, [9, 18])
N12_SHORT = classb.make(12, [23, 35])
N12_LONG = classb.make(12, [250, 385])
N37 = classb.make(37, [81, 140, 184, 232, 285, 350, 389, 450, 590, 649])
N81 = classb.make(81, [165, 250])
N121 = classb.make(121, [250, 385])
N481 = classb.make(481, [985, 1502])

GOLDEN = (F1, F2, N12_SHORT, N12_LONG, N37, N81, N121, N481)


@pytest.fixture
def f1():
    return F1


@pytest.fixture
def f2():
    return F2


@st.composite
def classb_polys(draw, n_max=40, s_max=4):
    n = draw(st.integers(2, n_max))
    exps, last = [], n
    for _ in range(draw(st.integers(0, s_max))):
        last = last + n - 1 + draw(st.integers(0, 2 * n))
        exps.append(last)
    return classb.make(n, exps)
