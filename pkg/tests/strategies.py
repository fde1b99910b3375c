import numpy as np
from hypothesis import strategies as st

from roughrank.table import DecisionTable


@st.composite
def tables(draw, min_rows=1, max_rows=30, max_attrs=4, max_levels=4):
    n = draw(st.integers(min_rows, max_rows))
    k = draw(st.integers(1, max_attrs))
    cols = {}
    for j in range(k):
        lv = draw(st.integers(1, max_levels))
        cols[f"a{j}"] = draw(st.lists(st.integers(0, lv - 1), min_size=n, max_size=n))
    decision = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    return DecisionTable.from_columns(cols, np.array(decision))


@st.composite
def permutations_of(draw, n):
    return np.array(draw(st.permutations(list(range(n)))), dtype=np.intp)
