"""Shared hypothesis strategies over braid-closure diagrams."""

from hypothesis import strategies as st

from skeincount.diagram import braid_closure


@st.composite
def braid_words(draw, max_strands=4, max_len=7, min_len=0):
    n = draw(st.integers(1, max_strands))
    if n == 1:
        return n, []
    letters = st.integers(1, n - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    return n, draw(st.lists(letters, min_size=min_len, max_size=max_len))


def diagrams(**kw):
    return braid_words(**kw).map(lambda nw: braid_closure(*nw))


def nonempty_diagrams(**kw):
    return braid_words(min_len=1, **kw).filter(lambda nw: nw[0] > 1).map(lambda nw: braid_closure(*nw))
