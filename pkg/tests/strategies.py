"""Hypothesis strategies for maps, points and multipliers."""
from fractions import Fraction as F

from hypothesis import assume
from hypothesis import strategies as st

from critheight.dynmap import DegenerateMapError, make_map


def small_rationals(h: int = 10, nonzero: bool = False):
    s = st.builds(F, st.integers(-h, h), st.integers(1, h))
    return s.filter(lambda q: q != 0) if nonzero else s


@st.composite
def rat_maps(draw, degrees=(2, 3), h: int = 10):
    d = draw(st.sampled_from(degrees))
    num = draw(st.lists(st.integers(-h, h), min_size=d + 1, max_size=d + 1))
    den = draw(st.lists(st.integers(-h, h), min_size=d + 1, max_size=d + 1))
    assume(num[-1] != 0 or den[-1] != 0)
    try:
        return make_map(num, den)
    except DegenerateMapError:
        assume(False)


@st.composite
def mobius(draw, h: int = 5):
    m = draw(st.lists(st.integers(-h, h), min_size=4, max_size=4))
    assume(m[0] * m[3] - m[1] * m[2] != 0)
    return [[m[0], m[1]], [m[2], m[3]]]


@st.composite
def milnor_params(draw, h: int = 6):
    a = draw(small_rationals(h))
    b = draw(small_rationals(h))
    assume(a * b != 1)
    return a, b
