import random

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from nilinv.exact import Matrix, NilTuple
from nilinv.span import random_nilpotent


@pytest.fixture
def rng():
    return random.Random(20240601)


small_ints = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw, n=3):
    return Matrix([[draw(small_ints) for _ in range(n)] for _ in range(n)])


@st.composite
def invertible(draw, n=3):
    m = draw(matrices(n))
    assume(m.det() != 0)
    return m


@st.composite
def nilpotents(draw, n=3):
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return random_nilpotent(random.Random(seed), n)


@st.composite
def nil_tuples(draw, d=3, n=3):
    seed = draw(st.integers(min_value=0, max_value=2**32))
    r = random.Random(seed)
    return NilTuple(tuple(random_nilpotent(r, n) for _ in range(d)))
