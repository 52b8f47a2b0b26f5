import numpy as np
import pytest
from hypothesis import given, strategies as st

from checkerspec.ensemble import TIE_TOL, ScorePair, combine, combine_many
from checkerspec.errors import DomainError

prob = st.floats(0.0, 1.0)


@pytest.mark.parametrize("r_i,r_f,expected", [(0.9, 0.6, 0.9), (0.5, 0.2, 0.2), (0.3, 0.7, 0.5)])
def test_examples(r_i, r_f, expected):
    assert combine(ScorePair(r_i, r_f)) == expected


@pytest.mark.parametrize("r_i,r_f", [(-0.1, 0.5), (0.5, 1.01), (float("nan"), 0.5)])
def test_out_of_range(r_i, r_f):
    with pytest.raises(DomainError):
        ScorePair(r_i, r_f)


@given(prob, prob)
def test_invariants(a, b):
    r = combine(ScorePair(a, b))
    assert r in (a, b, (a + b) / 2)
    assert 0.0 <= r <= 1.0
    assert combine(ScorePair(b, a)) == r
    m_a, m_b = abs(a - 0.5), abs(b - 0.5)
    if abs(m_a - m_b) > TIE_TOL:
        assert r == (a if m_a > m_b else b)
        assert abs(r - 0.5) >= min(m_a, m_b)
    elif (a - 0.5) * (b - 0.5) >= 0:
        # same-side tie: the mean keeps the shared margin
        assert abs(r - 0.5) >= min(m_a, m_b) - TIE_TOL


def test_opposite_side_tie_is_neutral():
    # the tie rule gives up margin dominance here by design
    assert combine(ScorePair(0.25, 0.75)) == 0.5


@given(prob, prob)
def test_agreement_preserved(a, b):
    if (a > 0.5) == (b > 0.5):
        assert (combine(ScorePair(a, b)) > 0.5) == (a > 0.5)


@given(st.lists(st.tuples(prob, prob), min_size=1, max_size=30))
def test_vectorized_matches_scalar(pairs):
    a, b = np.array(pairs).T
    assert combine_many(a, b).tolist() == [combine(ScorePair(x, y)) for x, y in pairs]


def test_vectorized_domain():
    with pytest.raises(DomainError):
        combine_many([0.2], [1.5])
