import pytest
from hypothesis import given, strategies as st

from haarforge.delta import DeltaParameter
from haarforge.errors import DomainError


def test_coerce_forms():
    d = DeltaParameter(0.5, 0.3)
    assert DeltaParameter.coerce(d) is d
    assert DeltaParameter.coerce((0.5, 0.3)) == d
    assert DeltaParameter.coerce(0.5 + 0.3j) == d
    assert DeltaParameter.coerce(1) == DeltaParameter(1.0, 0.0)


@pytest.mark.parametrize("a", [-0.5, -1.0, float("nan")])
def test_rejects_non_integrable(a):
    with pytest.raises(DomainError):
        DeltaParameter(a)


@given(st.floats(-0.49, 5), st.floats(-5, 5))
def test_derived_quantities(a, b):
    d = DeltaParameter(a, b)
    assert d.value + d.conj == pytest.approx(d.s)
    assert d.conj == d.value.conjugate()


def test_str():
    assert str(DeltaParameter(0.5, -0.25)) == "0.5-0.25i"
