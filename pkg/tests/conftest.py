from fractions import Fraction

from hypothesis import settings, strategies as st

from dyadic_ptime.dyadic import Dyadic

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@st.composite
def dyadics(draw, max_bits=80, min_exp=-40, max_exp=20, nonneg=False):
    lo = 0 if nonneg else -(1 << max_bits)
    m = draw(st.integers(lo, 1 << max_bits))
    e = draw(st.integers(min_exp, max_exp))
    return Dyadic(m, e)


def frac(d):
    return d.to_fraction() if isinstance(d, Dyadic) else Fraction(d)
