"""Small helpers shared between test modules."""

from fractions import Fraction

from arnoldtongues import trace_curve


def locate_edge(kind, r, b, tol=1e-8):
    """a-position of one boundary curve at a single b, via a one-sample trace."""
    curve = trace_curve(kind, Fraction(r), (b, b), step=1.0, tol=tol)
    assert len(curve.samples) == 1
    return curve.samples[0][1]
