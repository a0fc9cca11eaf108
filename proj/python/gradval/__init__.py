"""Valuations on groupoid-graded skewfields.

    >>> import gradval
    >>> s = gradval.load("corpus/m2-full.toml")
    >>> gradval.Valuation(s.subring).value(s.element("25*e11 + 1/5*e12 + 3*e22"))
    '[e11]: (e11, -1)'
"""

from ._core import (
    Element,
    GradvalError,
    Pattern,
    Scenario,
    Skewfield,
    Valuation,
    __version__,
    all_checks,
    check,
    examples,
    load,
    parse,
    reproduce,
    subring,
)

__all__ = [
    "Element",
    "GradvalError",
    "Pattern",
    "Scenario",
    "Skewfield",
    "Valuation",
    "all_checks",
    "check",
    "examples",
    "load",
    "parse",
    "reproduce",
    "subring",
]
