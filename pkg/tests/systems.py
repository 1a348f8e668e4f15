"""Hand-built fixture systems shared across test modules."""

from __future__ import annotations

from nodecheck.ir import (
    CtlAF,
    CtlAG,
    CtlAtom,
    TransitionRule,
    TransitionSystem,
    Variable,
)
from nodecheck.semantics import Atom, Guard, HOLD, RuleList, ValueChoice


def sw_system() -> TransitionSystem:
    """One variable flipping on -> off, then holding; spec AG (AF sw = on)."""
    return TransitionSystem(
        variables=(Variable("sw", ("on", "off"), ("on", "off")),),
        rules=(
            TransitionRule(
                "sw",
                RuleList(
                    ((Guard(((Atom("sw", "on"),),)), ValueChoice(("off",))),),
                    HOLD,
                ),
            ),
        ),
        specs=(CtlAG(CtlAF(CtlAtom("sw", "on"))),),
    )


def empty_system() -> TransitionSystem:
    return TransitionSystem(variables=(), rules=())
