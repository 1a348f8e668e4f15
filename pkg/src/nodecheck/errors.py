"""Exception hierarchy shared across the package."""


class NodeCheckError(Exception):
    """Base class for all package errors."""


class GraphParseError(NodeCheckError):
    """Malformed graph document (syntax, duplicate ids, unknown nodes)."""


class SemanticsError(NodeCheckError):
    """Malformed semantics document or violated class invariant."""


class CtlParseError(NodeCheckError):
    """Malformed CTL formula or spec-request document."""


class TranslationError(NodeCheckError):
    """Graph cannot be compiled to a transition system."""


class OptimizeError(NodeCheckError):
    """Optimization pass failure."""


class EncodingNotApplicable(OptimizeError):
    """Node does not match the state-into-output encodable form."""


class EmitError(NodeCheckError):
    """Transition system cannot be serialized to SMV."""


class CheckError(NodeCheckError):
    """Spec evaluation failure (e.g. atom over an unknown variable/value)."""


class StateCapExceeded(NodeCheckError):
    """Reachable-state enumeration hit the configured cap."""

    def __init__(self, cap: int, explored: int):
        super().__init__(
            f"state space exceeds cap of {cap} states ({explored} explored); "
            "raise the cap or use the NuSMV engine"
        )
        self.cap = cap
        self.explored = explored


class NusmvError(NodeCheckError):
    """External NuSMV invocation failure."""


class NusmvMissing(NusmvError):
    """NuSMV binary not found or not executable."""


class NusmvTimeout(NusmvError):
    """NuSMV run exceeded the configured timeout."""

    def __init__(self, seconds: float):
        super().__init__(f"NuSMV did not finish within {seconds} s")
        self.seconds = seconds


class TraceParseError(NodeCheckError):
    """Malformed NuSMV output while extracting traces."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
