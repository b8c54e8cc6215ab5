"""Exception hierarchy.

Input problems (bad format, bad parameters, capacity) derive from
``ValueError``; violations of identities that are theorems derive from
``ConsistencyError`` and always indicate a bug rather than bad input.
"""


class Graph6ParseError(ValueError):
    """Malformed graph6 text. Carries the byte offset of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class DisconnectedGraphError(ValueError):
    """The graph is not connected."""


class SizeCapError(ValueError):
    """A generator would exceed the configured vertex-count cap."""


class UnsupportedParameterError(ValueError):
    """A parameter outside the supported range (e.g. non-prime field size)."""


class ConsistencyError(RuntimeError):
    """An exact identity that must hold by theorem failed to hold."""


class DecompositionError(ConsistencyError):
    """The standard module could not be split into certified irreducibles."""


class ClassificationError(ConsistencyError):
    """A dimension cross-check failed during module classification."""

    def __init__(self, identity, detail=""):
        self.identity = identity
        msg = f"classification cross-check failed: {identity}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ProfileError(ConsistencyError):
    """A module's nonzero shells are not contiguous."""
