"""Exception hierarchy shared by all kirbylab modules.

Every domain error derives from :class:`KirbyLabError` so that front ends can
separate domain failures (exit code 1) from usage mistakes (exit code 2).
"""


class KirbyLabError(Exception):
    """Base class for all domain errors raised by kirbylab."""


class AxiomFailed(KirbyLabError):
    """An algebraic identity that should hold exactly does not."""

    def __init__(self, name, detail=""):
        self.name = name
        msg = f"axiom failed: {name}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)
