"""Exception types shared across the package."""


class SolverError(RuntimeError):
    """A numerical procedure failed (integration, bracketing, root count)."""

    def __init__(self, message, lam=None, index=None):
        super().__init__(message)
        self.lam = lam
        self.index = index


class CharacterizationError(ValueError):
    """Input sequences violate a necessary/sufficient solvability condition.

    ``condition`` labels the violated condition: ``"3"`` ordering of the
    periodic spectrum, ``"6"`` the max p >= 2 test, ``"9"`` Dirichlet
    ordering/asymptotics, ``"12"`` weight positivity, ``"21"``/``"23"`` the
    endpoint and sign facts of the symmetric case, ``"J"``/``"J1"`` sign
    sequence membership, ``"endpoint"`` a gamma_n inside an open gap.
    """

    def __init__(self, message, condition, index=None):
        super().__init__(message)
        self.condition = condition
        self.index = index


class NonSymmetricError(CharacterizationError):
    """A Dirichlet eigenvalue sits strictly inside an open gap."""

    def __init__(self, message, index=None):
        super().__init__(message, "endpoint", index)
