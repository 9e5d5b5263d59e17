"""Exception hierarchy shared by every h3lab module."""


class H3Error(Exception):
    pass


class SizeLimitError(H3Error):
    """Input exceeds what an exact routine is allowed to attempt."""


class BudgetExceeded(H3Error):
    """A search ran out of nodes before finishing.

    Distinct from a negative answer: the question is still open.
    """

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class InvalidHomomorphism(H3Error):
    pass


class ConstructionFailed(H3Error):
    pass


class InfeasibleMode(H3Error):
    pass
