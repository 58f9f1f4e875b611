"""Exceptions raised across the package."""


class QGameError(Exception):
    """Base class for computational failures."""


class DegenerateGame(QGameError):
    pass


class BoundaryGame(QGameError):
    """The game sits on a classification plane.

    ``adjacent`` holds the class ids reachable by an arbitrarily small
    perturbation.
    """

    def __init__(self, message, adjacent=()):
        super().__init__(message)
        self.adjacent = tuple(sorted(adjacent))


class InvalidChi(QGameError):
    pass


class SingularFormulation(QGameError):
    pass


class DegenerateCritical(QGameError):
    """The response matrix is rank deficient.

    ``null_directions`` are the right singular vectors whose singular
    values fell under the threshold.
    """

    def __init__(self, message, null_directions=None):
        super().__init__(message)
        self.null_directions = null_directions


class NonConvergence(QGameError):
    pass
