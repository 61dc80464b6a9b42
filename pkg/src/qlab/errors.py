"""Exception types shared across the package."""


class QlabError(Exception):
    """Base class for all package-specific errors."""


class RingMismatchError(QlabError):
    """Two series over different coefficient rings were combined."""


class NonInvertibleError(QlabError):
    """Constant term (or field element) has no inverse in its ring."""


class InexactDivisionError(QlabError):
    """An exact division left a nonzero remainder.

    For (1-z) divisions this signals a genuine pole at z=1, i.e. a wrong
    identity or a wrong convention upstream.
    """


class DivergenceError(QlabError):
    """A closed formula was requested outside its convergence region."""


class IndeterminateMagnitudeError(QlabError):
    """|x| is too close to 1 to decide convergence at working precision."""


class SingularEvaluationError(QlabError):
    """Evaluation point makes a factor vanish or a leading factor singular."""


class UnknownSeriesError(QlabError):
    """Series name not in the catalog."""


class UnknownSuiteError(QlabError):
    """Suite id not in the verification catalog."""
