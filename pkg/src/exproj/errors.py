class ConditionError(ValueError):
    """A documented precondition of a construction or formula does not hold.

    The message names the inequality that failed.
    """
