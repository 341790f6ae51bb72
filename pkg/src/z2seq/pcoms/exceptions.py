# SPDX-License-Identifier: Apache-2.0


class PComsError(Exception):
    """
    Parent class for all of z2seq-pcoms exceptions
    """


class InvalidSequenceError(PComsError):
    """
    Error raised when text cannot be parsed as a +/- sequence

    Attributes
        message     error message to be printed on raise
        text        the rejected input
        reason      what was wrong with it
    """

    def __init__(self, text, reason) -> None:
        super().__init__()
        self.text = text
        self.reason = reason
        self.message = f"Invalid sequence '{text}': {reason}"


class NonCoprimeDecimationError(PComsError):
    """
    Error raised when a decimation index shares a factor with the period

    Attributes
        message     error message to be printed on raise
        k           decimation index
        n           sequence period
    """

    def __init__(self, k, n) -> None:
        super().__init__()
        self.k = k
        self.n = n
        self.message = f"Decimation by {k} is not a permutation of Z_{n}: gcd({k}, {n}) != 1"


class DegenerateRunError(PComsError):
    """
    Error raised when a run-structure operation receives a constant sequence

    Attributes
        message     error message to be printed on raise
        sequence    the constant sequence, as text
    """

    def __init__(self, sequence) -> None:
        super().__init__()
        self.sequence = sequence
        self.message = f"Constant sequence '{sequence}' has no run decomposition"


class MixedPeriodError(PComsError):
    """
    Error raised when family members do not share one period

    Attributes
        message     error message to be printed on raise
        periods     the distinct periods found
    """

    def __init__(self, periods) -> None:
        super().__init__()
        self.periods = sorted(set(periods))
        self.message = f"Family members have mixed periods: {self.periods}"


class InvalidParameterError(PComsError):
    """
    Error raised when a numeric parameter violates an operation's precondition

    Attributes
        message     error message to be printed on raise
        name        parameter name
        value       supplied value
        reason      violated precondition
    """

    def __init__(self, name, value, reason) -> None:
        super().__init__()
        self.name = name
        self.value = value
        self.reason = reason
        self.message = f"Invalid {name}={value!r}: {reason}"


class SearchLimitError(PComsError):
    """
    Error raised when a family search is refused or aborted for exceeding its limits

    Attributes
        message     error message to be printed on raise
        n           requested period
        q_max       requested maximum family size
        estimate    estimated number of candidate subsets (or nodes visited)
        limit       the limit that was exceeded
    """

    def __init__(self, n, q_max, estimate, limit) -> None:
        super().__init__()
        self.n = n
        self.q_max = q_max
        self.estimate = estimate
        self.limit = limit
        self.message = (
            f"Search for n={n}, q_max={q_max} refused: estimated cost {estimate} "
            f"exceeds limit {limit}"
        )


class InvalidShardCountError(PComsError):
    """
    Error raised when shards isn't an int or "auto"

    Attributes
        message     error message to be printed on raise
        shards      shards specified
    """

    def __init__(self, shards) -> None:
        super().__init__()
        self.shards = shards
        self.message = f"Invalid shards '{shards}' specified. Valid values are positive integers or 'auto'."


class MatrixFormatError(PComsError):
    """
    Error raised when a matrix file cannot be read as a +/- matrix

    Attributes
        message     error message to be printed on raise
        path        filepath of the matrix
        reason      root cause
    """

    def __init__(self, path, reason) -> None:
        super().__init__()
        self.path = path
        self.reason = reason
        self.message = f"Matrix at {path} is invalid: {reason}"


class NotCompatibleError(PComsError):
    """
    Error raised when sequences handed to a matrix construction do not have
    the required constant autocorrelation sum

    Attributes
        message     error message to be printed on raise
        k           first shift where the sum differs
        value       sum observed at shift k
        expected    required constant
    """

    def __init__(self, k, value, expected) -> None:
        super().__init__()
        self.k = k
        self.value = value
        self.expected = expected
        self.message = (
            f"Autocorrelation sum at shift {k} is {value}, expected {expected}"
        )
