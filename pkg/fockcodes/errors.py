# errors.py - Exception types raised by fockcodes
#
# Copyright (c) [2026] PyFockCodes contributors. All rights reserved.
# This file is part of PyFockCodes.
# PyFockCodes is free software: you can redistribute it and/or modify
# it under the terms of the MIT License. You should have received a copy of
# the MIT License along with PyFockCodes.
# If not, see <https://opensource.org/licenses/MIT>.
#


class CapExceededError(ValueError):
    """ Raised when an enumeration or a dense build exceeds its size cap """

    def __init__(self, what: str, size: int, cap: int, advice: str = None):
        self.what = what
        self.size = size
        self.cap = cap
        msg = "{} has size {} which exceeds the cap {}.".format(what, size, cap)
        if advice:
            msg = "{} {}".format(msg, advice)
        super().__init__(msg)


class InconclusiveError(ValueError):
    """ Raised when a check can neither prove nor refute its property """
    pass


class OrthogonalityError(ValueError):
    """ Raised when a code violates the orthogonality conditions.
        The offending configuration is stored in `witness`.
    """

    def __init__(self, witness):
        self.witness = witness
        super().__init__("Orthogonality violated: {}".format(witness))


class ConvergenceError(ArithmeticError):
    """ Raised when a numerical routine misses its tolerance """

    def __init__(self, what: str, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__("{} did not converge: residual {:.3e} > tol {:.3e}".format(
            what, residual, tol))


class OracleViolation(AssertionError):
    """ Raised when a brute-force check breaches its tolerance """

    def __init__(self, failures: list):
        self.failures = list(failures)
        super().__init__("Oracle violations: " + "; ".join(self.failures))
