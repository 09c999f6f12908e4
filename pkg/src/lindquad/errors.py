# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Exceptions raised by the library, each one with a machine readable code."""

from typing import ClassVar


class LindquadError(Exception):
    """Base class of all the errors of the program.

    Attributes:
        code: A short machine readable identifier of the error kind.
        exit_status: The status the process should exit with when the error is not handled.
    """

    code: ClassVar[str] = "error"
    exit_status: ClassVar[int] = 3


class DimensionError(LindquadError):
    """A matrix has the wrong shape for the requested operation."""

    code = "dimension"
    exit_status = 2


class SpecValidationError(LindquadError):
    """A system specification breaks one or more of its invariants.

    Attributes:
        violations: Human readable description of every violated invariant.
    """

    code = "invalid-spec"
    exit_status = 2

    def __init__(self, violations: list[str]) -> None:
        """Constructor of the error.

        Args:
            violations: The violated invariants.
        """

        super().__init__("; ".join(violations))
        self.violations = violations


class ConfigError(LindquadError):
    """The job configuration is malformed."""

    code = "config"
    exit_status = 2


class ExportError(LindquadError):
    """An artifact could not be written."""

    code = "export"
    exit_status = 2


class NumericalError(LindquadError):
    """A numerical routine failed or produced a result outside of its tolerance."""

    code = "numerical"


class StabilityError(NumericalError):
    """A matrix expected to be stable has an eigenvalue with a nonnegative real part."""

    code = "unstable"


class ExceptionalPointError(NumericalError):
    """The effective Hamiltonian is defective, so eigenmode based paths are not available."""

    code = "exceptional-point"


class TruncationError(NumericalError):
    """The truncated Fock space is too small for the requested accuracy.

    Attributes:
        leakage: The measured weight lost to the truncation, when known.
    """

    code = "truncation"

    def __init__(self, message: str, leakage: float | None = None) -> None:
        """Constructor of the error.

        Args:
            message: The description of the failure.
            leakage: The measured weight lost to the truncation.
        """

        super().__init__(message)
        self.leakage = leakage


class InvariantViolation(LindquadError):
    """A checked property does not hold."""

    code = "invariant"
    exit_status = 1
