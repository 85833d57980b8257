"""Exception types shared across the package.

The CLI maps these to exit codes: ConfigError -> 2, NumericError -> 3,
OSError / DecodeError / CheckpointError on input files -> 4.
"""

from __future__ import annotations


class ConfigError(ValueError):
    def __init__(self, field: str, message: str, line: int | None = None):
        self.field = field
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{field}: {message}{where}")


class ActionError(ValueError):
    """An allocation that violates BS capacity or names unknown UEs/BSs."""


class NumericError(ArithmeticError):
    """NaN/Inf detected in parameters, gradients, losses or ratios."""


class ContractError(ValueError):
    """A caller broke a documented precondition (shapes, lengths, ranges)."""


class CheckpointError(ValueError):
    pass
