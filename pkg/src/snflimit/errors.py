"""Exception hierarchy.

Everything raised on purpose derives from :class:`SnfLimitError`.  The two
intermediate classes decide the CLI exit code: :class:`InputError` maps to 1,
:class:`NumericError` to 2.
"""

from __future__ import annotations

from fractions import Fraction


class SnfLimitError(Exception):
    pass


class InputError(SnfLimitError):
    pass


class NumericError(SnfLimitError):
    pass


class OrdOfZero(InputError, ValueError):
    def __init__(self, message: str = "ord of the zero series is undefined", index: int | None = None):
        super().__init__(message if index is None else f"{message} (component {index})")
        self.index = index


class DivisionByZeroSeries(InputError, ZeroDivisionError):
    pass


class PrecisionExhausted(NumericError):
    """All known coefficients cancelled.

    ``bound`` is the exponent where the known window ended: the true value is
    either zero or has valuation at least ``bound``.
    """

    def __init__(self, message: str, bound: Fraction | None = None):
        super().__init__(message)
        self.bound = bound


class SingularInput(InputError):
    pass


class NoConvergence(NumericError):
    pass


class NotHermitian(InputError):
    pass


class ZeroVector(InputError):
    pass


class ZeroSingularValue(NumericError):
    def __init__(self, index: int):
        super().__init__(f"singular value d_{index + 1} is exactly zero; log_t undefined")
        self.index = index


class NotUnit(InputError):
    pass


class ZeroCoordinate(InputError):
    pass


class SeriesSyntaxError(InputError):
    """Malformed series text.  ``offset`` is a UTF-8 byte offset into the input."""

    def __init__(self, message: str, offset: int, text: str = "", row: int | None = None, col: int | None = None):
        self.reason = message
        self.offset = offset
        self.text = text
        self.row = row
        self.col = col
        super().__init__(self._render())

    def _render(self) -> str:
        where = f"byte {self.offset}"
        if self.row is not None:
            where = f"entry ({self.row}, {self.col}), {where}"
        return f"syntax error at {where}: {self.reason}"

    def at_entry(self, row: int, col: int) -> "SeriesSyntaxError":
        return SeriesSyntaxError(self.reason, self.offset, self.text, row, col)


class RamificationMismatch(InputError):
    pass


class EmptyInput(InputError):
    pass


class ShapeMismatch(InputError):
    pass
