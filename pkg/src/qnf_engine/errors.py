"""Exception hierarchy for the normal form engine."""

from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np


class QnfError(Exception):
    """Base class for every error raised by the engine."""

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_record(self) -> Dict[str, Any]:
        """
        Render the error as a machine-readable record.

        Returns:
            Dictionary with the error class name, message and details
        """
        return {
            "error": type(self).__name__,
            "message": self.message,
            "details": {key: _plain(value) for key, value in self.details.items()},
        }


class InputError(QnfError, ValueError):
    """Invalid input or misuse of an operation."""


class IncompatibleHbarTag(InputError):
    """Two symbols were produced at different values of hbar."""


class InsufficientGrid(InputError):
    """An hbar family has too few samples for the requested derivative order."""


class BoxMismatch(InputError):
    """Two operator matrices live on different mode boxes."""


class ZeroShift(InputError):
    """A difference quotient was requested with a zero shift."""


class NotHermitian(InputError):
    """A matrix expected to be Hermitian is not."""


class NotAtomic(InputError):
    """The operation needs a purely atomic symbol but got a linear part."""


class NumericalFailure(QnfError, ArithmeticError):
    """The engine refuses to continue for a numerical reason."""


class ResonantFrequency(NumericalFailure):
    """The frequency vector has a vanishing small divisor."""

    def __init__(self, message: str, worst_q: Sequence[int]) -> None:
        super().__init__(message, worst_q=tuple(int(v) for v in worst_q))
        self.worst_q: Tuple[int, ...] = tuple(int(v) for v in worst_q)


class ResonantMode(NumericalFailure):
    """A symbol carries amplitude on a resonant mode."""

    def __init__(self, message: str, q: Sequence[int]) -> None:
        super().__init__(message, q=tuple(int(v) for v in q))
        self.q: Tuple[int, ...] = tuple(int(v) for v in q)


class NeumannDiverges(NumericalFailure):
    """The divisor series has contraction factor theta >= 1."""


class SeriesDiverges(NumericalFailure):
    """An iterated bracket series fails its geometric tail condition."""


class BudgetExceeded(NumericalFailure):
    """The atom count crossed the configured budget."""


class NotReal(NumericalFailure):
    """A value expected to be real has a significant imaginary part."""


class ThetaTooLarge(NumericalFailure):
    """The accumulated divisor is too far from the identity."""


class StepConditionViolated(NumericalFailure):
    """The smallness condition of a KAM step does not hold."""


class HypothesisViolated(NumericalFailure):
    """A hypothesis needed for a rigorous bound does not hold."""


def _plain(value: Optional[Any]) -> Any:
    """Convert numpy arrays, scalars and tuples into JSON friendly values."""
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    return value
