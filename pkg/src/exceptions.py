"""Exception hierarchy for the spectrum toolkit."""


class SpectrumError(Exception):
    """Base class for all toolkit errors."""


class PauliError(SpectrumError, ValueError):
    """Malformed Pauli label, mismatched qubit counts or dimension cap exceeded."""


class DimensionError(SpectrumError, ValueError):
    """Operands with incompatible shapes."""


class LinearAlgebraError(SpectrumError, ValueError):
    """A matrix routine received input it cannot handle."""


class StabilizerError(SpectrumError, ValueError):
    """Generators that do not define a stabilizer group."""


class SymmetryError(SpectrumError, ValueError):
    """Invalid sector, block or rank allocation request."""


class InfeasibleCompressionError(SymmetryError):
    """No rank-K scalar compression exists inside the invariant subspace."""


class DomainError(SpectrumError, ValueError):
    """Family parameters outside the admissible domain."""


class UnknownEntryError(SpectrumError, KeyError):
    """Unknown catalog family or study id."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ConfigError(SpectrumError, ValueError):
    """Run configuration could not be parsed or is inconsistent."""


class OutputError(SpectrumError, OSError):
    """Result files could not be written."""
