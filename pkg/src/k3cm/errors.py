"""Domain errors.

Every error class carries a stable machine name and a distinct process exit
code so the CLI can map failures deterministically.  Exit code 1 is reserved
for unexpected crashes, 2 for unparseable input.
"""


class K3CMError(Exception):
    """Base class for all domain errors."""

    exit_code = 1

    @property
    def name(self) -> str:
        return type(self).__name__


class ParseError(K3CMError):
    exit_code = 2


class NotFundamental(K3CMError):
    exit_code = 3


class NotImaginary(K3CMError):
    exit_code = 4


class MixedFields(K3CMError):
    exit_code = 5


class FactorizationIncomplete(K3CMError):
    exit_code = 6


class NonMaximalOrder(K3CMError):
    exit_code = 7


class NotEven(K3CMError):
    exit_code = 8


class NotPositiveDefinite(K3CMError):
    exit_code = 9


class NotIntegralPairing(K3CMError):
    exit_code = 10


class OddLattice(K3CMError):
    exit_code = 11


class DegenerateLattice(K3CMError):
    exit_code = 12


class NotAnIsometry(K3CMError):
    exit_code = 13


class IncompatibleForms(K3CMError):
    exit_code = 14


class ModulusTooLarge(K3CMError):
    exit_code = 15


class NotApplicable(K3CMError):
    exit_code = 16


class InvalidPrimePower(K3CMError):
    exit_code = 17


class InconsistentInvariants(K3CMError):
    exit_code = 18


class InvalidInput(K3CMError):
    """A precondition violation that is not one of the specific errors above."""

    exit_code = 20


#: exit code used by the verification command when a golden check fails
VERIFICATION_FAILED_EXIT = 19


def error_by_name(name: str) -> type:
    """Look up an error class by its machine name (used by the CLI client)."""
    cls = _BY_NAME.get(name)
    if cls is None:
        return K3CMError
    return cls


_BY_NAME = {
    cls.__name__: cls
    for cls in [
        ParseError, NotFundamental, NotImaginary, MixedFields,
        FactorizationIncomplete, NonMaximalOrder, NotEven, NotPositiveDefinite,
        NotIntegralPairing, OddLattice, DegenerateLattice, NotAnIsometry,
        IncompatibleForms, ModulusTooLarge, NotApplicable, InvalidPrimePower,
        InconsistentInvariants, InvalidInput,
    ]
}
