"""Exception types shared across the package."""


class TwinSphereError(Exception):
    """Base class for all errors raised by twinsphere."""


class NotInvertible(TwinSphereError, ArithmeticError):
    def __init__(self, value: int, modulus: int, gcd: int):
        self.value = value
        self.modulus = modulus
        self.gcd = gcd
        super().__init__(f"{value} is not invertible mod {modulus} (gcd={gcd})")


class ModulusMismatch(TwinSphereError, ValueError):
    pass


class NotOnSphere(TwinSphereError, ValueError):
    pass


class DomainError(TwinSphereError, ValueError):
    pass


class RangeError(TwinSphereError):
    """Raised when an input exceeds a configured size limit or coverage."""


class LimitExceeded(RangeError):
    pass


class OutOfRange(RangeError):
    pass


class SieveRange(RangeError):
    pass


class BadFactorization(TwinSphereError, ValueError):
    pass


class SingularFit(TwinSphereError, ArithmeticError):
    pass
