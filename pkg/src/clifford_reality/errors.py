"""Exception hierarchy shared by every module of the package."""


class CliffordRealityError(Exception):
    """Base class for all errors raised by clifford_reality."""


# fields
class EvenCharacteristic(CliffordRealityError):
    pass


class NotPrime(CliffordRealityError):
    pass


class ZeroInput(CliffordRealityError):
    pass


# quadratic spaces
class NotSymmetric(CliffordRealityError):
    pass


class Degenerate(CliffordRealityError):
    pass


class DegenerateSubspace(CliffordRealityError):
    pass


class DimensionMismatch(CliffordRealityError):
    pass


class IsotropicSearchFailed(CliffordRealityError):
    pass


# algebra
class ContextMismatch(CliffordRealityError):
    pass


class NotInvertible(CliffordRealityError):
    pass


class NotAVector(CliffordRealityError):
    pass


class DimensionTooLarge(CliffordRealityError):
    pass


# groups
class NotInGamma(CliffordRealityError):
    pass


class NotInGammaPlus(NotInGamma):
    pass


class NormNotScalar(CliffordRealityError):
    pass


class NotSpecialOrthogonal(CliffordRealityError):
    pass


# torus / reality
class ZeroParameter(CliffordRealityError):
    pass


class NotLiftable(CliffordRealityError):
    def __init__(self, obstruction, message=None):
        self.obstruction = obstruction
        super().__init__(message or f"involution does not lift; obstruction class {obstruction}")


class PreconditionViolated(CliffordRealityError):
    pass


class EigenvaluesNotRational(CliffordRealityError):
    pass


class NotSemisimple(CliffordRealityError):
    pass


class NoRationalEigenvalue(CliffordRealityError):
    pass


class NotStronglyRegular(CliffordRealityError):
    pass


class NotInSpin(CliffordRealityError):
    pass


class WrongRelation(CliffordRealityError):
    pass


class NotRealOrUndecided(CliffordRealityError):
    pass


# oracle
class OrderCapExceeded(CliffordRealityError):
    pass


class CentralizerTooLarge(CliffordRealityError):
    pass


# cli
class ConfigInvalid(CliffordRealityError):
    pass
