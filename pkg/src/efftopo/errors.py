"""Exception hierarchy shared by every module of the package."""


class EffectAlgebraError(Exception):
    """Base class for all errors raised by efftopo."""


class InvalidTable(EffectAlgebraError):
    """A table was rejected by validation."""

    kind = "invalid"


class MalformedTable(InvalidTable):
    kind = "malformed"


class DegenerateAlgebra(InvalidTable):
    kind = "degenerate"


class AxiomViolation(InvalidTable):
    """One of the four effect-algebra axioms fails; ``witness`` names the culprits."""

    def __init__(self, axiom, witness, message=""):
        self.axiom = axiom
        self.witness = tuple(witness)
        super().__init__(message or f"axiom ({axiom}) violated at {self.witness}")

    @property
    def kind(self):
        return f"axiom{self.axiom}"


class NotAPartialOrder(InvalidTable):
    kind = "order"

    def __init__(self, witness, message=""):
        self.witness = tuple(witness)
        super().__init__(message or f"derived relation is not a partial order at {self.witness}")


class InternalInconsistency(EffectAlgebraError):
    """A derived self-check failed on an object that passed validation."""


class UnsupportedStructure(EffectAlgebraError):
    """The operation needs more structure than the instance has."""


class NotALattice(UnsupportedStructure):
    def __init__(self, witness):
        self.witness = tuple(witness)
        super().__init__(f"no least upper / greatest lower bound for pair {self.witness}")


class NotAtomic(UnsupportedStructure):
    pass


class SizeGuardExceeded(EffectAlgebraError):
    def __init__(self, what, size, limit):
        self.what, self.size, self.limit = what, size, limit
        super().__init__(f"{what}: size {size} exceeds guard {limit}")


class ZeroHasNoIndex(EffectAlgebraError, ValueError):
    pass


class DecompositionFailed(EffectAlgebraError):
    pass


class UniquenessViolated(EffectAlgebraError):
    def __init__(self, element, witnesses):
        self.element = element
        self.witnesses = tuple(witnesses)
        super().__init__(f"element {element}: sharp parts {self.witnesses} (expected exactly one)")


class NotSharplyDominating(EffectAlgebraError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"no smallest sharp element above {witness}")


class LemmaViolation(EffectAlgebraError):
    """A structural identity that must hold on the instance does not."""

    def __init__(self, law, witness):
        self.law = law
        self.witness = witness
        super().__init__(f"{law} fails: {witness}")


class OracleMismatch(EffectAlgebraError):
    pass


class CarrierMismatch(EffectAlgebraError, ValueError):
    pass


class DomainMismatch(EffectAlgebraError, ValueError):
    pass


class MutationNotApplicable(EffectAlgebraError):
    pass


class ParseError(EffectAlgebraError):
    def __init__(self, line, col, message):
        self.line, self.col, self.message = line, col, message
        super().__init__(f"line {line}, col {col}: {message}")


class ConflictingSum(ParseError):
    def __init__(self, line, col, message="conflicting sum declaration"):
        super().__init__(line, col, message)
