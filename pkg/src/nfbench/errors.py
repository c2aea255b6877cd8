"""Exception hierarchy shared by all modules.

The CLI maps every ``NFBenchError`` to exit code 2.
"""


class NFBenchError(Exception):
    pass


class FormulaSyntaxError(NFBenchError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(sorted(expected))
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class UnboundVariableError(NFBenchError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"free variable(s) in closed context: {', '.join(self.names)}")


class TranslationError(NFBenchError):
    pass


class MissingVariableError(NFBenchError):
    pass


class HFSetError(NFBenchError):
    pass


class HFSetOverflow(HFSetError):
    pass


class StageTooLarge(HFSetError):
    pass


class SubsetViolation(HFSetError):
    pass


class StructureError(NFBenchError):
    pass


class StructureParseError(StructureError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class DanglingIdError(StructureError):
    pass


class AutomorphismViolation(StructureError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"j is not an automorphism of E: offending pair ({x}, {y})")


class InjectivityViolation(StructureError):
    def __init__(self, x, y):
        self.pair = (x, y)
        super().__init__(f"f is not injective: f({x}) = f({y})")


class UnsupportedRelation(StructureError):
    pass


class UndefinedF(StructureError):
    pass


class RecipeError(NFBenchError):
    """A witness recipe could not be carried out; ``step`` names the recipe step."""

    kind = "recipe"

    def __init__(self, step, message, trace=()):
        self.step = step
        self.trace = list(trace)
        super().__init__(f"{self.kind} at step {step}: {message}")


class MissingCode(RecipeError):
    kind = "missing-code"


class OutsideRange(RecipeError):
    kind = "outside-range"


class AmbiguousCode(RecipeError):
    kind = "ambiguous-code"


class SearchError(NFBenchError):
    pass


class InfeasibleSpec(SearchError):
    pass


class RecipeUndefinedF(RecipeError):
    kind = "undefined-f"
