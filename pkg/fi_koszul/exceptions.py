class FIKoszulError(Exception):
    """Base class for all errors raised by fi_koszul."""


class InputError(FIKoszulError, ValueError):
    pass


class DimensionMismatch(InputError):
    pass


class FieldMismatch(InputError):
    pass


class TruncationError(InputError):
    """A degree outside the truncation window was requested."""


class SubmoduleError(InputError):
    pass


class ComplexError(FIKoszulError):
    """Two maps do not compose to zero, or their shapes do not chain."""


class ModuleValidationError(FIKoszulError):
    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or "Module fails validation: {}".format(report.first_failure))


class InternalConsistencyError(FIKoszulError):
    pass


class ResourceCeilingExceeded(FIKoszulError):
    def __init__(self, dimension: int, ceiling: int, where: str = ""):
        self.dimension = dimension
        self.ceiling = ceiling
        super().__init__(
            "Dimension {} exceeds the configured ceiling {}{}".format(
                dimension, ceiling, " ({})".format(where) if where else ""
            )
        )


class WindowTooSmallError(FIKoszulError):
    pass


class NonTorsionError(FIKoszulError):
    pass


class ModuleFormatError(FIKoszulError):
    pass


class BuilderSyntaxError(FIKoszulError):
    pass
