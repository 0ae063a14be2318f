"""Shared exception types for the annotation engine."""


class IatError(Exception):
    """Base class for all engine errors."""


class InvalidShapeError(IatError):
    """A shape violates one of its geometric invariants."""

    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


class ParseError(IatError):
    """A textual input failed to parse; ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class SerializeError(IatError):
    """A value cannot be represented in the textual format."""


class UnknownClassError(IatError):
    def __init__(self, class_name: str):
        super().__init__(f"unknown class: {class_name!r}")
        self.class_name = class_name


class UnknownTypeError(IatError):
    def __init__(self, class_name: str, type_name: str):
        super().__init__(f"unknown type {type_name!r} in class {class_name!r}")
        self.class_name = class_name
        self.type_name = type_name


class DuplicateNameError(IatError):
    def __init__(self, name: str):
        super().__init__(f"duplicate name: {name!r}")
        self.name = name


class UnknownIdError(IatError):
    def __init__(self, annotation_id: int):
        super().__init__(f"unknown annotation id: {annotation_id}")
        self.annotation_id = annotation_id
