"""Exception hierarchy shared by every module.

``DomainError`` subclasses are data/contract violations (CLI exit 3);
``ConfigError`` is a usage problem (CLI exit 2).
"""


class BciExamError(Exception):
    """Base class for all package errors."""


class ConfigError(BciExamError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(BciExamError):
    pass


class InvalidBand(DomainError, ValueError):
    pass


class AliasRisk(DomainError):
    pass


class WindowOutOfRange(DomainError):
    pass


class EmptyClass(DomainError):
    pass


class SingularWithin(DomainError):
    pass


class DegenerateClasses(DomainError):
    pass


class DimensionMismatch(DomainError, ValueError):
    pass


class MissingOption(DomainError):
    pass


class SchemaError(DomainError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class DuplicateQuestionId(SchemaError):
    def __init__(self, path, question_id):
        self.question_id = question_id
        super().__init__(path, f"duplicate question_id {question_id!r}")


class QuestionMismatch(DomainError):
    pass


class MissingQuestionEpochs(QuestionMismatch):
    def __init__(self, question_id):
        self.question_id = question_id
        super().__init__(f"no epochs for question {question_id!r}")
