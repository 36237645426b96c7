"""Exception and warning types shared across the package."""


class IntentGenError(Exception):
    """Base class for all errors raised by intentgen."""


class InputError(IntentGenError):
    """A user-supplied input file is missing, unreadable or malformed."""


class JsonLdParseError(InputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedContextError(InputError):
    pass


class StructureError(InputError):
    def __init__(self, message: str, path: str):
        super().__init__(f"{message} at {path}")
        self.path = path


class VocabularyParseError(InputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class WordNetFileError(InputError):
    pass


class WordNetParseError(InputError):
    def __init__(self, message: str, filename: str, offset: int):
        super().__init__(f"{filename} @ {offset}: {message}")
        self.filename = filename
        self.offset = offset


class VectorFormatError(InputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class GrammarError(InputError):
    pass


class GraphNotFoundError(IntentGenError, KeyError):
    def __str__(self):
        return f"unknown graph: {self.args[0]}"


class NotAnActionError(IntentGenError):
    pass


class UntypedHostError(IntentGenError):
    pass


class UnknownWordError(IntentGenError, KeyError):
    def __str__(self):
        return str(self.args[0])


class OutOfVocabularyError(IntentGenError, KeyError):
    def __str__(self):
        return f"out of vocabulary: {self.args[0]}"


class ExportCollisionError(IntentGenError):
    pass


class IntentGenWarning(UserWarning):
    """Recoverable problems: vocabulary misses, skipped values, fallbacks."""
