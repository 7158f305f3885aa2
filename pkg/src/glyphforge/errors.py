"""Exception taxonomy.

Two broad families matter for the CLI exit codes: ConfigError (exit 2)
for bad configuration or arguments, DataError (exit 3) for defective
input data or on-disk state. Everything else is a plain bug.
"""


class GlyphforgeError(Exception):
    pass


class ConfigError(GlyphforgeError):
    pass


class DataError(GlyphforgeError):
    pass


# --- dataset ---------------------------------------------------------------

class MalformedIndex(DataError):
    pass


class ManifestParseError(DataError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingImage(DataError):
    pass


class DuplicateId(DataError):
    pass


class UnlabeledSamplePresent(DataError):
    pass


# --- features --------------------------------------------------------------

class OutOfBounds(DataError):
    pass


class ImageTooSmall(DataError):
    pass


# --- svm / nn --------------------------------------------------------------

class DimensionMismatch(DataError):
    pass


class SingleClass(DataError):
    pass


class InvalidConfig(ConfigError):
    pass


class ShapeMismatch(DataError):
    pass


class StaleCache(GlyphforgeError):
    pass


class EmptyTrainSet(DataError):
    pass


class ChecksumMismatch(DataError):
    pass


class VersionMismatch(DataError):
    pass


# --- fusion ----------------------------------------------------------------

class LengthMismatch(DataError):
    pass


class EmptyMembers(DataError):
    pass


class AllZeroWeights(ConfigError):
    pass


class MissingMember(DataError):
    pass


# --- eval ------------------------------------------------------------------

class EmptySplit(DataError):
    pass


# --- service ---------------------------------------------------------------

class UnknownSample(DataError):
    pass


class UnknownModel(DataError):
    pass


class BadImage(DataError):
    pass


class ConflictingWrite(DataError):
    pass


class BadPageParams(ConfigError):
    pass
