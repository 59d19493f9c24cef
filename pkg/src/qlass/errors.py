"""Exception hierarchy.

Every error raised by the library derives from :class:`QlassError`. The CLI
maps the three broad families (config, data, training) onto exit codes.
"""


class QlassError(Exception):
    pass


class ConfigError(QlassError, ValueError):
    pass


class DataError(QlassError, ValueError):
    pass


class TrainingError(QlassError, RuntimeError):
    pass


class MissingArtifact(QlassError, FileNotFoundError):
    pass


# -- data ---------------------------------------------------------------------

class MissingColumn(DataError):
    def __init__(self, name):
        super().__init__(f"column {name!r} not found in CSV header")
        self.name = name


class ParseError(DataError):
    def __init__(self, row, column, value, path=None):
        where = f"{path}: " if path else ""
        super().__init__(f"{where}row {row}, column {column!r}: cannot parse {value!r} as a number")
        self.row = row
        self.column = column


class EmptyDataset(DataError):
    pass


class AllMissingColumn(DataError):
    def __init__(self, name):
        super().__init__(f"column {name!r} has no present values")
        self.name = name


class DegenerateTarget(DataError):
    pass


class BadRatio(ConfigError):
    pass


# -- learners -----------------------------------------------------------------

class EmptyNode(DataError):
    pass


class PartitionMismatch(DataError):
    pass


class EmptyTrainingSet(TrainingError):
    pass


class MissingClass(TrainingError):
    pass


# -- rl-core / env ------------------------------------------------------------

class EmptyBuffer(QlassError, IndexError):
    pass


class ShapeMismatch(QlassError, ValueError):
    pass


class InvalidAction(QlassError, ValueError):
    pass


class EpisodeExhausted(QlassError, RuntimeError):
    pass


# -- metrics ------------------------------------------------------------------

class LengthMismatch(QlassError, ValueError):
    pass


class LabelOutOfRange(QlassError, ValueError):
    pass
