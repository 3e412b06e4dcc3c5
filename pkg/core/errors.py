from typing import Optional


class HansardError(Exception):
    """Base class for every error raised by the pipeline."""


# ingest
class NotFound(HansardError):
    pass


class TransportFailure(HansardError):
    pass


class CacheCorruption(HansardError):
    pass


class SchemaMismatch(HansardError):
    pass


class DuplicateUniqueID(HansardError):
    pass


class UnsupportedEra(HansardError):
    pass


# xml_model
class MalformedXml(HansardError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None,
                 offset: Optional[int] = None):
        self.line = line
        self.column = column
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if offset is not None:
            where.append(f"byte {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class MissingRoot(HansardError):
    pass


class MissingChamber(HansardError):
    pass


class UndetectableEra(HansardError):
    pass


# emitter
class SchemaViolation(HansardError):
    pass


class IoFailure(HansardError):
    pass


class DuplicateDate(HansardError):
    pass


class UnknownFormat(HansardError):
    pass


# cli
class ConfigError(HansardError):
    pass


class UnknownSubcommand(HansardError):
    pass


class PartialFailure(HansardError):
    def __init__(self, failed_dates, total: bool = False):
        self.failed_dates = list(failed_dates)
        # every attempted day failed
        self.total = total
        super().__init__(f"{len(self.failed_dates)} sitting day(s) failed: {', '.join(self.failed_dates)}")
