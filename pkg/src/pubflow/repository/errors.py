"""Repository error hierarchy with stable codes."""


class RepositoryError(Exception):
    code = "REPOSITORY_ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnsupportedFormatError(RepositoryError):
    code = "UNSUPPORTED_FORMAT"


class RepoXmlSyntaxError(RepositoryError):
    code = "XML_SYNTAX"


class RepoSchemaViolationError(RepositoryError):
    code = "SCHEMA_VIOLATION"


class UnknownPidError(RepositoryError):
    code = "UNKNOWN_PID"

    def __init__(self, pid: str):
        super().__init__(f"no object with pid {pid!r}")
        self.pid = pid


class UnknownDatastreamError(RepositoryError):
    code = "UNKNOWN_DATASTREAM"

    def __init__(self, pid: str, ds_id: str):
        super().__init__(f"object {pid!r} has no datastream {ds_id!r}")
        self.pid = pid
        self.ds_id = ds_id


class UnknownVersionError(RepositoryError):
    code = "UNKNOWN_VERSION"

    def __init__(self, pid: str, ds_id: str, version_no: int):
        super().__init__(f"{pid!r}/{ds_id!r} has no version {version_no}")
        self.version_no = version_no


class DatastreamExistsError(RepositoryError):
    code = "DATASTREAM_EXISTS"

    def __init__(self, pid: str, ds_id: str):
        super().__init__(f"object {pid!r} already has datastream {ds_id!r}")


class UnresolvableLocationError(RepositoryError):
    code = "UNRESOLVABLE_LOCATION"

    def __init__(self, location: str, reason: str = ""):
        detail = f": {reason}" if reason else ""
        super().__init__(f"cannot fetch {location!r}{detail}")
        self.location = location


class StateConflictError(RepositoryError):
    code = "STATE_CONFLICT"

    def __init__(self, pid: str, ds_id: str):
        super().__init__(
            f"datastream {pid!r}/{ds_id!r} is deleted; pass force=True to modify it"
        )


class UnknownFieldError(RepositoryError):
    code = "UNKNOWN_FIELD"

    def __init__(self, field: str):
        super().__init__(f"unknown search field {field!r}")


class UnsupportedOperatorError(RepositoryError):
    code = "UNSUPPORTED_OPERATOR"

    def __init__(self, operator: str):
        super().__init__(f"unsupported comparison operator {operator!r}")
