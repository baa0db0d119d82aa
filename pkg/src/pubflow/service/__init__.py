"""HTTP service layer: auth, staging, and the JSON/XML wire protocol."""

from pubflow.service.app import ServiceError, create_app
from pubflow.service.auth import BadCredentialsError, Session, SessionStore
from pubflow.service.config import ServiceConfig, UserEntry, hash_password, load_config, make_user
from pubflow.service.description import service_description, service_description_bytes
from pubflow.service.staging import PayloadTooLargeError, StagingArea, StagingRef

__all__ = [
    "BadCredentialsError",
    "PayloadTooLargeError",
    "ServiceConfig",
    "ServiceError",
    "Session",
    "SessionStore",
    "StagingArea",
    "StagingRef",
    "UserEntry",
    "create_app",
    "hash_password",
    "load_config",
    "make_user",
    "service_description",
    "service_description_bytes",
]
