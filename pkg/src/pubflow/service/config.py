"""Server configuration: one TOML file.

    pidNamespace = "escipub"
    port = 8420
    dataDir = "./data"
    stagingTTL = 86400       # seconds
    uploadLimit = 10485760   # bytes
    sessionTTL = 43200       # seconds

    [[users]]
    username = "alice"
    salt = "9f2c..."
    passwordHash = "..."     # sha256(salt + password), hex
    roles = ["author"]
"""

from __future__ import annotations

import hashlib
import secrets
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

KNOWN_ROLES = ("author", "qa", "admin")


@dataclass(frozen=True)
class UserEntry:
    username: str
    salt: str
    password_hash: str
    roles: tuple[str, ...]


@dataclass(frozen=True)
class ServiceConfig:
    pid_namespace: str = "escipub"
    port: int = 8420
    data_dir: str = "./data"
    staging_ttl: int = 86400
    upload_limit: int = 10 * 1024 * 1024
    session_ttl: int = 43200
    users: tuple[UserEntry, ...] = field(default_factory=tuple)


def hash_password(password: str, salt: str) -> str:
    return hashlib.sha256((salt + password).encode("utf-8")).hexdigest()


def make_user(username: str, password: str, roles: tuple[str, ...]) -> UserEntry:
    salt = secrets.token_hex(8)
    return UserEntry(username, salt, hash_password(password, salt), tuple(roles))


def load_config(path: str | Path) -> ServiceConfig:
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    users = tuple(
        UserEntry(
            username=u["username"],
            salt=u["salt"],
            password_hash=u["passwordHash"],
            roles=tuple(u.get("roles", ())),
        )
        for u in raw.get("users", ())
    )
    for user in users:
        for role in user.roles:
            if role not in KNOWN_ROLES:
                raise ValueError(f"user {user.username!r}: unknown role {role!r}")
    return ServiceConfig(
        pid_namespace=raw.get("pidNamespace", "escipub"),
        port=raw.get("port", 8420),
        data_dir=raw.get("dataDir", "./data"),
        staging_ttl=raw.get("stagingTTL", 86400),
        upload_limit=raw.get("uploadLimit", 10 * 1024 * 1024),
        session_ttl=raw.get("sessionTTL", 43200),
        users=users,
    )
