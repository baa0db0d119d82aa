"""Bearer-token sessions over the static user table."""

from __future__ import annotations

import hmac
import secrets
import time
from dataclasses import dataclass
from typing import Callable

from pubflow.service.config import UserEntry, hash_password


class BadCredentialsError(Exception):
    code = "BAD_CREDENTIALS"
    message = "invalid username or password"


@dataclass(frozen=True)
class Session:
    token: str
    actor_id: str
    roles: tuple[str, ...]
    expires_at: float


class SessionStore:
    def __init__(
        self,
        users: tuple[UserEntry, ...],
        session_ttl: int = 43200,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self._users = {u.username: u for u in users}
        self._ttl = session_ttl
        self._clock = clock
        self._sessions: dict[str, Session] = {}

    def authenticate(self, username: str, password: str) -> Session:
        user = self._users.get(username)
        # compare against a dummy hash for unknown users to keep timing flat
        expected = user.password_hash if user else hash_password(password, "x")
        supplied = hash_password(password, user.salt if user else "y")
        if not hmac.compare_digest(expected, supplied) or user is None:
            raise BadCredentialsError()
        session = Session(
            token=secrets.token_hex(16),
            actor_id=user.username,
            roles=user.roles,
            expires_at=self._clock() + self._ttl,
        )
        self._sessions[session.token] = session
        return session

    def lookup(self, token: str) -> Session | None:
        session = self._sessions.get(token)
        if session is None:
            return None
        if session.expires_at <= self._clock():
            del self._sessions[token]
            return None
        return session
