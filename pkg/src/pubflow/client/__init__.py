"""Minimal client stub and the `pubflow` CLI."""

from pubflow.client.stub import Client, ServerError, StubConfig, TransportError

__all__ = ["Client", "ServerError", "StubConfig", "TransportError"]
