"""Shared fixtures: a live HTTP server over a temp data directory."""

import socket
import threading
import time

import pytest
import uvicorn

from pubflow.service import create_app, load_config, make_user


def free_port():
    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    sock.close()
    return port


def write_config(tmp_path, port):
    users = [
        make_user("alice", "pw-alice", ("author",)),
        make_user("quinn", "pw-quinn", ("qa",)),
        make_user("ada", "pw-ada", ("admin",)),
    ]
    lines = [
        'pidNamespace = "escipub"',
        f"port = {port}",
        f'dataDir = "{tmp_path / "data"}"',
        "stagingTTL = 3600",
        "uploadLimit = 1048576",
    ]
    for user in users:
        lines += [
            "",
            "[[users]]",
            f'username = "{user.username}"',
            f'salt = "{user.salt}"',
            f'passwordHash = "{user.password_hash}"',
            "roles = [" + ", ".join(f'"{r}"' for r in user.roles) + "]",
        ]
    path = tmp_path / "config.toml"
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture()
def server(tmp_path):
    port = free_port()
    config = load_config(write_config(tmp_path, port))
    app = create_app(config)
    uv = uvicorn.Server(
        uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning")
    )
    thread = threading.Thread(target=uv.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not uv.started:
        assert time.time() < deadline, "server did not start"
        time.sleep(0.01)
    yield f"http://127.0.0.1:{port}"
    uv.should_exit = True
    thread.join(timeout=5)
