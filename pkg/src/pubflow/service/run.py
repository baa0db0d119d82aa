"""`pubflow-server`: run the HTTP service from a TOML config file."""

from __future__ import annotations

import argparse
import os

import uvicorn

from pubflow.service.app import create_app
from pubflow.service.config import ServiceConfig, load_config


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="pubflow-server")
    parser.add_argument("--config", help="path to the TOML config file")
    parser.add_argument("--port", type=int, help="override the configured port")
    args = parser.parse_args(argv)

    config = load_config(args.config) if args.config else ServiceConfig()
    app = create_app(config, ui_dir=os.environ.get("PUBFLOW_UI_DIR"))
    uvicorn.run(app, host="127.0.0.1", port=args.port or config.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
