"""Run the scorer service: python3 -m scorer_service [--port 8000] ..."""

import argparse

import uvicorn

from .app import create_app
from .config import ServiceConfig


def main() -> None:
    parser = argparse.ArgumentParser(description="sentence-pair entailment scorer")
    defaults = ServiceConfig()
    parser.add_argument("--model", default=defaults.model,
                        help="model name or checkpoint id (default: built-in heuristic)")
    parser.add_argument("--device", default=defaults.device)
    parser.add_argument("--max-batch", type=int, default=defaults.max_batch)
    parser.add_argument("--port", type=int, default=defaults.port)
    parser.add_argument("--host", default="127.0.0.1")
    args = parser.parse_args()

    cfg = ServiceConfig(
        model=args.model,
        device=args.device,
        max_batch=args.max_batch,
        port=args.port,
    )
    uvicorn.run(create_app(cfg), host=args.host, port=cfg.port)


if __name__ == "__main__":
    main()
