"""Simple entry point to run foragesim with a config file."""

from typing import Optional

from foragesim.config_loader import load_and_run
from foragesim.logging_setup import setup_logging
from foragesim.main import main


def run(path: Optional[str] = None) -> None:
    setup_logging()
    load_and_run(main, path)


if __name__ == "__main__":
    run()
