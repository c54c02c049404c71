import logging
from logging import getLogger


__all__ = ["logger", "configure_logging"]


logger = getLogger("dehazer")


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
