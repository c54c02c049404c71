from .logging import logger, configure_logging

__all__ = ["logger", "configure_logging"]
