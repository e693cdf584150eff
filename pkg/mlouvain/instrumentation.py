# mlouvain/instrumentation.py
# Call logging for library entry points

import logging
from functools import wraps


def log_call(func):
    """Log entry/exit of ``func`` on its module logger, and failures with traceback."""
    logger = logging.getLogger(func.__module__)

    @wraps(func)
    def wrapper(*args, **kwargs):
        name = func.__qualname__
        logger.debug(f"Entering {name}")
        try:
            result = func(*args, **kwargs)
        except Exception as e:
            logger.error(f"Exiting {name} with error: {e}", exc_info=True)
            raise
        logger.debug(f"Exiting {name} successfully.")
        return result

    return wrapper
