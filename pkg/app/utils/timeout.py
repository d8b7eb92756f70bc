import asyncio
import functools
import logging
from typing import Any, Callable, Optional, TypeVar

from app.core.config import settings
from app.core.exceptions import ComputationTimeoutException

# Set up module logger
logger = logging.getLogger(__name__)

T = TypeVar("T")


async def with_timeout(
    func: Callable[..., T],
    *args: Any,
    timeout: Optional[float] = None,
    error_message: str = "Computation timed out",
    **kwargs: Any,
) -> T:
    """
    Run a blocking computation in a worker thread with a timeout.

    Args:
        func: The blocking callable
        timeout: Timeout in seconds, defaults to settings.COMPUTATION_TIMEOUT
        error_message: Custom error message for timeout

    Returns:
        The result of the callable

    Raises:
        ComputationTimeoutException: If the computation times out
    """
    timeout = settings.COMPUTATION_TIMEOUT if timeout is None else timeout
    try:
        return await asyncio.wait_for(
            asyncio.to_thread(functools.partial(func, *args, **kwargs)), timeout=timeout
        )
    except asyncio.TimeoutError:
        # The worker thread cannot be interrupted; its result is discarded
        logger.error(f"Timeout error: {error_message} (limit: {timeout}s)")
        raise ComputationTimeoutException(error_message, details={"timeout": timeout})
