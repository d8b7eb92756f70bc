import logging
import time
import uuid

from fastapi import FastAPI, Request, Response
from starlette.middleware.base import BaseHTTPMiddleware, RequestResponseEndpoint
from starlette.types import ASGIApp

from app.core.logging import log_context

# Set up logger
logger = logging.getLogger(__name__)


class RequestIdMiddleware(BaseHTTPMiddleware):
    """
    Tags each request with an ID (taken from the header or generated) and
    logs its outcome and duration.
    """

    def __init__(self, app: ASGIApp, header_name: str = "X-Request-ID"):
        super().__init__(app)
        self.header_name = header_name

    async def dispatch(
        self, request: Request, call_next: RequestResponseEndpoint
    ) -> Response:
        request_id = request.headers.get(self.header_name) or str(uuid.uuid4())
        request.state.request_id = request_id
        start_time = time.time()

        try:
            response = await call_next(request)
        except Exception as exc:
            logger.error(
                f"Unhandled exception during request: {self._describe(request, start_time)} {exc}",
                exc_info=True,
            )
            raise

        response.headers[self.header_name] = request_id
        summary = self._describe(request, start_time) | {"status_code": response.status_code}
        if response.status_code >= 500:
            logger.error(f"Request failed: {summary}")
        elif response.status_code >= 400:
            logger.warning(f"Request error: {summary}")
        else:
            logger.info(f"Request completed: {summary}")
        return response

    @staticmethod
    def _describe(request: Request, start_time: float) -> dict:
        return {
            "request_id": getattr(request.state, "request_id", "unknown"),
            "method": request.method,
            "path": request.url.path,
            "process_time_ms": round((time.time() - start_time) * 1000, 2),
        }


class LogContextMiddleware(BaseHTTPMiddleware):
    """Pushes the request ID and path into the log context for the request's duration."""

    async def dispatch(
        self, request: Request, call_next: RequestResponseEndpoint
    ) -> Response:
        with log_context(
            request_id=getattr(request.state, "request_id", "unknown"),
            method=request.method,
            path=request.url.path,
        ):
            return await call_next(request)


def register_middlewares(app: FastAPI) -> None:
    """
    Register all middlewares with the FastAPI app.

    Note: Middleware is executed in reverse order of registration
    (last registered is executed first).

    Args:
        app: The FastAPI application instance
    """
    # Executed second, once the request ID exists
    app.add_middleware(LogContextMiddleware)

    # Executed first
    app.add_middleware(RequestIdMiddleware, header_name="X-Request-ID")
