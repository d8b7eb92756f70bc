import logging
from typing import Dict

from fastapi import FastAPI, Request, status
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from app.core.config import settings
from app.core.exceptions import EXCEPTION_STATUS_CODES, ReasoningException

# Set up module logger
logger = logging.getLogger(__name__)


def register_exception_handlers(app: FastAPI) -> None:
    """
    Register custom exception handlers for the FastAPI application.

    Args:
        app: The FastAPI application instance
    """

    @app.exception_handler(ReasoningException)
    async def reasoning_exception_handler(
        request: Request, exc: ReasoningException
    ) -> JSONResponse:
        """Converts reasoning failures to `{error, message, details}`."""
        logger.warning(
            f"Reasoning exception: {exc.code}: {exc.message}",
            extra={"path": request.url.path, "details": exc.details},
        )

        content = {"error": exc.code, "message": exc.message}
        if exc.details:
            content["details"] = exc.details

        status_code = EXCEPTION_STATUS_CODES.get(type(exc), exc.status_code)
        return JSONResponse(status_code=status_code, content=content)

    @app.exception_handler(RequestValidationError)
    async def validation_exception_handler(
        request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        simplified_errors: Dict[str, str] = {}
        for error in exc.errors():
            loc = error.get("loc", [])
            # Skip the first element if it's the body
            if loc and loc[0] in ("body", "query", "path"):
                loc = loc[1:]
            simplified_errors[".".join(str(x) for x in loc)] = error.get("msg", "Validation error")

        logger.warning(
            f"Validation error: {simplified_errors}", extra={"path": request.url.path}
        )

        return JSONResponse(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            content={
                "error": "validation_error",
                "message": "Input validation failed",
                "details": simplified_errors,
            },
        )

    @app.exception_handler(Exception)
    async def unhandled_exception_handler(
        request: Request, exc: Exception
    ) -> JSONResponse:
        logger.error(
            f"Unhandled exception: {str(exc)}",
            exc_info=True,
            extra={"path": request.url.path},
        )

        # Don't expose details in production
        return JSONResponse(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            content={
                "error": "internal_server_error",
                "message": str(exc)
                if settings.ENVIRONMENT != "production"
                else "An internal server error occurred",
            },
        )
