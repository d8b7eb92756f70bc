from typing import Any, Callable, Dict, Type, TypeVar, cast

from fastapi import Request

# Type variable for service classes
T = TypeVar("T")

# Global registry of service factories
_service_registry: Dict[Type[Any], Callable[[], Any]] = {}


def register_service(service_class: Type[T], factory: Callable[[], T]) -> None:
    """
    Register a service factory function.

    Args:
        service_class: The class of the service
        factory: Function that creates an instance of the service
    """
    _service_registry[service_class] = factory


def get_service(service_class: Type[T]) -> Callable[..., T]:
    """
    Get a dependency provider for a service.

    The instance is created once per request and kept in the request state.
    Unregistered services are registered with their no-argument constructor.

    Args:
        service_class: The class of the service to provide

    Returns:
        A FastAPI dependency that provides the service
    """
    if service_class not in _service_registry:
        register_service(service_class, service_class)

    async def _get_service(request: Request) -> T:
        service_key = f"service:{service_class.__name__}"
        if hasattr(request.state, service_key):
            return cast(T, getattr(request.state, service_key))

        service = _service_registry[service_class]()
        setattr(request.state, service_key, service)
        return service

    return _get_service


def cached_service(service_class: Type[T]) -> Callable[..., T]:
    """
    Create a dependency provider that shares one instance across requests.

    Suitable for services whose caches are independent of the request body.

    Args:
        service_class: The class of the service to provide

    Returns:
        A FastAPI dependency that provides the cached service
    """
    if service_class not in _service_registry:
        register_service(service_class, service_class)

    instance: Dict[str, T] = {}

    async def _service_dependency(request: Request) -> T:
        service_key = f"service:{service_class.__name__}"
        if hasattr(request.state, service_key):
            return cast(T, getattr(request.state, service_key))

        if "service" not in instance:
            instance["service"] = _service_registry[service_class]()
        service = instance["service"]
        setattr(request.state, service_key, service)
        return service

    return _service_dependency
