from .experiments import experiment_router
from .verify import verify_router

__all__ = [
    "experiment_router",
    "verify_router",
]

# Список роутеров для подключения в приложении
routers = [
    experiment_router,
    verify_router,
]
