# app/core/config.py
from typing import List, Literal, Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Environment settings
    ENVIRONMENT: Literal["development", "testing", "production"] = "development"
    DEBUG: bool = False

    # API settings
    PROJECT_NAME: str = "mln2poss"
    API_V1_STR: str = "/api/v1"
    BACKEND_CORS_ORIGINS: List[str] = []

    # Logging settings
    LOG_LEVEL: str = "INFO"
    LOG_FILE: Optional[str] = None  # Path to log file if file logging is enabled

    # Solver settings
    SAT_SOLVER_NAME: str = "g4"  # pysat backend (Glucose 4)
    ENUMERATION_LIMIT: int = 100_000

    # Caps on exponential procedures
    EXACT_TRANSFORM_MAX_FORMULAS: int = 20
    BRUTE_FORCE_MAX_ATOMS: int = 16
    POSSIBILITY_MODEL_MAX_ATOMS: int = 16
    DEFAULT_TRANSFORM_MAX_ATOMS: int = 24

    # Compilation
    COMPILE_DEFAULT_K: int = 2

    # Lifted compilation
    LIFTED_MIN_DOMAIN_SIZE: int = 3

    # Verification corpus
    VERIFY_RANDOM_MLNS: int = 50
    VERIFY_MAX_ATOMS: int = 6
    VERIFY_MAX_FORMULAS: int = 6
    VERIFY_MAX_WEIGHT: int = 10
    VERIFY_DEFAULT_K: int = 2

    # Concurrency and timeouts (in seconds)
    MAX_WORKERS: int = 1
    COMPUTATION_TIMEOUT: int = 300

    model_config = SettingsConfigDict(
        env_file=".env", env_file_encoding="utf-8", case_sensitive=True, extra="ignore"
    )


# Create settings instance
settings = Settings()
