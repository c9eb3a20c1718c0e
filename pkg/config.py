"""
Configuration settings for the Lelek fan dynamics toolkit
"""
from pydantic_settings import BaseSettings
import logging
import os


class Settings(BaseSettings):
    # Server
    # PORT env var wins when set by the hosting platform
    port: int = int(os.getenv("PORT", "8000"))
    host: str = "0.0.0.0"
    debug: bool = False

    # Exact-arithmetic caps (override with INTERVAL_CAP, ARC_CAP, ...)
    interval_cap: int = 4096
    arc_cap: int = 65536
    branch_cap: int = 2_000_000
    metric_scan_limit: int = 512
    endpoint_search_cap: int = 100_000

    # Diagnostics
    stall_window: int = 10
    decimal_digits: int = 12

    # Logging
    log_level: str = "INFO"
    log_file: str = "./logs/lelek.log"

    class Config:
        env_file = ".env"
        case_sensitive = False


settings = Settings()


def configure_logging(level: str = None) -> None:
    """Configure root logging once, falling back to stderr when the log file is unwritable"""
    try:
        log_dir = os.path.dirname(settings.log_file) if settings.log_file else None
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers = [logging.FileHandler(settings.log_file), logging.StreamHandler()]
    except (OSError, TypeError, AttributeError):
        handlers = [logging.StreamHandler()]

    logging.basicConfig(
        level=getattr(logging, (level or settings.log_level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )
