"""Configuration and settings management."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from the environment (``STMOD_*``) and ``.env``."""

    model_config = SettingsConfigDict(
        env_prefix="STMOD_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Environment
    debug: bool = False
    log_format: str = "console"

    # Ghost checking
    ghost_degree_bound: int = 4

    # Random search
    trials: int = 200
    dim_bound_p2: int = 8
    dim_bound_p3: int = 9
    iso_attempts: int = 20

    # Trial pool
    max_workers: int = 4

    # Tate fullness window: degrees [-fullness_window, fullness_window]
    fullness_window: int = 3
    fullness_samples: int = 4

    # Reports (timings make reports non-reproducible, so they are opt-in)
    record_timing: bool = False


_SETTINGS_OVERRIDES: dict[str, object] = {}


def set_settings_overrides(**kwargs: object) -> None:
    """Override settings via CLI args (preferred over env for flags)."""
    _SETTINGS_OVERRIDES.update({k: v for k, v in kwargs.items() if v is not None})


def clear_settings_overrides() -> None:
    """Drop all CLI overrides."""
    _SETTINGS_OVERRIDES.clear()


def get_settings() -> Settings:
    """Get a settings instance with CLI overrides applied."""
    return Settings(**_SETTINGS_OVERRIDES)
