"""Configuration for the q-SC LDPC toolkit."""
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class QscLdpcSettings(BaseSettings):
    """Toolkit-wide numerical and run defaults."""

    model_config = SettingsConfigDict(
        env_prefix="QSC_LDPC_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Decoder Settings
    llr_clip: float = Field(
        default=30.0, gt=0.0, description="Magnitude clip for LLR messages"
    )
    max_iter: int = Field(default=100, ge=1, description="Decoder iteration budget")
    frontend_refresh_period: int = Field(
        default=1,
        ge=0,
        description="Decoder iterations between front-end refreshes (0 = never)",
    )

    # EXIT Settings
    exit_grid_points: int = Field(
        default=101, ge=2, description="Number of uniform a-priori grid points"
    )
    gaussian_samples: int = Field(
        default=100_000, ge=100, description="Symbols per Gaussian-prior EXIT point"
    )

    # Design Settings
    d_v: int = Field(default=3, ge=2, description="Variable node degree")
    d_c_max: int = Field(default=50, ge=2, description="Maximum check node degree")
    design_margin: float = Field(
        default=1e-3, ge=0.0, description="EXIT tunnel margin for the LP"
    )
    design_i_max: float = Field(
        default=0.99, gt=0.0, lt=1.0, description="Largest grid point of the LP"
    )

    # Simulation Settings
    min_bit_errors: int = Field(
        default=100, ge=1, description="Bit errors collected per sweep point"
    )
    max_codewords: int = Field(
        default=10_000, ge=1, description="Codeword budget per sweep point"
    )
    workers: int = Field(default=1, ge=1, description="Worker processes")

    # Logging Settings
    log_level: str = Field(default="INFO", description="Log level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log record format",
    )


# Global settings instance - lazy loaded so environment overrides apply at first use
_settings_instance = None


def get_settings() -> QscLdpcSettings:
    """Get the global settings instance, creating it if necessary."""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = QscLdpcSettings()
    return _settings_instance


def reset_settings() -> None:
    """Drop the cached instance so the next access re-reads the environment."""
    global _settings_instance
    _settings_instance = None


# Export settings getter for convenience
settings = get_settings
