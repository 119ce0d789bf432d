"""
Command-line settings using Pydantic for environment-based configuration.
"""

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class CliSettings(BaseSettings):
    """Logging and output configuration of the command-line front end."""

    log_level: str = Field(default="INFO", description="Logging level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Logging format string",
    )
    log_file: str = Field(default="sweeping_lab.log", description="Log file path")
    log_to_file: bool = Field(default=False, description="Also write logs to log_file")
    default_out: str = Field(default="out", description="Output directory when --out is omitted")

    model_config = SettingsConfigDict(
        env_prefix="SWEEP_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


cli_settings = CliSettings()
