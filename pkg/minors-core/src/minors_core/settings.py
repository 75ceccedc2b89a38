from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class MinorsSettings(BaseSettings):
    """Execution settings read from ``MINORS_*`` environment variables.

    These control how an experiment runs, never what it computes.
    """

    workers: int = Field(default=1, ge=1, description="worker processes for replicas")
    progress: bool = Field(default=True, description="show a replica counter on standard error")

    model_config = SettingsConfigDict(env_prefix="MINORS_")
