from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # App settings
    app_name: str = "sll"
    version: str = "1.0.0"
    log: str = "warn"

    # Scoring settings
    ess: float = 1.0
    max_indegree: int = 5

    # Search settings
    exact_limit: int = 20
    exact_hard_cap: int = 25
    tabu_capacity: int = 100
    patience: int = 15
    verify_deltas: bool = False

    # Runtime settings
    threads: Optional[int] = None
    float_digits: int = 12

    # Benchmark settings
    faithfulness_margin: float = 0.05

    model_config = SettingsConfigDict(env_prefix="SLL_", env_file=".env", extra="ignore")


settings = Settings()
