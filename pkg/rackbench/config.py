from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # App Settings
    app_name: str = "Rackbench"
    app_version: str = "1.0.0"
    debug: bool = False
    log_level: str = "WARNING"

    # Census budget
    budget_seconds: float = 600.0
    budget_nodes: Optional[int] = None
    jobs: int = 1

    # Group sizes
    closure_cap: int = 1_000_000
    enumeration_limit: int = 331_776
    reflection_subgroup_max_n: int = 30

    # Table 1 reproduction
    table1_cell_seconds: float = 120.0
    table1_max_complete: int = 4
    table1_max_star: int = 5
    table1_max_cycle: int = 7
    table1_columns: int = 8

    # Rendering
    zero_based: bool = False

    # Browser origins allowed to call the API (JSON list in the environment)
    cors_origins: list[str] = []

    # Bundled worked examples
    fixtures_path: str = "rackbench/data"

    class Config:
        env_prefix = "RACKBENCH_"
        env_file = ".env"
        env_file_encoding = "utf-8"

    def validate_required(self) -> list[str]:
        invalid = []
        if self.budget_seconds <= 0:
            invalid.append("RACKBENCH_BUDGET_SECONDS")
        if self.budget_nodes is not None and self.budget_nodes <= 0:
            invalid.append("RACKBENCH_BUDGET_NODES")
        if self.jobs < 1:
            invalid.append("RACKBENCH_JOBS")
        if self.closure_cap < 1:
            invalid.append("RACKBENCH_CLOSURE_CAP")
        if self.table1_cell_seconds <= 0:
            invalid.append("RACKBENCH_TABLE1_CELL_SECONDS")
        return invalid


# Table 1 rows, in display order
TABLE1_FAMILIES = ["complete", "star", "cycle"]

# Smallest column index at which each Table 1 family is defined
TABLE1_MIN_ORDER = {
    "complete": 0,
    "star": 1,
    "cycle": 3,
}


@lru_cache
def get_settings() -> Settings:
    return Settings()
