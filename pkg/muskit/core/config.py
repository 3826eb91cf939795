from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Determinism
    SEED: int = 0

    # Budgets
    TIMEOUT_SECONDS: float = 3600.0
    BUNDLE_BUDGET_FRACTION: float = 0.5
    MCS_BUDGET_FRACTION: float = 0.1
    MCS_MAX_COUNT: int = 10000
    MAXSAT_CONFLICT_LIMIT: int = 200000
    MAXSAT_MAX_CLAUSES: int = 3000
    MAXSAT_MAX_COUNTER_SIZE: int = 100_000

    # Desk-scale oracles
    ASP_BRUTE_FORCE_CAP: int = 24
    ORACLE_BRUTE_FORCE_CAP: int = 20

    # Encoding
    HYBRID_CLAUSE_THRESHOLD: int = 5000
    H3_PAIR_LIMIT: int = 1_000_000
    H2_SUBSET_LIMIT: int = 100_000

    # Diagnostics
    VERIFY_MUSES: bool = False
    LOG_LEVEL: str = "INFO"

    class Config:
        env_file = ".env"
        env_prefix = "MUSKIT_"
        extra = "ignore"


settings = Settings()
