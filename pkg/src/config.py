"""Application configuration management."""
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="SPECTRUM_",
        case_sensitive=False,
        extra="ignore"
    )

    # Numerics
    dense_qubit_cap: int = Field(12, ge=1, le=16)
    max_matrix_dim: int = 64
    hermitian_tol: float = 1e-12
    eps_psd: float = 1e-12
    min_singular_value: float = 1e-8

    # Validation
    eps_kl: float = 1e-10
    eps_sym: float = 1e-10
    orthonormality_tol: float = 1e-9
    lambda_consistency_tol: float = 1e-10

    # Optimizer
    mu_initial: float = 100.0
    mu_growth: float = 10.0
    mu_max: float = 1e8
    restarts: int = Field(32, ge=1)
    adam_steps: int = Field(400, ge=0)
    adam_step_size: float = 0.01
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    cosine_cycles: int = Field(3, ge=1)
    lbfgs_iterations: int = Field(5000, ge=1)
    polish_iterations: int = Field(500, ge=0)
    grid_points: int = Field(21, ge=0)
    target_tol: float = 1e-6
    dedup_tol: float = 1e-4
    singleton_span: float = 1e-3
    workers: int = Field(1, ge=1)
    seed: int = 20240917

    # Studies
    random_unrestricted_count: int = 30
    random_cyclic_count: int = 60
    random_unrestricted_sizes: list[int] = Field(default_factory=lambda: [6, 7, 8])
    random_cyclic_sizes: list[int] = Field(default_factory=lambda: [5, 6])

    # Logging
    log_level: str = "INFO"
    log_format: str = "console"

    # Output
    output_format: str = "json"
    results_significant_digits: int = 12

    @field_validator("log_level", mode="before")
    @classmethod
    def normalize_log_level(cls, v):
        """Accept log levels in any case."""
        if isinstance(v, str):
            return v.strip().upper()
        return v

    @field_validator("log_format", "output_format", mode="before")
    @classmethod
    def normalize_lowercase(cls, v):
        """Lower-case enumerated text settings."""
        if isinstance(v, str):
            return v.strip().lower()
        return v

    @field_validator("random_unrestricted_sizes", "random_cyclic_sizes")
    @classmethod
    def check_tuple_sizes(cls, v):
        """Tuple sizes must be positive and non-empty."""
        if not v or any(m < 1 for m in v):
            raise ValueError("tuple sizes must be a non-empty list of positive integers")
        return v

    @property
    def json_logs(self) -> bool:
        """Check if log lines are rendered as JSON."""
        return self.log_format == "json"


# Global settings instance
settings = Settings()
