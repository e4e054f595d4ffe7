import os
import tomli
from typing import Dict, Any, Optional
from pydantic import BaseModel, Field

# Configuration file path
DEFAULT_CONFIG_PATH = "config/default.toml"


class AutomataConfig(BaseModel):
    """Engine limits"""
    state_budget: int = 1_000_000
    letter_budget: int = 4096
    rank_complement_max_states: int = 8
    lar_budget: Optional[int] = None  # latest-appearance records; None means state_budget


class SamplingConfig(BaseModel):
    """Seeds and sizes for sampled checks"""
    seed: int = 7
    samples: int = 200
    max_tree_nodes: int = 6
    max_stem: int = 6
    max_loop: int = 6


class LoggingConfig(BaseModel):
    """Logging configuration"""
    level: str = "INFO"
    file: str = ""
    max_size: int = 10485760  # 10MB
    backup_count: int = 5


class CLIConfig(BaseModel):
    """Command-line defaults"""
    format: str = "text"
    output_dir: str = "out"


class Settings(BaseModel):
    """Application settings

    Holds every configuration section.
    """
    automata: AutomataConfig = Field(default_factory=AutomataConfig)
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    cli: CLIConfig = Field(default_factory=CLIConfig)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Settings":
        """Create settings from a dictionary.

        Args:
            data: Configuration dictionary

        Returns:
            Settings instance
        """
        settings = Settings()

        if "automata" in data:
            settings.automata = AutomataConfig(**data["automata"])
        if "sampling" in data:
            settings.sampling = SamplingConfig(**data["sampling"])
        if "logging" in data:
            settings.logging = LoggingConfig(**data["logging"])
        if "cli" in data:
            settings.cli = CLIConfig(**data["cli"])

        return settings


# Global settings instance
_settings: Optional[Settings] = None


def _apply_environment(settings: Settings) -> Settings:
    if "OMEGA_STATE_BUDGET" in os.environ:
        settings.automata.state_budget = int(os.environ["OMEGA_STATE_BUDGET"])
    if "OMEGA_SEED" in os.environ:
        settings.sampling.seed = int(os.environ["OMEGA_SEED"])
    return settings


def load_settings(config_path: Optional[str] = None) -> Settings:
    """Load settings.

    Args:
        config_path: Configuration file path; defaults to the CONFIG_FILE
            environment variable or the bundled default file

    Returns:
        Settings instance

    Raises:
        FileNotFoundError: If the configuration file does not exist
        tomli.TOMLDecodeError: If the configuration file is malformed
    """
    global _settings

    if config_path is None:
        config_path = os.environ.get("CONFIG_FILE", DEFAULT_CONFIG_PATH)

    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    with open(config_path, "rb") as f:
        config_data = tomli.load(f)

    _settings = _apply_environment(Settings.from_dict(config_data))
    return _settings


def get_settings() -> Settings:
    """Get settings.

    Loads from the default path on first use and falls back to built-in
    defaults if that fails.

    Returns:
        Settings instance
    """
    global _settings

    if _settings is None:
        try:
            _settings = load_settings()
        except (FileNotFoundError, tomli.TOMLDecodeError):
            _settings = _apply_environment(Settings())

    return _settings


def override_settings(
    state_budget: Optional[int] = None,
    seed: Optional[int] = None,
) -> Settings:
    """Apply per-invocation overrides (CLI flags) to the global settings."""
    settings = get_settings()
    if state_budget is not None:
        settings.automata.state_budget = state_budget
    if seed is not None:
        settings.sampling.seed = seed
    return settings
