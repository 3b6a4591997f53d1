"""configuration settings for xychain"""

import logging
import math
import sys
from typing import Dict

from dotenv import load_dotenv
from pydantic import AliasChoices, Field

from pydantic_settings import BaseSettings, SettingsConfigDict

load_dotenv()


class Settings(BaseSettings):
    """application settings"""

    model_config = SettingsConfigDict(
        env_prefix="XYCHAIN_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # api settings
    api_title: str = "xychain state-transfer simulator"
    api_description: str = (
        "fidelity and one-tangle of an anisotropic xy chain in a transverse field, "
        "cross-checked against exact diagonalization"
    )
    api_version: str = "1.0.0"

    # server settings
    host: str = "0.0.0.0"
    port: int = 8000
    reload: bool = False

    # cors settings
    cors_origins: list = ["*"]
    cors_credentials: bool = True
    cors_methods: list = ["*"]
    cors_headers: list = ["*"]

    # logging
    log_level: str = "INFO"

    # figure defaults: five sites, read out at site 3, sqrt(3)/2|0> + 1/2|1>
    default_sites: int = 5
    default_receiver: int = 3
    default_alpha: float = math.sqrt(3.0) / 2.0

    # sweep grid defaults (t x gamma)
    default_t_min: float = 0.0
    default_t_max: float = 50.0
    default_t_steps: int = 201
    default_gamma_min: float = 0.0
    default_gamma_max: float = 1.0
    default_gamma_steps: int = 101

    # output
    csv_significant_digits: int = 12
    source_date_epoch: int = Field(
        default=0,
        validation_alias=AliasChoices("SOURCE_DATE_EPOCH", "XYCHAIN_SOURCE_DATE_EPOCH"),
    )

    # workers for grid sweeps; 1 evaluates inline
    workers: int = 1

    # size guards
    ed_max_sites: int = 14
    verify_max_sites: int = 10
    bruteforce_max_operators: int = 12
    api_max_cells: int = 20000

    # oracle verification
    verify_tolerance: float = 1e-9
    verify_points: int = 50


# regime presets, shared by the cli and the api
PRESETS: Dict[str, Dict[str, float]] = {
    "strong": {"field": 1.0, "coupling": 0.1},
    "weak": {"field": 0.1, "coupling": 1.0},
    "intermediate": {"field": 0.5, "coupling": 0.5},
}


# global settings instance
settings = Settings()


def get_settings() -> Settings:
    """get application settings

    returns:
        settings instance
    """
    return settings


def configure_logging(level: str = None) -> None:
    """install a single stderr handler on the root logger

    args:
        level: logging level name, defaults to settings.log_level
    """
    level_name = (level or settings.log_level).upper()
    logging.basicConfig(
        level=getattr(logging, level_name, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
