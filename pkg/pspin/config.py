import os
from functools import lru_cache

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

load_dotenv()


class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    quad_order: int = Field(default=200, ge=4, le=2048)
    grid_size: int = Field(default=2001, ge=3)
    root_grid_size: int = Field(default=4001, ge=101)
    f_tolerance: float = Field(default=1e-7, gt=0.0)
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Read settings from the environment (and a .env file if present).

    Raises:
        ValueError: if any variable is set to something unusable
    """
    try:
        return Settings(
            quad_order=int(os.getenv("PSPIN_QUAD_ORDER", "200")),
            grid_size=int(os.getenv("PSPIN_GRID", "2001")),
            root_grid_size=int(os.getenv("PSPIN_ROOT_GRID", "4001")),
            f_tolerance=float(os.getenv("PSPIN_F_TOLERANCE", "1e-7")),
            log_level=os.getenv("PSPIN_LOG_LEVEL", "WARNING").upper(),
        )
    except Exception as e:
        raise ValueError(f"Invalid pspin configuration: {str(e)}") from e
