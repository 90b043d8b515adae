from typing import Literal

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from typing_extensions import Annotated

_ = load_dotenv()


class Settings(BaseSettings, frozen=True):
    """environment variables"""

    model_config = SettingsConfigDict(env_prefix="SSLOCUS_", env_file=".env")

    format: Literal["table", "structured"] = "table"
    """default report rendering of the command line interface"""

    enumeration_budget: Annotated[int, Field(gt=0)] = 5_000_000
    """maximal number of points or subspaces visited by a single enumeration"""

    precision_buffer: Annotated[int, Field(ge=0)] = 2
    """p-adic digits below the working precision that are treated as unknown"""

    residue_degree: Annotated[int, Field(ge=1, le=6)] = 4
    """default degree m of the residue field F_{p^m} for Witt vector computations"""

    progress: bool = False
    """show progress bars for exhaustive enumerations"""


settings = Settings()
