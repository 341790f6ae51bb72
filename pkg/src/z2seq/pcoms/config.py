# SPDX-License-Identifier: Apache-2.0
# Standard
from typing import Literal, Optional
import os

# Third Party
from pydantic import BaseModel, ConfigDict, Field
import psutil

# Local
from .exceptions import InvalidShardCountError
from .logger_config import setup_logger

logger = setup_logger(__name__)

DEFAULT_MAX_NODES = 100_000_000
MAX_NODES_ENV = "PCOMS_MAX_NODES"


class SearchConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    # DFS node cap, checked per shard and again after merging
    max_nodes: int = Field(default=DEFAULT_MAX_NODES, ge=1)

    # number of root shards, or "auto" to size from the CPU count
    shards: int | Literal["auto"] = 1

    # largest period accepted without an explicit override
    n_limit: int = Field(default=10, ge=2, le=16)

    # largest family size accepted without an explicit override
    q_limit: int = Field(default=12, ge=1, le=24)

    # families are multisets of orbits; False restricts members to distinct orbits
    allow_repeats: bool = True

    @classmethod
    def from_env(cls, **kwargs) -> "SearchConfig":
        """Builds a config, letting PCOMS_MAX_NODES override the node cap."""
        max_nodes_env = os.environ.get(MAX_NODES_ENV)
        if max_nodes_env:
            kwargs["max_nodes"] = int(max_nodes_env)
            logger.debug("%s=%s", MAX_NODES_ENV, max_nodes_env)
        return cls(**kwargs)


class RunConfig(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    subcommand: str
    n: Optional[int] = Field(default=None, ge=1)
    q: Optional[int] = Field(default=None, ge=1)
    c: Optional[int] = None
    a: Optional[int] = Field(default=None, ge=0)
    m: Optional[int] = Field(default=None, ge=1)
    u: Optional[int] = Field(default=None, ge=1)
    p: Optional[int] = Field(default=None, ge=2)
    q_max: Optional[int] = Field(default=None, ge=1)
    format: Literal["json", "csv", "text"] = "json"
    strict_paper: bool = False
    out: Optional[str] = None
    search: SearchConfig = Field(default_factory=SearchConfig)


def resolve_shards(shards: int | str | None) -> int:
    """
    Turns a shard request into a worker count.

    "auto" uses half the physical CPU count (at least one); integers must be positive.
    """
    if shards is None:
        return 1
    if shards == "auto":
        usable_cpu_count = psutil.cpu_count(logical=False) or psutil.cpu_count() or 1
        calculated_shards = max(usable_cpu_count // 2, 1)
        logger.debug("Auto tuning shards to %s", calculated_shards)
        return calculated_shards
    if isinstance(shards, int) and not isinstance(shards, bool) and shards > 0:
        logger.debug("shards specified as: %s", shards)
        return shards
    raise InvalidShardCountError(shards)
