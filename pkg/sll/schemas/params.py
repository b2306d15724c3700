from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from ..core.config import settings


class BdeuParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    ess: float = Field(default_factory=lambda: settings.ess, gt=0.0, description="Equivalent sample size")


class GreedyParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    tabu_capacity: int = Field(default_factory=lambda: settings.tabu_capacity, ge=1)
    patience: int = Field(default_factory=lambda: settings.patience, ge=0)
    max_indegree: int = Field(default_factory=lambda: settings.max_indegree, ge=0)
    seed: int = 0
    restarts: int = Field(0, ge=0, description="Random perturb-and-reclimb rounds after convergence")
    perturbation: int = Field(3, ge=1, description="Random legal moves applied per restart")


class VisitOrder(str, Enum):
    ASCENDING_INDEX = "ascending-index"
    DATA_ORDER = "data-order"


class SllConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    scoring: BdeuParams = Field(default_factory=BdeuParams)
    max_indegree: int = Field(default_factory=lambda: settings.max_indegree, ge=0)
    exact_limit: int = Field(default_factory=lambda: settings.exact_limit, ge=3)
    visit_order: VisitOrder = VisitOrder.ASCENDING_INDEX
