from pydantic import BaseModel, ConfigDict, Field


class ModelSpec(BaseModel):
    """Pure p-spin mixture xi(x) = beta^2 x^p."""

    model_config = ConfigDict(frozen=True)

    p: int = Field(ge=2)
    beta: float = Field(ge=0.0, allow_inf_nan=False)

    def with_beta(self, beta: float) -> "ModelSpec":
        return ModelSpec(p=self.p, beta=beta)
