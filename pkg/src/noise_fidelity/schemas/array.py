"""Atom-array measurement model schema."""

from typing import Annotated

from pydantic import BaseModel, Field, model_validator

Probability = Annotated[float, Field(ge=0.0, le=1.0, allow_inf_nan=False)]

SCALE_MEAN_TOLERANCE = 1e-6


class ArrayModel(BaseModel):
    """Per-site Rabi scale factors plus loading and SPAM parameters.

    Attributes:
        n_sites: Number of array sites N_a.
        n_meas: Measurements per site and realization N_m.
        p_c: Probability that an atom is present for a given measurement.
        p01: Probability of reading 1 when the truth is 0.
        p10: Probability of reading 0 when the truth is 1.
        site_scales: Dimensionless Rabi factor per site, mean 1.
    """

    model_config = {"frozen": True}

    n_sites: Annotated[int, Field(ge=1)]
    n_meas: Annotated[int, Field(ge=1)]
    p_c: Probability = 0.5
    p01: Probability = 0.04
    p10: Probability = 0.04
    site_scales: tuple[Annotated[float, Field(gt=0.0, allow_inf_nan=False)], ...]

    @model_validator(mode="after")
    def validate_site_scales(self) -> "ArrayModel":
        """Ensure one scale per site with unit mean."""
        if len(self.site_scales) != self.n_sites:
            raise ValueError("site_scales must have one entry per site")
        mean = sum(self.site_scales) / self.n_sites
        if abs(mean - 1.0) > SCALE_MEAN_TOLERANCE:
            raise ValueError(f"site_scales must average to 1, got {mean}")
        return self

    @classmethod
    def homogeneous(
        cls,
        n_sites: int,
        n_meas: int,
        p_c: float = 0.5,
        p01: float = 0.04,
        p10: float = 0.04,
    ) -> "ArrayModel":
        """Array with every site driven at the nominal Rabi frequency."""
        return cls(
            n_sites=n_sites,
            n_meas=n_meas,
            p_c=p_c,
            p01=p01,
            p10=p10,
            site_scales=(1.0,) * n_sites,
        )

    def with_spam(self, p01: float, p10: float) -> "ArrayModel":
        return ArrayModel(**{**self.model_dump(), "p01": p01, "p10": p10})
