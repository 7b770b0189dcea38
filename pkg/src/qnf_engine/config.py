"""Run configuration schema."""

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .core_symbols import AtomicSymbol, Context, canonical_potential, load_symbol
from .estimates import diophantine_certify

logger = logging.getLogger(__name__)

GOLDEN = (1.0 + 5.0**0.5) / 2.0


class RunConfig(BaseModel):
    """
    Validated configuration of one engine run.

    hbar and epsilon accept a scalar or a sweep list; commands that need a
    single value use the first entry. When neither potential nor
    potential_file is given the canonical 2 cos t (cos x_1 + cos x_2) is used.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    l: int = Field(default=2, ge=2, description="Torus dimension")
    omega: List[float] = Field(default_factory=lambda: [1.0, GOLDEN])
    tau: float = Field(default=1.5, description="Diophantine exponent, > l - 1")
    gamma: float = Field(default=2.0, gt=0.0, description="Diophantine constant")
    q_max: int = Field(default=1000, ge=1, description="Certificate lattice radius")
    rho: float = Field(default=1.0, gt=0.0, description="Analyticity radius")
    hbar: Union[float, List[float]] = 0.1
    epsilon: Union[float, List[float]] = 1e-3
    order_K: int = Field(default=3, ge=1, le=6)
    kam_steps: int = Field(default=2, ge=0, le=4)
    mode_box_M: int = Field(default=12, ge=1)
    tol_neumann: float = Field(default=1e-10, gt=0.0)
    tol_prune: float = Field(default=0.0, ge=0.0)
    atom_budget: int = Field(default=200_000, ge=1)
    potential: Optional[List[List[float]]] = None
    potential_file: Optional[str] = None
    normalize_omega: bool = False
    certify: bool = False
    egorov_epsilon: float = 0.01
    flow_steps_per_unit: int = Field(default=10_000, ge=1)
    xi_box: float = Field(default=1.0, gt=0.0)
    interior_margin: int = Field(default=2, ge=0)

    @field_validator("hbar")
    @classmethod
    def _check_hbar(cls, value: Union[float, List[float]]) -> Union[float, List[float]]:
        values = value if isinstance(value, list) else [value]
        if not values:
            raise ValueError("hbar sweep must not be empty")
        for h in values:
            if not 0.0 < h <= 1.0:
                raise ValueError(f"hbar must lie in (0, 1], got {h}")
        return value

    @field_validator("epsilon")
    @classmethod
    def _check_epsilon(
        cls, value: Union[float, List[float]]
    ) -> Union[float, List[float]]:
        if isinstance(value, list) and not value:
            raise ValueError("epsilon sweep must not be empty")
        return value

    @model_validator(mode="after")
    def _check_shapes(self) -> "RunConfig":
        if len(self.omega) != self.l:
            raise ValueError(f"omega has {len(self.omega)} entries but l = {self.l}")
        if self.tau <= self.l - 1:
            raise ValueError(f"tau must exceed l - 1 = {self.l - 1}, got {self.tau}")
        if self.potential is not None:
            if self.potential_file is not None:
                raise ValueError("give either potential or potential_file, not both")
            for record in self.potential:
                if len(record) != 3 + self.l:
                    raise ValueError(
                        f"potential record {record} must have {3 + self.l} fields"
                    )
        return self

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Read and validate a JSON config file."""
        return cls.model_validate(json.loads(Path(path).read_text()))

    @property
    def hbars(self) -> List[float]:
        return self.hbar if isinstance(self.hbar, list) else [self.hbar]

    @property
    def epsilons(self) -> List[float]:
        return self.epsilon if isinstance(self.epsilon, list) else [self.epsilon]

    def context(self, hbar: Optional[float] = None) -> Context:
        """
        Engine context at the given hbar (the first configured one by default).

        With certify set, the Diophantine scan runs first and the certificate
        is attached, so gamma is checked against the measured constant.
        """
        ctx = Context.create(
            omega=self.omega,
            hbar=self.hbars[0] if hbar is None else hbar,
            gamma=self.gamma,
            tau=self.tau,
            rho=self.rho,
            normalize=self.normalize_omega,
        )
        if self.certify:
            certificate = diophantine_certify(ctx.omega, self.tau, self.q_max)
            ctx = Context(
                l=ctx.l, omega=ctx.omega, hbar=ctx.hbar, gamma=ctx.gamma,
                tau=ctx.tau, rho=ctx.rho, epsilon_factor=ctx.epsilon_factor,
                certificate=certificate,
            )
        return ctx

    def potential_symbol(self) -> AtomicSymbol:
        """The perturbation V as an atomic symbol."""
        if self.potential is not None:
            return AtomicSymbol.from_records(self.potential, self.l)
        if self.potential_file is not None:
            return load_symbol(self.potential_file, self.l)
        logger.debug("No potential configured, using the canonical one")
        return canonical_potential(self.l)


__all__ = ["RunConfig"]
