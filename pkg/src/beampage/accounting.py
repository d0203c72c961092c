"""Radio resource costing of every paging-related transmission.

All costs are reported in RB-symbol units (one resource block over one OFDM
symbol = 12 resource elements), so one-symbol control allocations and the
two-symbol presence bursts share a single axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

__all__ = ["CostModel", "ConfigurationError", "DEFAULT_COST_MODEL"]


class ConfigurationError(ValueError):
    """Raised when a cost or simulation parameter is outside the supported set."""


# DL indication payload grows with the beam-count bitmap; RBs per supported
# beam count, one OFDM symbol each.
_DLI_RBS_BY_BEAMS = {16: 6, 32: 6, 64: 6, 128: 12, 256: 24}


@dataclass(frozen=True)
class CostModel:
    """Unit prices for paging transmissions.

    dci_paging_rbs: control-set allocation of the paging DCI (one symbol).
    par_res: resource elements of one presence burst (1 RE over 2 symbols).
    pdsch_*: paging-message coding chain parameters.
    dli_rbs_by_beams: DL-indication allocation per supported beam count.
    total_rbs: carrier-wide RBs available in any one symbol.
    """

    res_per_rb_symbol: int = 12
    dci_paging_rbs: int = 48
    par_res: int = 2
    pdsch_bits_per_ue: int = 48
    pdsch_modulation_bits: int = 2
    pdsch_code_rate: float = 0.37
    pdsch_symbols: int = 1
    dli_rbs_by_beams: dict[int, int] = field(default_factory=lambda: dict(_DLI_RBS_BY_BEAMS))
    total_rbs: int = 264

    def __post_init__(self):
        for name in ("res_per_rb_symbol", "dci_paging_rbs", "par_res", "pdsch_bits_per_ue",
                     "pdsch_modulation_bits", "pdsch_symbols", "total_rbs"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive")
        if not 0 < self.pdsch_code_rate <= 1:
            raise ConfigurationError(f"pdsch_code_rate must lie in (0, 1], got {self.pdsch_code_rate}")
        if self.dci_paging_rbs > self.total_rbs:
            raise ConfigurationError("paging DCI allocation exceeds the carrier")

    def with_overrides(self, **kwargs) -> "CostModel":
        return replace(self, **kwargs)

    def paging_dci_cost(self, active_beams: int) -> float:
        """DCI sweep cost: one allocation per active beam."""
        if active_beams < 0:
            raise ValueError(f"active_beams must be >= 0, got {active_beams}")
        return float(self.dci_paging_rbs * active_beams)

    def pdsch_paging_cost(self, paged_ues: int, beams_carrying_message: int) -> float:
        """Paging-message cost, replicated on each beam that carries it.

        Chain: identifier bits -> coded bits at the configured rate -> resource
        elements at the modulation order -> whole RBs, per carrying beam.
        """
        if paged_ues < 0:
            raise ValueError(f"paged_ues must be >= 0, got {paged_ues}")
        if beams_carrying_message < 0:
            raise ValueError(f"beams_carrying_message must be >= 0, got {beams_carrying_message}")
        if paged_ues == 0 or beams_carrying_message == 0:
            return 0.0
        info_bits = self.pdsch_bits_per_ue * paged_ues
        coded_bits = math.ceil(info_bits / self.pdsch_code_rate)
        res = math.ceil(coded_bits / self.pdsch_modulation_bits)
        res_per_rb = self.res_per_rb_symbol * self.pdsch_symbols
        rbs = math.ceil(res / res_per_rb)
        if rbs > self.total_rbs:
            raise ConfigurationError(
                f"paging message for {paged_ues} UEs needs {rbs} RBs, carrier has {self.total_rbs}"
            )
        return float(rbs * self.pdsch_symbols * beams_carrying_message)

    def par_cost(self, par_transmissions: int | float) -> float:
        """Uplink cost of the presence bursts actually transmitted."""
        if par_transmissions < 0:
            raise ValueError(f"par_transmissions must be >= 0, got {par_transmissions}")
        return self.par_res / self.res_per_rb_symbol * par_transmissions

    def par_reserved_cost(self, total_beams: int) -> float:
        """Uplink resources reserved per paging group per cycle: one burst
        opportunity per beam, used or not."""
        return self.par_cost(total_beams)

    def dli_cost(self, total_beams: int, recipient_beams: int) -> float:
        """DL-indication cost: one bitmap allocation per recipient beam."""
        if recipient_beams < 0:
            raise ValueError(f"recipient_beams must be >= 0, got {recipient_beams}")
        rbs = self.dli_rbs_by_beams.get(total_beams)
        if rbs is None:
            supported = sorted(self.dli_rbs_by_beams)
            raise ConfigurationError(
                f"no DL-indication allocation defined for {total_beams} beams; supported: {supported}"
            )
        return float(rbs * recipient_beams)


DEFAULT_COST_MODEL = CostModel()
