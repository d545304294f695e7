"""Exact and reference values the estimators are checked against."""

import math
from typing import Literal

from pydantic import BaseModel, ConfigDict

from qubitsep.exceptions import ConfigurationError

PI = math.pi

ConstantKind = Literal["exact", "conjecture", "estimate"]


class ReferenceConstant(BaseModel):
    """One named constant, as printed by the ``constants`` subcommand."""

    model_config = ConfigDict(frozen=True)

    name: str
    closed_form: str
    decimal: float
    kind: ConstantKind = "exact"
    provenance: str = "paper"


class ReferenceConstants(BaseModel):
    """The constant table, keyed by name."""

    model_config = ConfigDict(frozen=True)

    entries: dict[str, ReferenceConstant]

    def lookup(self, name: str) -> ReferenceConstant:
        try:
            return self.entries[name]
        except KeyError as exc:
            raise ConfigurationError(f"Unknown reference constant {name!r}") from exc

    def value(self, name: str) -> float:
        return self.lookup(name).decimal

    def names(self) -> list[str]:
        return list(self.entries)


_TABLE: tuple[tuple[str, str, float, ConstantKind], ...] = (
    ("V_total", "pi^8/1680", PI**8 / 1680, "exact"),
    ("V_sep_conjecture", "pi^6/2310", PI**6 / 2310, "conjecture"),
    ("P_sep_conjecture", "8/(11*pi^2)", 8 / (11 * PI**2), "conjecture"),
    ("A_total", "142*pi^7/12285", 142 * PI**7 / 12285, "exact"),
    ("A_sep_candidate_175", "pi^5/175", PI**5 / 175, "conjecture"),
    ("A_sep_candidate_548", "pi^6/548", PI**6 / 548, "conjecture"),
    ("haar_truncated", "pi^6/96", PI**6 / 96, "exact"),
    ("haar_untruncated", "pi^9/(288*sqrt(2))", PI**9 / (288 * math.sqrt(2)), "exact"),
    ("D_2", "2*pi", 2 * PI, "exact"),
    ("D_3", "64*pi/35", 64 * PI / 35, "exact"),
    ("D_4", "2*pi^2/35", 2 * PI**2 / 35, "exact"),
    ("D_5", "8388608*pi^2/156165009", 8388608 * PI**2 / 156165009, "exact"),
    ("D_6", "2.16436e-6", 2.16436e-6, "estimate"),
    ("restricted_integral_m3", "512/63", 512 / 63, "exact"),
    ("restricted_integral_m4", "0.871513859457", 0.871513859457, "exact"),
    ("restricted_integral_m5", "0.00736276442200", 0.00736276442200, "estimate"),
    ("V_total_m2", "2*pi^2", 2 * PI**2, "exact"),
    ("A_total_m2", "16*pi", 16 * PI, "exact"),
    ("A_total_m3", "256*pi^3/21", 256 * PI**3 / 21, "exact"),
    ("A_total_m5", "0.187041154554", 0.187041154554, "estimate"),
    ("A_total_m6", "1.874312e-5", 1.874312e-5, "estimate"),
    ("min_scalar_curvature_m4", "570", 570.0, "exact"),
    ("unit_ball_volume_d15", "256*pi^7/2027025", 256 * PI**7 / 2027025, "exact"),
    ("mean_negativity", "0.177162", 0.177162, "estimate"),
    ("mean_concurrence", "0.197284", 0.197284, "estimate"),
    ("A_sep_estimate", "1.75414", 1.75414, "estimate"),
    ("root_point_fraction", "8083953/11800000", 8083953 / 11800000, "estimate"),
    ("mean_root_count", "15330369/11800000", 15330369 / 11800000, "estimate"),
)


def reference_constants() -> ReferenceConstants:
    """The full reference table."""
    return ReferenceConstants(
        entries={
            name: ReferenceConstant(name=name, closed_form=closed, decimal=value, kind=kind)
            for name, closed, value, kind in _TABLE
        }
    )
