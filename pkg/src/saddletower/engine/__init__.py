from ..options import SolveOptions
from .analysis import (
    EmbeddednessReport,
    RigidityReport,
    concavity_check,
    concavity_values,
    detect_symmetries,
    embeddedness_check,
    profile_is_concave,
    rigidity,
)
from .concat import concatenate, symmetric_chain, tail_block
from .genus0 import genus0_solve, random_embedded_theta
from .glue import GlueScan, glue_config, glue_phase_scan, glue_series_leading, glue_slope, im_g2
from .newton import MultiStartResult, SolveLog, multistart_balance, newton_balance

__all__ = [
    "SolveOptions", "EmbeddednessReport", "RigidityReport", "concavity_check", "concavity_values",
    "detect_symmetries", "embeddedness_check", "profile_is_concave", "rigidity", "concatenate",
    "symmetric_chain", "tail_block", "genus0_solve", "random_embedded_theta", "GlueScan",
    "glue_config", "glue_phase_scan", "glue_series_leading", "glue_slope", "im_g2",
    "MultiStartResult", "SolveLog", "multistart_balance", "newton_balance",
]
