"""Balanced configurations of catenoid necks in saddle-tower limits."""

from .config import (
    Configuration,
    LayerResidues,
    derive_residues,
    from_gaps,
    from_residues,
    normalize_scale,
    reverse_layers,
    theta1,
    theta2,
    validate,
)
from .forces import ForceReport, PsiForm, force, force_alt, force_residue_oracle, jacobian, layer_force_sum, psi_form
from .options import SolveOptions

__version__ = "0.1.0"
