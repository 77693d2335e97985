"""Exact simulation of two-time entangled histories and temporal CHSH tests."""
__version__ = "0.1.0"

from .chsh import (
    BELL_PHI_PLUS,
    PAPER_QUAD,
    AngleQuad,
    correlator_spatial,
    correlator_temporal,
    maximize_violation,
    s_spatial,
    s_temporal,
)
from .errors import InvalidArgumentError, NullHistoryError, TempoBellError, UnsupportedDimensionError
from .functionals import (
    QuadratureGrid,
    analytic_v_oracle,
    classify,
    m_functional,
    monte_carlo_moments,
    v_bounds,
    v_functional,
)
from .history import (
    EvolvedInitial,
    History,
    HistoryState,
    HistoryTerm,
    entangled_zz_history,
    product_history,
    proj_amplitude,
)
from .kernels import BACKEND
from .qstate import BlochAngles, Ket, Unitary, chi, chi_perp, inner, project, tensor
