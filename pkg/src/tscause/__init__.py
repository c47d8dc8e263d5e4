"""Pairwise causality measures for uniformly sampled time series:
Granger causality, transfer entropy, compression-complexity causality and
convergent cross mapping, with Pearson correlation as the associational
baseline."""

from .ccc import CccParams, CccResult, cc_joint, cc_self, ccc_pair
from .ccm import (CcmResult, ConvergenceCurve, CrossMapResult, Manifold, ccm_convergence,
                  cross_map_skill, delay_embed)
from .core import (CorrelationResult, StationarityReport, TimeSeries, pearson_correlation,
                   standardize, stationarity_check)
from .gc import GcResult, ModelFit, fit_restricted, fit_unrestricted, gc_test, granger_f, select_order
from .surrogate import SignificanceResult, SurrogateSpec, make_surrogate, significance_test
from .symbolic import EtcResult, SymbolSequence, etc, etc_joint, symbolize
from .synth import SyntheticDataset, gen_confounded, gen_coupled_ar, gen_coupled_maps, gen_lagged_copy
from .te import TeConfig, TeResult, effective_te, transfer_entropy

__version__ = "0.1.0"
