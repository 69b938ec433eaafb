"""Random diagonal unitary gates: ensembles, operator Schmidt spectra,
spectral moments and entropies, entangling power, and contra-diagonalization."""

__version__ = "0.1.0"

from .contradiag import (ContradiagResult, contradiagonalize, copied_information, fourier_matrix,
                         majorization_chain_check, max_offdiag_weight, max_orbit_distance,
                         measurement_entropy, offdiag_weight, orbit_distance, prescribe_diagonal,
                         sylvester_hadamard)
from .ensembles import (EnsembleConfig, RandomStream, diagonal_gate_to_unimodular, sample,
                        sample_diagonal_gate, sample_ginibre, sample_haar_state, sample_haar_unitary,
                        sample_hs_state, sample_unimodular, unimodular_to_state)
from .epower import (diag_ensemble_epower_mc, diag_gate_avg_purity, entangling_power_mc,
                     linear_entanglement, mean_epower_diag, mean_epower_haar)
from .errors import InfeasibleTargetError, InvalidInputError, ResourceLimitError, UnsupportedOrderError
from .linalg_core import (majorizes, renyi_entropy, shannon_entropy, singular_values,
                          von_neumann_entropy)
from .moments import (arcsine_density, borel_triangle, catalan_number, catalan_triangle,
                      count_doublet_words, hs_mean_entropy, hs_moment, mp_density, mp_moment,
                      ue_cumulants, ue_mean_entropy, ue_moment, ue_moment_continued)
from .schmidt import (fourier_gate, gate_entanglement_entropy, operator_schmidt_decomposition,
                      reshuffle, schmidt_spectrum)
