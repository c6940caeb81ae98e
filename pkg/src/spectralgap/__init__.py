"""Spectral radii of averaged unitary representations of groups.

Core objects: finite and word groups, exact probability measures,
unitary representations, averaged operators ``pi(mu)`` with their spectra,
random walks on free and free abelian groups, and circle-group scenarios.
"""

from .errors import ConfigError, NumericalError, ResourceCapError, SpectralGapError
from .groups import (FiniteGroup, coset_witness, cyclic, dihedral, direct_product, from_table,
                     generated_subgroup, is_adapted, is_strongly_adapted, named_group, quaternion,
                     symmetric)
from .measure import (ProbMeasure, convolution_power, convolve, dirac, lazy, nu_of, reflect,
                      uniform, uniform_on_generators)
from .rep import (UnitaryRep, WeightedGSet, character, commutant_dimension, coset_gset, direct_sum,
                  explicit_rep, fixed_subspace, is_ergodic, quasi_regular_rep, regular_rep,
                  restrict_to_mean_zero, tensor_with_conjugate)
from .spectral import (AveragedOperator, SpectralReport, average, check_hs_inequality,
                       check_nu_identities, check_polar_identities, check_tensor_power_bound,
                       spectral_radius)
from .tolerances import DEFAULT, Tolerances, get_profile
from .words import FreeAbelianGroup, FreeGroup, named_word_group

__version__ = "0.1.0"
