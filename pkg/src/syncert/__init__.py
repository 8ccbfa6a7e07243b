"""Matrix measures, graph spectra and contraction certificates for
synchronization of diffusively coupled systems."""

from .errors import (ConfigError, DivergenceError, DomainViolation, InvalidArgument,
                     SyncertError, Unsupported)
from .graphs import (Graph, cartesian, complete, custom, grid, incidence, k_matrix, lambda2,
                     laplacian, line, star)
from .measures import NormSpec, induced_matrix_norm, matrix_measure, vector_norm
from .models import DiffusionSpec, biochemical, goodwin, linear_tv, sample_domain
from .certify import Certificate, check_sync_condition, search_weight, sup_measure
from .simulate import (BoundForm, assemble_network, discretize_pde_1d, integrate_rk4,
                       verify_bound)

__version__ = "0.1.0"
