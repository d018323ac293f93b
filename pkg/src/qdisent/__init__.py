"""Sufficient conditions for state-dependent disentanglement of bipartite states.

Typical use::

    from qdisent import catalog, classify, run
    s = catalog.eq4_set()
    classify(s).selected_machine          # Machine.LOCAL_BROADCAST_B
    run(s, "psi2").output_is_separable    # True
"""

from .disentangle import (
    Classification,
    DisentanglementReport,
    Machine,
    StateSet,
    are_perfectly_distinguishable,
    broadcast,
    broadcast_closed_form,
    broadcast_unitary,
    build_machine,
    classify,
    commuting_marginals,
    disentangle_to_product,
    disentangle_to_separable,
    fits_general_form,
    have_identical_marginals,
    identify,
    local_broadcast,
    run,
    run_all,
    verify,
)
from .entanglement import (
    BipartiteState,
    PureState,
    is_maximally_entangled,
    is_ppt,
    is_product,
    is_separable,
    marginals,
    negativity,
)
from .linalg import Tolerance

__version__ = "0.1.0"
