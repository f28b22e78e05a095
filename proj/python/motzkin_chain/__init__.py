"""Area-weighted colored Motzkin chain: exact spectra, mixing bounds, entropy."""

from ._core import (
    MotzkinError,
    __version__,
    areas,
    conductance,
    count,
    entropy,
    full_space_gap,
    gap_relation,
    ground_state,
    hamiltonian_gap,
    hardy_ramanujan,
    lemma_suite,
    mcmc,
    midpoint_height,
    partition_count,
    run,
    schmidt_spectrum,
    stationary,
    theorem_bound,
    transition_beta,
    walk_info,
    walks,
)
from ._core import h_subspace_triplets as _h_triplets
from ._core import transition_triplets as _p_triplets


def _sparse(trip):
    import scipy.sparse

    rows, cols, vals, shape = trip
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=shape)


def h_subspace(n, s, t):
    """H(t) restricted to the walk subspace, as a scipy CSR matrix."""
    return _sparse(_h_triplets(n, s, t))


def transition_matrix(n, s, t, from_h=False):
    """The chain P as a scipy CSR matrix; from_h builds it through H."""
    return _sparse(_p_triplets(n, s, t, from_h))


__all__ = [name for name in dir() if not name.startswith("_")]
