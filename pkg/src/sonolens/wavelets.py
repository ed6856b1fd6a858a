"""Orthonormal wavelet filter banks: packet decomposition and undecimated transform.

The 16-tap Daubechies-8 and Symlet-8 scaling filters are hardcoded below
(computed once by spectral factorization of the Daubechies polynomial; the
Symlet variant is the least-asymmetric factorization). A unit test asserts
orthonormality (sum h = sqrt(2), sum h^2 = 1, double-shift orthogonality)
so the tables cannot rot silently.
"""

from __future__ import annotations

import numpy as np

from sonolens.kernels import atrous_step, dwt_periodic_step, idwt_periodic_step

DB8 = np.array([
    0.05441584224310401,
    0.31287159091429995,
    0.6756307362972898,
    0.5853546836542067,
    -0.015829105256349306,
    -0.2840155429615469,
    0.0004724845739132828,
    0.12874742662047847,
    -0.017369301001807547,
    -0.044088253930794755,
    0.013981027917398282,
    0.008746094047405777,
    -0.004870352993451574,
    -0.00039174037337694705,
    0.0006754494064505693,
    -0.00011747678412476953,
])

SYM8 = np.array([
    0.001889950332767689,
    -0.0003029205147241331,
    -0.014952258337062199,
    0.0038087520138944896,
    0.04913717967373029,
    -0.027219029917103486,
    -0.0519458381078818,
    0.36444189483617895,
    0.777185751699628,
    0.4813596512590534,
    -0.061273359067811076,
    -0.14329423835127267,
    0.007607487324976609,
    0.03169508781152599,
    -0.0005421323318000107,
    -0.0033824159510050028,
])

FILTERS = {"db8": DB8, "sym8": SYM8}


def quadrature_pair(name: str) -> tuple[np.ndarray, np.ndarray]:
    """Lowpass/highpass analysis pair for a named wavelet family."""
    h = FILTERS[name]
    taps = h.shape[0]
    g = np.array([(-1.0) ** m * h[taps - 1 - m] for m in range(taps)])
    return h, g


def gray_permutation(levels: int) -> list[int]:
    """Natural-order leaf index for each frequency-ordered position.

    Descending through a highpass branch mirrors the spectrum, so the
    frequency ordering of packet leaves is the binary-reflected Gray code of
    the position index.
    """
    return [f ^ (f >> 1) for f in range(2 ** levels)]


def packet_analyze(x: np.ndarray, name: str, levels: int) -> list[np.ndarray]:
    """Full wavelet packet tree to the given depth, periodic extension.

    ``len(x)`` must be divisible by ``2**levels``. Returns the 2**levels leaf
    coefficient arrays in natural (filter-tree) order.
    """
    h, g = quadrature_pair(name)
    nodes = [np.asarray(x, dtype=np.float64)]
    for _ in range(levels):
        nxt = []
        for node in nodes:
            a, d = dwt_periodic_step(node, h, g)
            nxt.append(a)
            nxt.append(d)
        nodes = nxt
    return nodes


def packet_reconstruct(leaves: list[np.ndarray], name: str) -> np.ndarray:
    """Inverse of :func:`packet_analyze` (exact for orthonormal filters)."""
    h, g = quadrature_pair(name)
    nodes = [np.asarray(v, dtype=np.float64) for v in leaves]
    while len(nodes) > 1:
        nodes = [idwt_periodic_step(nodes[i], nodes[i + 1], h, g)
                 for i in range(0, len(nodes), 2)]
    return nodes[0]


def packet_band_energies(x: np.ndarray, name: str, levels: int) -> np.ndarray:
    """Leaf energies in frequency order (band k covers k-th dyadic slice)."""
    leaves = packet_analyze(x, name, levels)
    perm = gray_permutation(levels)
    return np.array([float(np.sum(leaves[p] ** 2)) for p in perm])


def swt_analyze(x: np.ndarray, name: str, levels: int) -> tuple[np.ndarray, list[np.ndarray]]:
    """Undecimated (a-trous) transform, circular, energy-conserving.

    Returns ``(approx_L, [detail_1, ..., detail_L])``, each the length of
    ``x``. ``len(x)`` must be divisible by ``2**levels`` so the dilated
    filters tile the circle.
    """
    h, g = quadrature_pair(name)
    a = np.asarray(x, dtype=np.float64)
    details = []
    for level in range(levels):
        a, d = atrous_step(a, h, g, 2 ** level)
        details.append(d)
    return a, details


def swt_band_energies(x: np.ndarray, name: str, levels: int) -> np.ndarray:
    """Band energies in ascending frequency: [approx_L, d_L, ..., d_1]."""
    a, details = swt_analyze(x, name, levels)
    energies = [float(np.sum(a ** 2))]
    for d in reversed(details):
        energies.append(float(np.sum(d ** 2)))
    return np.array(energies)
