"""Hot numeric kernels with numba acceleration and pure-numpy fallbacks.

Each public function dispatches on :data:`sonolens._accel.HAVE_NUMBA`. The
numba path and the numpy path implement the same arithmetic; results agree to
floating-point rounding (summation order may differ).
"""

import numpy as np

from sonolens._accel import HAVE_NUMBA, njit


# ---------------------------------------------------------------------------
# constant-Q inner products

@njit(cache=True, nogil=True)
def _cqt_jit(x, wcos, wsin, offsets, lengths, norms, hop, out):  # pragma: no cover
    for k in range(lengths.shape[0]):
        off = offsets[k]
        nk = lengths[k]
        acc = 0.0
        count = 0
        p = 0
        while p + nk <= x.shape[0]:
            re = 0.0
            im = 0.0
            for n in range(nk):
                re += x[p + n] * wcos[off + n]
                im += x[p + n] * wsin[off + n]
            acc += (re * re + im * im) / norms[k]
            count += 1
            p += hop
        if count > 0:
            out[k] = acc / count


def _cqt_numpy(x, wcos, wsin, offsets, lengths, norms, hop, out):
    for k in range(lengths.shape[0]):
        off = offsets[k]
        nk = lengths[k]
        n_pos = (x.shape[0] - nk) // hop + 1
        if n_pos <= 0:
            continue
        frames = np.lib.stride_tricks.sliding_window_view(x, nk)[::hop][:n_pos]
        re = frames @ wcos[off:off + nk]
        im = frames @ wsin[off:off + nk]
        out[k] = np.mean((re * re + im * im) / norms[k])


def cqt_bin_responses(x, wcos, wsin, offsets, lengths, norms, hop):
    """Mean squared inner product of ``x`` with each windowed-sinusoid atom.

    Atoms are stored flattened (``wcos``/``wsin`` with ``offsets``/``lengths``);
    ``norms[k]`` divides the squared magnitude (window power normalization).
    Atoms slide across ``x`` with stride ``hop``; responses are averaged over
    all complete placements.
    """
    out = np.zeros(lengths.shape[0])
    fn = _cqt_jit if HAVE_NUMBA else _cqt_numpy
    fn(np.ascontiguousarray(x, dtype=np.float64), wcos, wsin,
       offsets, lengths, norms, hop, out)
    return out


# ---------------------------------------------------------------------------
# two-channel filter bank steps (periodic extension)

@njit(cache=True, nogil=True)
def _dwt_jit(x, h, g):  # pragma: no cover
    n = x.shape[0]
    half = n // 2
    taps = h.shape[0]
    a = np.zeros(half)
    d = np.zeros(half)
    for i in range(half):
        s = 0.0
        t = 0.0
        for m in range(taps):
            v = x[(2 * i + m) % n]
            s += h[m] * v
            t += g[m] * v
        a[i] = s
        d[i] = t
    return a, d


def _dwt_numpy(x, h, g):
    n = x.shape[0]
    half = n // 2
    idx = (2 * np.arange(half)[:, None] + np.arange(h.shape[0])[None, :]) % n
    win = x[idx]
    return win @ h, win @ g


def dwt_periodic_step(x, h, g):
    """One analysis step of the orthonormal two-channel bank, circular.

    Returns (approx, detail), each of length ``len(x) // 2``. ``len(x)`` must
    be even.
    """
    fn = _dwt_jit if HAVE_NUMBA else _dwt_numpy
    return fn(np.ascontiguousarray(x, dtype=np.float64), h, g)


@njit(cache=True, nogil=True)
def _idwt_jit(a, d, h, g):  # pragma: no cover
    half = a.shape[0]
    n = 2 * half
    taps = h.shape[0]
    x = np.zeros(n)
    for i in range(half):
        for m in range(taps):
            x[(2 * i + m) % n] += h[m] * a[i] + g[m] * d[i]
    return x


def _idwt_numpy(a, d, h, g):
    half = a.shape[0]
    n = 2 * half
    x = np.zeros(n)
    idx = (2 * np.arange(half)[:, None] + np.arange(h.shape[0])[None, :]) % n
    np.add.at(x, idx, a[:, None] * h[None, :] + d[:, None] * g[None, :])
    return x


def idwt_periodic_step(a, d, h, g):
    """Transpose (= inverse, filters orthonormal) of :func:`dwt_periodic_step`."""
    fn = _idwt_jit if HAVE_NUMBA else _idwt_numpy
    return fn(np.ascontiguousarray(a, dtype=np.float64),
              np.ascontiguousarray(d, dtype=np.float64), h, g)


@njit(cache=True, nogil=True)
def _atrous_jit(x, h, g, dilation):  # pragma: no cover
    n = x.shape[0]
    taps = h.shape[0]
    a = np.zeros(n)
    d = np.zeros(n)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(n):
        s = 0.0
        t = 0.0
        for m in range(taps):
            v = x[(i + m * dilation) % n]
            s += h[m] * v
            t += g[m] * v
        a[i] = s * inv_sqrt2
        d[i] = t * inv_sqrt2
    return a, d


def _atrous_numpy(x, h, g, dilation):
    n = x.shape[0]
    idx = (np.arange(n)[:, None] + dilation * np.arange(h.shape[0])[None, :]) % n
    win = x[idx]
    s = 1.0 / np.sqrt(2.0)
    return (win @ h) * s, (win @ g) * s

def atrous_step(x, h, g, dilation):
    """One undecimated (a-trous) analysis step with circular extension.

    Filters are dilated by ``dilation`` (2**level). The 1/sqrt(2) factor keeps
    total energy conserved across levels for orthonormal filter pairs.
    """
    fn = _atrous_jit if HAVE_NUMBA else _atrous_numpy
    return fn(np.ascontiguousarray(x, dtype=np.float64), h, g, dilation)
